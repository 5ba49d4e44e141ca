//! Indexed application of local maps on product spaces, composite
//! expressions, and the tetrahedral composite with its boundarization.

mod boundary;
mod composite;
mod map;
mod signature;

pub use boundary::{boundarize, phi, phi_inv, in_y, TetrahedralComposite, TETRA_LEFT, TETRA_RIGHT};
pub use composite::{infer_signature, BoundComposite, CompositeExpr, Factor, MapBindings};
pub use map::{apply_indexed, BirationalRule, FormulaPair, IntegerRule, LocalMap, Param, ScalarRule};
pub use signature::{numbered_labels, r20_labels, Signature, State};

use thiserror::Error;

use crate::scalar::{ScalarError, SlotDomain};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` used twice")]
    DuplicateLabel(String),
    #[error("map `{map}` takes {expected} slots, got {found}")]
    ArityMismatch { map: String, expected: usize, found: usize },
    #[error("map `{map}` expects {expected} in argument {position}, got `{found}`")]
    DomainMismatch {
        map: String,
        position: usize,
        expected: SlotDomain,
        found: String,
    },
    #[error("map `{map}` produced `{value}` outside {domain} in output {position}")]
    DomainClosure {
        map: String,
        position: usize,
        domain: SlotDomain,
        value: String,
    },
    #[error("label `{label}` is used both as {first} and {second}")]
    DomainConflict {
        label: String,
        first: SlotDomain,
        second: SlotDomain,
    },
    #[error("label `{0}` is not touched by any factor, so its domain is unknown")]
    UnconstrainedLabel(String),
    #[error("state {0} is not in Y (slot 2 = slot 3 and slot 5 = slot 6)")]
    NotInY(String),
    #[error("map `{0}` has a symbolic parameter but received numeric input")]
    SymbolicParameter(String),
    #[error("state has {found} slots, signature has {expected}")]
    StateLength { expected: usize, found: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
