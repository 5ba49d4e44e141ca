//! Set-theoretical solutions of the tetrahedron equation and the 3D reflection
//! equation: exact scalar domains, a small symbolic kernel, indexed map
//! application on product spaces, the boundarization construction, a catalog
//! of concrete maps, and pluggable identity checkers.

pub mod catalog;
pub mod cli;
pub mod kernel;
pub mod poly;
pub mod scalar;
pub mod semifield;
pub mod verify;

pub use catalog::{Catalog, EquationSpec};
pub use kernel::{CompositeExpr, LocalMap, Signature, State};
pub use poly::{MultiPoly, RatFunc, SymContext};
pub use scalar::{Bit, PosRational, Scalar, SlotDomain, TropInt};
pub use verify::{Backend, VerificationReport};
