//! Identity checking with interchangeable backends: symbolic proof over
//! rational functions, exact sampling at seeded random points, and
//! exhaustive enumeration of finite boxes.

mod checks;
mod engine;
mod instances;
mod report;
mod trace;

pub use checks::{
    check_boundarization, check_equation, check_involutive, check_r20, check_symmetric, check_tropical_reading,
    is_boundarizable, R20Form, R20Variant,
};
pub use instances::{enumerate_box, random_scalar, sample_states, BoxEnumeration, SAMPLE_MAX};
pub use report::{Counterexample, Instances, Outcome, VerificationReport};
pub use trace::{trace_appendix, Appendix, AppendixData, LineResult, TraceReport};

use std::fmt;

use thiserror::Error;

use crate::catalog::CatalogError;
use crate::kernel::KernelError;

/// Default cap on the number of terms of any intermediate polynomial.
pub const DEFAULT_TERM_BUDGET: usize = 200_000;
/// Default cap on the number of states an exhaustive check may visit.
pub const DEFAULT_CEILING: u64 = 50_000_000;
/// Default bound for integer slots when sampling.
pub const DEFAULT_SAMPLE_INT_BOUND: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    /// Proof by expansion over rational functions in one variable per slot.
    Symbolic { term_budget: Option<usize> },
    /// Exact evaluation at `count` seeded random points.
    Sample { count: usize, seed: u64, int_bound: u64 },
    /// Every state with integer slots in `0..=int_bound`.
    Exhaustive { int_bound: u64, ceiling: u64 },
}

impl Backend {
    pub fn symbolic() -> Self {
        Backend::Symbolic {
            term_budget: Some(DEFAULT_TERM_BUDGET),
        }
    }

    pub fn sample(count: usize, seed: u64) -> Self {
        Backend::Sample {
            count,
            seed,
            int_bound: DEFAULT_SAMPLE_INT_BOUND,
        }
    }

    pub fn exhaustive(int_bound: u64) -> Self {
        Backend::Exhaustive {
            int_bound,
            ceiling: DEFAULT_CEILING,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Backend::Sample { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Symbolic { .. } => f.write_str("symbolic"),
            Backend::Sample { count, seed, int_bound } => {
                write!(f, "sample(count={count}, seed={seed}, bound={int_bound})")
            }
            Backend::Exhaustive { int_bound, .. } => write!(f, "exhaustive(bound={int_bound})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("backend {backend} cannot run this check: {reason}")]
    BackendIncompatible { backend: String, reason: String },
    #[error("symbolic expansion of `{check}` exceeded the budget of {budget} terms")]
    BudgetExceeded { check: String, budget: usize },
    #[error("box has {states} states, more than the ceiling of {ceiling}")]
    Overflow { states: String, ceiling: u64 },
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
