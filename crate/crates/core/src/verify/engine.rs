//! The loop shared by every check: two sides evaluated on an instance set.

use std::time::Instant;

use rayon::prelude::*;

use crate::kernel::{KernelError, LocalMap, Param, Signature, State};
use crate::poly::symbolic_state;
use crate::scalar::SlotDomain;

use super::instances::{sample_states, BoxEnumeration};
use super::{Backend, Counterexample, Instances, Outcome, VerificationReport, VerifyError};

pub(crate) type Sides<'a> = dyn Fn(&State) -> Result<(State, State), KernelError> + Sync + 'a;
pub(crate) type Admit<'a> = dyn Fn(&State) -> bool + Sync + 'a;

/// `lhs(x) = rhs(x)` for all `x` in `inputs`, optionally restricted by `admit`.
pub(crate) struct Check<'a> {
    pub name: String,
    pub inputs: Signature,
    /// Extra symbols (symbolic parameters) the sides may refer to.
    pub extra_vars: Vec<String>,
    pub admit: Option<&'a Admit<'a>>,
    pub sides: &'a Sides<'a>,
}

/// Names of symbolic parameters among `maps`.
pub(crate) fn symbolic_params<'m>(maps: impl IntoIterator<Item = &'m LocalMap>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for m in maps {
        if let Some(Param::Symbolic(name)) = m.param() {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
    }
    out
}

fn strings(s: &State) -> Vec<String> {
    s.to_strings()
}

fn evaluate(check: &Check<'_>, x: &State) -> Option<Counterexample> {
    match (check.sides)(x) {
        Ok((l, r)) if l == r => None,
        Ok((l, r)) => Some(Counterexample {
            input: strings(x),
            lhs: strings(&l),
            rhs: strings(&r),
            line: None,
            note: None,
        }),
        Err(e) => Some(Counterexample {
            input: strings(x),
            lhs: Vec::new(),
            rhs: Vec::new(),
            line: None,
            note: Some(format!("evaluation failed: {e}")),
        }),
    }
}

fn report(check: &Check<'_>, backend: &Backend, instances: Instances, cex: Option<Counterexample>, start: Instant) -> VerificationReport {
    VerificationReport {
        equation: check.name.clone(),
        backend: backend.to_string(),
        seed: backend.seed(),
        instances,
        result: if cex.is_some() { Outcome::Fail } else { Outcome::Pass },
        counterexample: cex,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    }
}

pub(crate) fn run(check: &Check<'_>, backend: &Backend) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let domains: Vec<SlotDomain> = check.inputs.domains().collect();
    match backend {
        Backend::Symbolic { term_budget } => {
            if !domains.iter().all(|d| d.is_birational()) {
                return Err(VerifyError::BackendIncompatible {
                    backend: backend.to_string(),
                    reason: "discrete slot domains have no symbolic form".into(),
                });
            }
            let names: Vec<String> = check.inputs.labels().map(String::from).collect();
            let (ctx, x) = symbolic_state(&check.inputs, &names, &check.extra_vars, *term_budget)
                .expect("birational signature");
            let sides = (check.sides)(&x);
            if ctx.budget_exceeded() {
                return Err(VerifyError::BudgetExceeded {
                    check: check.name.clone(),
                    budget: term_budget.unwrap_or(0),
                });
            }
            let (l, r) = sides?;
            let equal = l == r;
            if ctx.budget_exceeded() {
                return Err(VerifyError::BudgetExceeded {
                    check: check.name.clone(),
                    budget: term_budget.unwrap_or(0),
                });
            }
            if equal {
                return Ok(report(check, backend, Instances::proved(), None, start));
            }
            let cex = numeric_witness(check, &domains).unwrap_or_else(|| {
                let k = (0..l.len()).find(|&k| l.get(k) != r.get(k)).unwrap_or(0);
                Counterexample {
                    input: x.to_strings(),
                    lhs: vec![l.get(k).to_string()],
                    rhs: vec![r.get(k).to_string()],
                    line: None,
                    note: Some(format!("component {} differs as a rational function", k + 1)),
                }
            });
            Ok(report(check, backend, Instances::Label("refuted".into()), Some(cex), start))
        }
        Backend::Sample { count, seed, int_bound } => {
            reject_symbolic_params(check, backend)?;
            let states: Vec<State> = sample_states(&domains, *count, *seed, *int_bound)
                .into_iter()
                .map(State::new)
                .filter(|x| check.admit.is_none_or(|a| a(x)))
                .collect();
            let cex = states.par_iter().find_map_first(|x| evaluate(check, x));
            Ok(report(check, backend, Instances::Count(states.len() as u64), cex, start))
        }
        Backend::Exhaustive { int_bound, ceiling } => {
            reject_symbolic_params(check, backend)?;
            let b = BoxEnumeration::new(&domains, *int_bound, *ceiling)?;
            let admitted = |i: u64| -> Option<State> {
                let x = State::new(b.state(i));
                check.admit.is_none_or(|a| a(&x)).then_some(x)
            };
            let cex = (0..b.len())
                .into_par_iter()
                .find_map_first(|i| admitted(i).and_then(|x| evaluate(check, &x)));
            let count = match check.admit {
                None => b.len(),
                Some(_) => (0..b.len()).into_par_iter().filter(|&i| admitted(i).is_some()).count() as u64,
            };
            Ok(report(check, backend, Instances::Count(count), cex, start))
        }
    }
}

fn reject_symbolic_params(check: &Check<'_>, backend: &Backend) -> Result<(), VerifyError> {
    if check.extra_vars.is_empty() {
        Ok(())
    } else {
        Err(VerifyError::BackendIncompatible {
            backend: backend.to_string(),
            reason: format!("symbolic parameter `{}` needs the symbolic backend", check.extra_vars.join(", ")),
        })
    }
}

/// After a failed proof, looks for a concrete point where the sides differ.
fn numeric_witness(check: &Check<'_>, domains: &[SlotDomain]) -> Option<Counterexample> {
    if !check.extra_vars.is_empty() {
        return None;
    }
    sample_states(domains, 256, 0, 0)
        .into_iter()
        .map(State::new)
        .find_map(|x| evaluate(check, &x))
        .map(|mut c| {
            c.note = Some("symbolic identity fails; numeric witness".into());
            c
        })
}
