use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;

use crate::catalog::{Catalog, ResolvedEquation, R20_TETRA_LEFT, R20_TETRA_RIGHT, SUPER_T};
use crate::kernel::{
    boundarize, numbered_labels, phi, r20_labels, CompositeExpr, IntegerRule, KernelError, LocalMap, MapBindings,
    Signature, State, TetrahedralComposite,
};
use crate::scalar::{Scalar, SlotDomain};
use crate::semifield::{semifield_eval, Expr, MinPlus};

use super::engine::{run, symbolic_params, Check};
use super::{Backend, Counterexample, Instances, Outcome, VerificationReport, VerifyError};

fn numbered_signature(domains: &[SlotDomain]) -> Signature {
    Signature::new(numbered_labels(domains.len()).into_iter().zip(domains.iter().copied())).expect("distinct labels")
}

/// `lhs = rhs` on every instance of the equation's signature.
pub fn check_equation(eq: &ResolvedEquation, backend: &Backend) -> Result<VerificationReport, VerifyError> {
    let sides = |x: &State| Ok((eq.lhs.eval(x)?, eq.rhs.eval(x)?));
    run(
        &Check {
            name: eq.id.clone(),
            inputs: eq.signature.clone(),
            extra_vars: symbolic_params(eq.maps.values()),
            admit: None,
            sides: &sides,
        },
        backend,
    )
}

/// `map . map = id`.
pub fn check_involutive(map: &LocalMap, backend: &Backend) -> Result<VerificationReport, VerifyError> {
    let sides = |x: &State| {
        let once = map.apply(x.values())?;
        Ok((State::new(map.apply(&once)?), x.clone()))
    };
    run(
        &Check {
            name: format!("involutive({})", map.id()),
            inputs: numbered_signature(map.domains()),
            extra_vars: symbolic_params([map]),
            admit: None,
            sides: &sides,
        },
        backend,
    )
}

/// `x` in reverse slot order, re-read in `domains` (so an integer 1 may
/// become a bit). `None` if some value does not fit.
fn reversed_in(x: &State, domains: &[SlotDomain]) -> Option<State> {
    x.values()
        .iter()
        .rev()
        .zip(domains)
        .map(|(v, &d)| match v.as_int() {
            Some(i) => Scalar::from_int(d, i).ok(),
            None => v.fits(d).then(|| v.clone()),
        })
        .collect::<Option<Vec<_>>>()
        .map(State::new)
}

/// `R_123 = R_321`, i.e. `P_13 R P_13 = R`, at every point whose reversal
/// is also in the domain of `map`.
pub fn check_symmetric(map: &LocalMap, backend: &Backend) -> Result<VerificationReport, VerifyError> {
    if map.arity() != 3 {
        return Err(KernelError::ArityMismatch {
            map: map.id().to_string(),
            expected: 3,
            found: map.arity(),
        }
        .into());
    }
    let doms = map.domains().to_vec();
    let admit = |x: &State| reversed_in(x, &doms).is_some();
    let sides = |x: &State| {
        let rx = reversed_in(x, &doms).expect("admitted");
        let conj = reversed_in(&State::new(map.apply(rx.values())?), &doms)
            .ok_or_else(|| KernelError::DomainMismatch {
                map: map.id().to_string(),
                position: 1,
                expected: doms[0],
                found: "reversed output".into(),
            })?;
        Ok((conj, State::new(map.apply(x.values())?)))
    };
    run(
        &Check {
            name: format!("symmetric({})", map.id()),
            inputs: numbered_signature(map.domains()),
            extra_vars: symbolic_params([map]),
            admit: Some(&admit),
            sides: &sides,
        },
        backend,
    )
}

/// `T(Y) ⊆ Y`: for `y = T(phi(x))`, slots 2, 5 equal slots 3, 6.
pub fn is_boundarizable(t: &TetrahedralComposite, backend: &Backend) -> Result<VerificationReport, VerifyError> {
    let sides = |x: &State| {
        let y = t.eval(&phi(x)?)?;
        let pick = |a: usize, b: usize| State::new(vec![y.get(a).clone(), y.get(b).clone()]);
        Ok((pick(1, 4), pick(2, 5)))
    };
    run(
        &Check {
            name: format!("boundarizable({})", t.id()),
            inputs: numbered_signature(&t.folded_domains()?),
            extra_vars: symbolic_params(t.maps().values()),
            admit: None,
            sides: &sides,
        },
        backend,
    )
}

/// The boundarization of `t` agrees with the closed form `closed`.
pub fn check_boundarization(
    t: &TetrahedralComposite,
    closed: &LocalMap,
    backend: &Backend,
) -> Result<VerificationReport, VerifyError> {
    let j = boundarize(t, format!("J[{}]", t.id()))?;
    let sides = |x: &State| Ok((State::new(j.apply(x.values())?), State::new(closed.apply(x.values())?)));
    let mut extra = symbolic_params(t.maps().values());
    for v in symbolic_params([closed]) {
        if !extra.contains(&v) {
            extra.push(v);
        }
    }
    run(
        &Check {
            name: format!("boundarize({}) = {}", t.id(), closed.id()),
            inputs: numbered_signature(&t.folded_domains()?),
            extra_vars: extra,
            admit: None,
            sides: &sides,
        },
        backend,
    )
}

/// Which instance of the twenty-factor identity on fifteen slots.
#[derive(Debug, Clone)]
pub enum R20Variant {
    /// A single involutive symmetric tetrahedron map everywhere.
    Homogeneous(LocalMap),
    /// `3dm`, `3dn` and `3dr-crystal` as in the registered `r20-super`.
    Super,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R20Form {
    /// All twenty factors, on arbitrary states.
    Expanded,
    /// Groups of four factors collapsed into tetrahedral blocks, evaluated
    /// on folded states `(x1, x2, x2, x3, x4, x4, ..., x9, x9)`. Each block
    /// rejects inputs and outputs outside `Y`, so a pass also shows that
    /// every block stays in `Y`.
    Blocks,
}

fn block_text(text: &str, super_variant: bool) -> String {
    let t = text.replace("T[3,5,", "S[3,5,").replace("T[1,6,", "S[1,6,");
    if super_variant {
        t.replace("R[", "M[")
    } else {
        t
    }
}

/// Both sides of the twenty-factor identity agree.
pub fn check_r20(
    variant: &R20Variant,
    form: R20Form,
    catalog: &Catalog,
    backend: &Backend,
) -> Result<VerificationReport, VerifyError> {
    let tag = match variant {
        R20Variant::Homogeneous(r) => r.id().to_string(),
        R20Variant::Super => "super".to_string(),
    };
    match form {
        R20Form::Expanded => {
            let mut eq = match variant {
                R20Variant::Homogeneous(r) => catalog.equation("r20")?.resolve(catalog)?.with_map("R", r.clone())?,
                R20Variant::Super => catalog.equation("r20-super")?.resolve(catalog)?,
            };
            eq.id = format!("r20[{tag}]");
            check_equation(&eq, backend)
        }
        R20Form::Blocks => {
            let (maps, sup) = match variant {
                R20Variant::Homogeneous(r) => {
                    let block = TetrahedralComposite::homogeneous(r)?.as_block(true);
                    (
                        MapBindings::from([
                            ("R".to_string(), r.clone()),
                            ("S".to_string(), block.clone()),
                            ("T".to_string(), block),
                        ]),
                        false,
                    )
                }
                R20Variant::Super => (
                    MapBindings::from([
                        ("M".to_string(), catalog.map("3dm")?),
                        ("S".to_string(), catalog.tetrahedral(SUPER_T)?.as_block(true)),
                        ("T".to_string(), catalog.tetrahedral("3dr-crystal")?.as_block(true)),
                    ]),
                    true,
                ),
            };
            let eq = ResolvedEquation::new(
                format!("r20-blocks[{tag}]"),
                &r20_labels(),
                CompositeExpr::parse(&block_text(R20_TETRA_LEFT, sup))?,
                CompositeExpr::parse(&block_text(R20_TETRA_RIGHT, sup))?,
                maps,
            )?;
            // slot k of the fifteen is fed by free coordinate FOLD[k]
            const FOLD: [usize; 15] = [0, 1, 1, 2, 3, 3, 4, 4, 5, 5, 6, 7, 7, 8, 8];
            let mut free = vec![None; 9];
            for (k, d) in eq.signature.domains().enumerate() {
                free[FOLD[k]].get_or_insert(d);
            }
            let free: Vec<SlotDomain> = free.into_iter().map(|d| d.expect("every coordinate used")).collect();
            let sides = |x: &State| {
                let y: State = FOLD.iter().map(|&i| x.get(i).clone()).collect();
                Ok((eq.lhs.eval(&y)?, eq.rhs.eval(&y)?))
            };
            run(
                &Check {
                    name: eq.id.clone(),
                    inputs: numbered_signature(&free),
                    extra_vars: symbolic_params(eq.maps.values()),
                    admit: None,
                    sides: &sides,
                },
                backend,
            )
        }
    }
}

/// Reads subtraction-free expressions in `(Z, min, +, -)` and compares them
/// with `rule` at every integer point of `[lo, hi]^n`.
pub fn check_tropical_reading(
    name: &str,
    exprs: &[&str],
    rule: IntegerRule,
    lo: i64,
    hi: i64,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let parsed = exprs
        .iter()
        .map(|e| {
            Expr::parse(e).map_err(|err| VerifyError::Parse {
                file: format!("expression `{e}`"),
                line: 1,
                msg: err.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = exprs.len();
    let width = (hi - lo + 1) as u64;
    let total = width.pow(n as u32);
    let mut cex = None;
    for idx in 0..total {
        let mut rest = idx;
        let mut point = vec![BigInt::from(0); n];
        for k in (0..n).rev() {
            point[k] = BigInt::from(lo + (rest % width) as i64);
            rest /= width;
        }
        let bindings: BTreeMap<String, BigInt> =
            point.iter().enumerate().map(|(k, v)| (format!("x{}", k + 1), v.clone())).collect();
        let lhs = parsed
            .iter()
            .map(|e| semifield_eval(e, &bindings, &MinPlus))
            .collect::<Result<Vec<_>, _>>()
            .map_err(KernelError::from)?;
        let rhs = rule(&point);
        if lhs != rhs {
            let s = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect();
            cex = Some(Counterexample {
                input: s(&point),
                lhs: s(&lhs),
                rhs: s(&rhs),
                line: None,
                note: None,
            });
            break;
        }
    }
    Ok(VerificationReport {
        equation: format!("tropical({name})"),
        backend: format!("exhaustive(range={lo}..={hi})"),
        seed: None,
        instances: Instances::Count(total),
        result: if cex.is_some() { Outcome::Fail } else { Outcome::Pass },
        counterexample: cex,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::perturbed_3dr;
    use crate::kernel::Param;

    #[test]
    fn te_for_3dr_is_proved() {
        let c = Catalog::new();
        let eq = c.equation("te").unwrap().resolve(&c).unwrap();
        let r = check_equation(&eq, &Backend::symbolic()).unwrap();
        assert!(r.passed(), "{}", r.to_human());
        assert_eq!(r.instances, Instances::proved());
    }

    #[test]
    fn perturbed_map_fails_with_witness() {
        let c = Catalog::new();
        let eq = c.equation("te").unwrap().resolve(&c).unwrap().with_map("R", perturbed_3dr(0, 2)).unwrap();
        let r = check_equation(&eq, &Backend::sample(20, 3)).unwrap();
        assert!(!r.passed());
        let cex = r.counterexample.unwrap();
        assert_eq!(cex.input.len(), 6);
        assert_ne!(cex.lhs, cex.rhs);
        let r = check_equation(&eq, &Backend::symbolic()).unwrap();
        assert!(!r.passed());
        assert!(r.counterexample.unwrap().note.unwrap().contains("numeric witness"));
    }

    #[test]
    fn symbolic_backend_rejects_discrete_slots() {
        let c = Catalog::new();
        let eq = c.equation("te-super-1").unwrap().resolve(&c).unwrap();
        assert!(matches!(
            check_equation(&eq, &Backend::symbolic()),
            Err(VerifyError::BackendIncompatible { .. })
        ));
    }

    #[test]
    fn symbolic_parameter_needs_symbolic_backend() {
        let c = Catalog::with_lambda(Param::Symbolic("lambda".into()));
        let m = c.map("3dr-electrical").unwrap();
        assert!(check_involutive(&m, &Backend::symbolic()).unwrap().passed());
        assert!(matches!(
            check_involutive(&m, &Backend::sample(3, 0)),
            Err(VerifyError::BackendIncompatible { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let c = Catalog::new();
        let eq = c.equation("te").unwrap().resolve(&c).unwrap();
        let tiny = Backend::Symbolic { term_budget: Some(3) };
        assert!(matches!(check_equation(&eq, &tiny), Err(VerifyError::BudgetExceeded { .. })));
    }

    #[test]
    fn small_super_checks() {
        let c = Catalog::new();
        let eq = c.equation("te-super-1").unwrap().resolve(&c).unwrap();
        let r = check_equation(&eq, &Backend::exhaustive(3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.instances, Instances::Count(16 * 16));
        let m = c.map("3dm").unwrap();
        let r = check_symmetric(&m, &Backend::exhaustive(3)).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn tropical_reading_of_3dr() {
        let r = check_tropical_reading("3dr", &crate::catalog::EXPR_3DR, crate::catalog::r3dr_crystal, -2, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.instances, Instances::Count(125));
    }
}
