use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::poly::RatFunc;
use crate::scalar::{PosRational, Scalar, SlotDomain};
use crate::semifield::{RationalFunctions, Rationals};

use super::{KernelError, Signature, State};

/// The optional parameter of a one-parameter family (e.g. the electrical map).
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Value(BigRational),
    /// A free symbol, resolved against the variable table of symbolic input.
    Symbolic(String),
}

/// A map on flattened birational coordinates, evaluable both over exact
/// rationals and over rational functions. Pair slots are flattened as
/// `(x, y)`; a parameter, when present, comes first.
pub trait BirationalRule: Send + Sync {
    fn eval_rat(&self, field: &Rationals, x: &[BigRational]) -> Vec<BigRational>;
    fn eval_sym(&self, field: &RationalFunctions, x: &[RatFunc]) -> Vec<RatFunc>;
}

/// Two monomorphizations of one generic formula.
#[derive(Clone, Copy)]
pub struct FormulaPair {
    pub rat: fn(&Rationals, &[BigRational]) -> Vec<BigRational>,
    pub sym: fn(&RationalFunctions, &[RatFunc]) -> Vec<RatFunc>,
}

impl BirationalRule for FormulaPair {
    fn eval_rat(&self, field: &Rationals, x: &[BigRational]) -> Vec<BigRational> {
        (self.rat)(field, x)
    }
    fn eval_sym(&self, field: &RationalFunctions, x: &[RatFunc]) -> Vec<RatFunc> {
        (self.sym)(field, x)
    }
}

/// A piecewise-linear map on integer slots (bits are read as 0/1).
pub type IntegerRule = fn(&[BigInt]) -> Vec<BigInt>;

pub type ScalarRule = Arc<dyn Fn(&[Scalar]) -> Result<Vec<Scalar>, KernelError> + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Birational(Arc<dyn BirationalRule>),
    Integer(IntegerRule),
    Scalar(ScalarRule),
}

/// A map `X_1 x ... x X_n -> X_1 x ... x X_n` on a fixed tuple of slot
/// domains, applied to chosen slots of a larger product space.
#[derive(Clone)]
pub struct LocalMap {
    id: String,
    domains: Vec<SlotDomain>,
    rule: Rule,
    param: Option<Param>,
}

impl fmt::Debug for LocalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalMap")
            .field("id", &self.id)
            .field("domains", &self.domains)
            .field("param", &self.param)
            .finish()
    }
}

impl LocalMap {
    pub fn birational(
        id: impl Into<String>,
        domains: Vec<SlotDomain>,
        rule: Arc<dyn BirationalRule>,
        param: Option<Param>,
    ) -> Self {
        assert!(domains.iter().all(|d| d.is_birational()));
        LocalMap {
            id: id.into(),
            domains,
            rule: Rule::Birational(rule),
            param,
        }
    }

    pub fn integer(id: impl Into<String>, domains: Vec<SlotDomain>, rule: IntegerRule) -> Self {
        assert!(domains.iter().all(|d| d.is_discrete()));
        LocalMap {
            id: id.into(),
            domains,
            rule: Rule::Integer(rule),
            param: None,
        }
    }

    pub fn from_fn(id: impl Into<String>, domains: Vec<SlotDomain>, rule: ScalarRule) -> Self {
        LocalMap {
            id: id.into(),
            domains,
            rule: Rule::Scalar(rule),
            param: None,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[SlotDomain] {
        &self.domains
    }

    pub fn param(&self) -> Option<&Param> {
        self.param.as_ref()
    }

    /// Same rule, different parameter. Ignored by maps without one.
    pub fn with_param(&self, param: Param) -> Self {
        let mut m = self.clone();
        if m.param.is_some() {
            m.param = Some(param);
        }
        m
    }

    pub fn with_id(&self, id: impl Into<String>) -> Self {
        let mut m = self.clone();
        m.id = id.into();
        m
    }

    /// Applies the map to its own arguments, in order.
    pub fn apply(&self, args: &[Scalar]) -> Result<Vec<Scalar>, KernelError> {
        if args.len() != self.arity() {
            return Err(KernelError::ArityMismatch {
                map: self.id.clone(),
                expected: self.arity(),
                found: args.len(),
            });
        }
        for (i, (a, d)) in args.iter().zip(&self.domains).enumerate() {
            if !a.fits(*d) {
                return Err(KernelError::DomainMismatch {
                    map: self.id.clone(),
                    position: i + 1,
                    expected: *d,
                    found: a.to_string(),
                });
            }
        }
        let out = match &self.rule {
            Rule::Birational(rule) => self.apply_birational(rule.as_ref(), args)?,
            Rule::Integer(rule) => {
                let ints: Vec<BigInt> = args.iter().map(|a| a.as_int().expect("discrete slot")).collect();
                let res = rule(&ints);
                res.into_iter()
                    .zip(&self.domains)
                    .enumerate()
                    .map(|(i, (v, d))| {
                        Scalar::from_int(*d, v.clone()).map_err(|_| KernelError::DomainClosure {
                            map: self.id.clone(),
                            position: i + 1,
                            domain: *d,
                            value: v.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            Rule::Scalar(rule) => rule(args)?,
        };
        debug_assert_eq!(out.len(), self.arity());
        for (i, (v, d)) in out.iter().zip(&self.domains).enumerate() {
            if !v.fits(*d) {
                return Err(KernelError::DomainClosure {
                    map: self.id.clone(),
                    position: i + 1,
                    domain: *d,
                    value: v.to_string(),
                });
            }
        }
        Ok(out)
    }

    fn apply_birational(&self, rule: &dyn BirationalRule, args: &[Scalar]) -> Result<Vec<Scalar>, KernelError> {
        let ctx = args.iter().find_map(|a| match a {
            Scalar::Sym(r) | Scalar::SymPair(r, _) => Some(r.context().clone()),
            _ => None,
        });
        match ctx {
            None => {
                let mut flat = Vec::with_capacity(2 * args.len() + 1);
                match &self.param {
                    Some(Param::Value(q)) => flat.push(q.clone()),
                    Some(Param::Symbolic(_)) => return Err(KernelError::SymbolicParameter(self.id.clone())),
                    None => {}
                }
                for a in args {
                    match a {
                        Scalar::Rat(q) => flat.push(q.value().clone()),
                        Scalar::Pair(x, y) => {
                            flat.push(x.value().clone());
                            flat.push(y.value().clone());
                        }
                        _ => unreachable!("domain checked"),
                    }
                }
                let out = rule.eval_rat(&Rationals, &flat);
                let mut it = out.into_iter();
                let mut next = |i: usize| -> Result<PosRational, KernelError> {
                    let v = it.next().expect("formula output length");
                    if v.is_positive() {
                        Ok(PosRational::new(v).unwrap())
                    } else {
                        Err(KernelError::DomainClosure {
                            map: self.id.clone(),
                            position: i + 1,
                            domain: self.domains[i],
                            value: v.to_string(),
                        })
                    }
                };
                self.domains
                    .iter()
                    .enumerate()
                    .map(|(i, d)| match d {
                        SlotDomain::PosRational => Ok(Scalar::Rat(next(i)?)),
                        _ => Ok(Scalar::Pair(next(i)?, next(i)?)),
                    })
                    .collect()
            }
            Some(ctx) => {
                let field = RationalFunctions::new(ctx.clone());
                let lift = |q: &PosRational| field.constant(q.value());
                let mut flat = Vec::with_capacity(2 * args.len() + 1);
                match &self.param {
                    Some(Param::Value(q)) => flat.push(field.constant(q)),
                    Some(Param::Symbolic(name)) => flat.push(
                        RatFunc::var_named(&ctx, name)
                            .ok_or_else(|| KernelError::UnknownLabel(name.clone()))?,
                    ),
                    None => {}
                }
                for a in args {
                    match a {
                        Scalar::Rat(q) => flat.push(lift(q)),
                        Scalar::Sym(r) => flat.push(r.clone()),
                        Scalar::Pair(x, y) => {
                            flat.push(lift(x));
                            flat.push(lift(y));
                        }
                        Scalar::SymPair(x, y) => {
                            flat.push(x.clone());
                            flat.push(y.clone());
                        }
                        _ => unreachable!("domain checked"),
                    }
                }
                let mut it = rule.eval_sym(&field, &flat).into_iter();
                Ok(self
                    .domains
                    .iter()
                    .map(|d| match d {
                        SlotDomain::PosRational => Scalar::Sym(it.next().unwrap()),
                        _ => {
                            let x = it.next().unwrap();
                            Scalar::SymPair(x, it.next().unwrap())
                        }
                    })
                    .collect())
            }
        }
    }

    /// Applies the map at `positions` of `state`: argument `a` is read from
    /// slot `positions[a]` and output `a` written back there. For positions
    /// not in ascending order this equals conjugating the ascending
    /// application by the sorting permutation.
    pub fn apply_at(&self, positions: &[usize], state: &State) -> Result<State, KernelError> {
        if positions.len() != self.arity() {
            return Err(KernelError::ArityMismatch {
                map: self.id.clone(),
                expected: self.arity(),
                found: positions.len(),
            });
        }
        let args: Vec<Scalar> = positions.iter().map(|&p| state.get(p).clone()).collect();
        let out = self.apply(&args)?;
        let mut next = state.clone();
        for (&p, v) in positions.iter().zip(out) {
            next.set(p, v);
        }
        Ok(next)
    }
}

/// `map` applied at the slots named by `labels` (Notation: `R_{ijk}`).
pub fn apply_indexed(
    map: &LocalMap,
    labels: &[&str],
    signature: &Signature,
    state: &State,
) -> Result<State, KernelError> {
    if labels.len() != map.arity() {
        return Err(KernelError::ArityMismatch {
            map: map.id().to_string(),
            expected: map.arity(),
            found: labels.len(),
        });
    }
    let positions = labels
        .iter()
        .map(|l| signature.position(l))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, p) in positions.iter().enumerate() {
        if positions[..i].contains(p) {
            return Err(KernelError::DuplicateLabel(labels[i].to_string()));
        }
    }
    state.check(signature)?;
    map.apply_at(&positions, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::kernel::numbered_labels;

    fn sig(n: usize, d: SlotDomain) -> Signature {
        Signature::homogeneous(numbered_labels(n), d).unwrap()
    }

    #[test]
    fn first_step_of_the_all_ones_chain() {
        let r = Catalog::new().map("3dr").unwrap();
        let s = sig(6, SlotDomain::PosRational);
        let x = s.parse_state("1,1,1,1,1,1").unwrap();
        let y = apply_indexed(&r, &["3", "4", "6"], &s, &x).unwrap();
        assert_eq!(y.to_string(), "1, 1, 1/2, 2, 1, 1/2");
    }

    #[test]
    fn reversed_labels_conjugate() {
        let r = Catalog::new().map("3dr").unwrap();
        let s = sig(4, SlotDomain::PosRational);
        let x = s.parse_state("2,5,7,11").unwrap();
        let y = apply_indexed(&r, &["3", "2", "1"], &s, &x).unwrap();
        // slots receive (h, g, f) of (z, y, x)
        let out = r.apply(&[x.get(2).clone(), x.get(1).clone(), x.get(0).clone()]).unwrap();
        assert_eq!(y.values()[..3], [out[2].clone(), out[1].clone(), out[0].clone()]);
        assert_eq!(y.get(3), x.get(3));
    }

    #[test]
    fn super_step_from_the_first_case() {
        let n = Catalog::new().map("3dn").unwrap();
        let s = Signature::new([
            ("1", SlotDomain::NonNegInt),
            ("2", SlotDomain::Bit),
            ("3", SlotDomain::Bit),
            ("4", SlotDomain::NonNegInt),
            ("5", SlotDomain::Bit),
            ("6", SlotDomain::Bit),
        ])
        .unwrap();
        let x = s.parse_state("5,0,0,3,0,0").unwrap();
        let y = apply_indexed(&n, &["3", "4", "6"], &s, &x).unwrap();
        assert_eq!(y.to_string(), "5, 0, 1, 2, 0, 1");
    }

    #[test]
    fn arity_domain_and_label_errors() {
        let r = Catalog::new().map("3dr").unwrap();
        let s = sig(4, SlotDomain::PosRational);
        let x = s.parse_state("1,1,1,1").unwrap();
        assert!(matches!(apply_indexed(&r, &["1", "2"], &s, &x), Err(KernelError::ArityMismatch { .. })));
        assert!(matches!(apply_indexed(&r, &["1", "2", "9"], &s, &x), Err(KernelError::UnknownLabel(_))));
        assert!(matches!(apply_indexed(&r, &["1", "2", "2"], &s, &x), Err(KernelError::DuplicateLabel(_))));
        let si = sig(3, SlotDomain::NonNegInt);
        let xi = si.parse_state("1,2,3").unwrap();
        assert!(matches!(apply_indexed(&r, &["1", "2", "3"], &si, &xi), Err(KernelError::DomainMismatch { .. })));
    }

    #[test]
    fn untouched_slots_are_unchanged() {
        let r = Catalog::new().map("3dr").unwrap();
        let s = sig(6, SlotDomain::PosRational);
        let x = s.parse_state("1,2,3,4,5,6").unwrap();
        let y = apply_indexed(&r, &["2", "4", "5"], &s, &x).unwrap();
        for k in [0, 2, 5] {
            assert_eq!(y.get(k), x.get(k));
        }
    }
}
