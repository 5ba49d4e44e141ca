//! Multivariate polynomials and rational functions over exact rationals.
//!
//! Rational functions are not kept in lowest terms. Equality is decided by
//! cross-multiplication, so no multivariate GCD is ever needed. Arithmetic
//! performs a few cheap cancellations (common monomial factors, exact
//! division by a denominator) to keep expression swell in check.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::kernel::{Signature, State};
use crate::scalar::{format_rational, Scalar, SlotDomain};

/// Variable table shared by every polynomial of one symbolic computation,
/// plus an optional cap on the number of terms any intermediate may carry.
#[derive(Debug)]
pub struct SymContext {
    names: Vec<String>,
    term_budget: Option<usize>,
    exceeded: AtomicBool,
}

impl SymContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        Self::with_budget(names, None)
    }

    pub fn with_budget<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        term_budget: Option<usize>,
    ) -> Arc<Self> {
        Arc::new(SymContext {
            names: names.into_iter().map(Into::into).collect(),
            term_budget,
            exceeded: AtomicBool::new(false),
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// True once some intermediate result exceeded the term budget. Results
    /// computed after that point are meaningless.
    pub fn budget_exceeded(&self) -> bool {
        self.exceeded.load(AtomicOrdering::Relaxed)
    }

    fn charge(&self, terms: usize) {
        if let Some(b) = self.term_budget {
            if terms > b {
                self.exceeded.store(true, AtomicOrdering::Relaxed);
            }
        }
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    fn one(n: usize) -> Self {
        Monomial(vec![0; n].into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Box<[u16]>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
pub struct MultiPoly {
    ctx: Arc<SymContext>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl MultiPoly {
    pub fn zero(ctx: &Arc<SymContext>) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<SymContext>, c: BigRational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.nvars()), c);
        }
        p
    }

    pub fn one(ctx: &Arc<SymContext>) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    /// The variable at `index` of the context's table.
    pub fn var(ctx: &Arc<SymContext>, index: usize) -> Self {
        assert!(index < ctx.nvars(), "variable index out of range");
        let mut e = vec![0u16; ctx.nvars()];
        e[index] = 1;
        let mut p = Self::zero(ctx);
        p.terms.insert(Monomial(e.into_boxed_slice()), BigRational::one());
        p
    }

    pub fn context(&self) -> &Arc<SymContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.degree() == 0 && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn same_table(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.names == other.ctx.names,
            "polynomials over different variable tables"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_table(other);
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_table(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let bound = self.terms.len().saturating_mul(other.terms.len());
        if let Some(b) = self.ctx.term_budget {
            if self.ctx.budget_exceeded() || bound > b.saturating_mul(4) {
                self.ctx.exceeded.store(true, AtomicOrdering::Relaxed);
                return Self::one(&self.ctx);
            }
        }
        let mut acc: HashMap<Monomial, BigRational> = HashMap::with_capacity(bound.min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms: BTreeMap<_, _> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.ctx.charge(terms.len());
        MultiPoly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self / d` when `d` divides `self` exactly, otherwise `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.same_table(d);
        let (lm_d, lc_d) = d.leading_term()?;
        if self.is_zero() {
            return Some(Self::zero(&self.ctx));
        }
        if d.is_one() {
            return Some(self.clone());
        }
        if d.terms.len() > self.terms.len() || d.total_degree() > self.total_degree() {
            return None;
        }
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((m, c)) = rem
            .leading_term()
            .map(|(lm_r, lc_r)| (lm_r.div(&lm_d), lc_r / &lc_d))
        {
            let m = m?;
            for (md, cd) in &d.terms {
                rem.add_term(md.mul(&m), -(cd * &c));
            }
            quot.terms.insert(m, c);
        }
        Some(quot)
    }

    /// Largest monomial dividing every term.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.ctx.nvars());
        };
        let mut g = first.0.to_vec();
        for m in it {
            for (a, b) in g.iter_mut().zip(m.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        Monomial(g.into_boxed_slice())
    }

    fn div_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m).expect("monomial divides"), c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point (one value per variable).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.ctx.nvars(), "point has wrong arity");
        let mut powers: Vec<Vec<BigRational>> = point.iter().map(|x| vec![BigRational::one(), x.clone()]).collect();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = usize::from(e);
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                t *= &powers[i][e];
            }
            total += t;
        }
        total
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            f.write_str(&format_rational(&abs))?;
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.ctx.names[v])?,
                    _ => write!(f, "*{}^{}", self.ctx.names[v], e)?,
                }
            }
        }
        Ok(())
    }
}

/// A quotient of polynomials. Stored pairs are not reduced; the denominator
/// is nonzero with leading coefficient one.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            let one = MultiPoly::one(num.context());
            return RatFunc { num, den: one };
        }
        if num == den {
            let one = MultiPoly::one(num.context());
            return RatFunc { num: one.clone(), den: one };
        }
        let g = {
            let a = num.monomial_content();
            let b = den.monomial_content();
            Monomial(a.0.iter().zip(b.0.iter()).map(|(x, y)| *x.min(y)).collect())
        };
        let (num, den) = if g.degree() > 0 {
            (num.div_monomial(&g), den.div_monomial(&g))
        } else {
            (num, den)
        };
        let lc = den.leading_term().map(|(_, c)| c.clone()).unwrap();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let one = MultiPoly::one(p.context());
        RatFunc { num: p, den: one }
    }

    pub fn constant(ctx: &Arc<SymContext>, c: BigRational) -> Self {
        RatFunc::from_poly(MultiPoly::constant(ctx, c))
    }

    pub fn var(ctx: &Arc<SymContext>, index: usize) -> Self {
        RatFunc::from_poly(MultiPoly::var(ctx, index))
    }

    pub fn var_named(ctx: &Arc<SymContext>, name: &str) -> Option<Self> {
        ctx.index_of(name).map(|i| RatFunc::var(ctx, i))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn context(&self) -> &Arc<SymContext> {
        self.num.context()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    fn poisoned(&self) -> Option<RatFunc> {
        self.context()
            .budget_exceeded()
            .then(|| RatFunc::constant(self.context(), BigRational::one()))
    }

    pub fn add(&self, other: &Self) -> Self {
        if let Some(p) = self.poisoned() {
            return p;
        }
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        if let Some(q) = self.den.div_exact(&other.den) {
            return RatFunc::new(self.num.add(&other.num.mul(&q)), self.den.clone());
        }
        if let Some(q) = other.den.div_exact(&self.den) {
            return RatFunc::new(other.num.add(&self.num.mul(&q)), other.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let Some(p) = self.poisoned() {
            return p;
        }
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        RatFunc::new(n1.mul(&n2), d1.mul(&d2))
    }

    /// Panics when dividing by the zero function.
    pub fn div(&self, other: &Self) -> Self {
        if let Some(p) = self.poisoned() {
            return p;
        }
        assert!(!other.is_zero(), "division by the zero rational function");
        self.mul(&RatFunc {
            num: other.den.clone(),
            den: other.num.clone(),
        })
    }

    /// Exact evaluation; `None` if the denominator vanishes at `point`.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

/// Cancels `n / d` when one divides the other exactly.
fn cancel(n: &MultiPoly, d: &MultiPoly) -> (MultiPoly, MultiPoly) {
    if d.is_one() || n.is_zero() {
        return (n.clone(), d.clone());
    }
    let one = MultiPoly::one(n.context());
    if n == d {
        return (one.clone(), one);
    }
    if let Some(q) = n.div_exact(d) {
        return (q, one);
    }
    if let Some(q) = d.div_exact(n) {
        return (one, q);
    }
    (n.clone(), d.clone())
}

/// Decides `a == b` as rational functions: `a.num * b.den - b.num * a.den == 0`.
pub fn ratfunc_equal(a: &RatFunc, b: &RatFunc) -> bool {
    if a.num == b.num && a.den == b.den {
        return true;
    }
    a.num.mul(&b.den).sub(&b.num.mul(&a.den)).is_zero()
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        ratfunc_equal(self, other)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Variable name used for a slot named `name`; pair slots get a second `y` variable.
pub fn slot_variable(name: &str, second: bool) -> String {
    format!("{}{}", if second { "y" } else { "x" }, name)
}

/// Builds a generic point of `signature`: slot `i` becomes the variable
/// `x{names[i]}` (plus `y{names[i]}` for pair slots). Repeated names share a
/// variable, which is how points of the folded subset are produced.
/// `extra` variables (e.g. a symbolic parameter) are appended to the table.
pub fn symbolic_state(
    signature: &Signature,
    names: &[String],
    extra: &[String],
    term_budget: Option<usize>,
) -> Option<(Arc<SymContext>, State)> {
    if names.len() != signature.len() || !signature.domains().all(SlotDomain::is_birational) {
        return None;
    }
    let mut table: Vec<String> = Vec::new();
    let mut push = |v: String| {
        if !table.contains(&v) {
            table.push(v);
        }
    };
    for (name, dom) in names.iter().zip(signature.domains()) {
        push(slot_variable(name, false));
        if dom == SlotDomain::PosRationalPair {
            push(slot_variable(name, true));
        }
    }
    for e in extra {
        push(e.clone());
    }
    let ctx = SymContext::with_budget(table, term_budget);
    let values = names
        .iter()
        .zip(signature.domains())
        .map(|(name, dom)| {
            let x = RatFunc::var_named(&ctx, &slot_variable(name, false)).unwrap();
            if dom == SlotDomain::PosRationalPair {
                let y = RatFunc::var_named(&ctx, &slot_variable(name, true)).unwrap();
                Scalar::SymPair(x, y)
            } else {
                Scalar::Sym(x)
            }
        })
        .collect();
    Some((ctx, State::new(values)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx3() -> Arc<SymContext> {
        SymContext::new(["x1", "x2", "x3", "x4"])
    }

    fn v(c: &Arc<SymContext>, i: usize) -> MultiPoly {
        MultiPoly::var(c, i)
    }

    #[test]
    fn binomial_square() {
        let c = ctx3();
        let s = v(&c, 0).add(&v(&c, 2));
        let sq = s.mul(&s);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.to_string(), "1*x1^2 + 2*x1*x3 + 1*x3^2");
    }

    #[test]
    fn difference_with_self_is_zero() {
        let c = ctx3();
        let p = v(&c, 0).mul(&v(&c, 1)).add(&MultiPoly::constant(&c, BigRational::from_integer(3.into())));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).to_string(), "0");
    }

    #[test]
    fn boundary_polynomial_expands_to_four_terms() {
        // x1 (x2 + x4)^2 + x3 x4^2
        let c = ctx3();
        let s = v(&c, 1).add(&v(&c, 3));
        let y1 = v(&c, 0).mul(&s).mul(&s).add(&v(&c, 2).mul(&v(&c, 3)).mul(&v(&c, 3)));
        assert_eq!(y1.num_terms(), 4);
        assert_eq!(y1.total_degree(), 3);
        assert_eq!(y1.to_string(), "1*x1*x2^2 + 2*x1*x2*x4 + 1*x1*x4^2 + 1*x3*x4^2");
    }

    #[test]
    fn exact_division() {
        let c = ctx3();
        let a = v(&c, 0).add(&v(&c, 2));
        let b = v(&c, 1).sub(&v(&c, 3));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(p.div_exact(&v(&c, 0)).is_none());
        assert!(a.div_exact(&p).is_none());
    }

    #[test]
    fn trivial_rational_equalities() {
        let c = ctx3();
        let x1 = RatFunc::var(&c, 0);
        let x2 = RatFunc::var(&c, 1);
        let x3 = RatFunc::var(&c, 2);
        let one = RatFunc::constant(&c, BigRational::one());
        assert!(ratfunc_equal(&x1.div(&x1), &one));
        let a = x1.mul(&x2).div(&x1.add(&x3));
        let b = x2.mul(&x1).div(&x3.add(&x1));
        assert!(ratfunc_equal(&a, &b));
        assert!(!ratfunc_equal(&a, &x2));
    }

    #[test]
    fn cancellation_keeps_values() {
        let c = ctx3();
        let x1 = RatFunc::var(&c, 0);
        let x3 = RatFunc::var(&c, 2);
        let s = x1.add(&x3);
        let q = x1.mul(&s).div(&s);
        assert!(q.denom().is_one());
        assert!(ratfunc_equal(&q, &x1));
    }

    #[test]
    fn budget_poisons_further_arithmetic() {
        let c = SymContext::with_budget(["a", "b", "c"], Some(4));
        let s = RatFunc::var(&c, 0).add(&RatFunc::var(&c, 1)).add(&RatFunc::var(&c, 2));
        let sq = s.mul(&s);
        assert!(c.budget_exceeded());
        let _ = sq.mul(&s);
    }
}
