//! Semifields and subtraction-free expressions.
//!
//! A subtraction-free rational expression can be read in any semifield. Over
//! the positive rationals it is ordinary arithmetic; over min-plus integers
//! (`a + b -> min(a, b)`, `a * b -> a + b`, `a / b -> a - b`) it is the
//! tropical limit. Positive integer constants become `1 + ... + 1`, which is
//! `0` in min-plus.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{RatFunc, SymContext};
use crate::scalar::ScalarError;

/// A semifield given as a value carrying whatever context its elements need.
pub trait Semifield {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn one(&self) -> Self::Elem;

    /// Whether `a` absorbs addition (the zero of a field). Dividing by it is
    /// undefined.
    fn is_absorber(&self, _a: &Self::Elem) -> bool {
        false
    }

    /// `1 + 1 + ... + 1` (`k` ones), `k >= 1`.
    fn nat(&self, k: u32) -> Self::Elem {
        assert!(k >= 1, "constants are positive integers");
        let one = self.one();
        let mut acc = one.clone();
        for _ in 1..k {
            acc = self.add(&acc, &one);
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        if k == 0 {
            return self.one();
        }
        let mut acc = a.clone();
        for _ in 1..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn sum(&self, xs: &[Self::Elem]) -> Self::Elem {
        let mut it = xs.iter();
        let first = it.next().expect("non-empty sum").clone();
        it.fold(first, |acc, x| self.add(&acc, x))
    }

    fn product(&self, xs: &[Self::Elem]) -> Self::Elem {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// `(Q, +, *, /)`. Catalog maps only ever feed it positive values.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Semifield for Rationals {
    type Elem = BigRational;

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_absorber(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// `(Z, min, +, -)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinPlus;

impl Semifield for MinPlus {
    type Elem = BigInt;

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.min(b).clone()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn one(&self) -> BigInt {
        BigInt::zero()
    }
    fn nat(&self, _k: u32) -> BigInt {
        BigInt::zero()
    }
    fn pow(&self, a: &BigInt, k: u32) -> BigInt {
        a * k
    }
}

/// Rational functions over one shared variable table.
#[derive(Debug, Clone)]
pub struct RationalFunctions {
    pub ctx: Arc<SymContext>,
}

impl RationalFunctions {
    pub fn new(ctx: Arc<SymContext>) -> Self {
        RationalFunctions { ctx }
    }

    pub fn constant(&self, q: &BigRational) -> RatFunc {
        RatFunc::constant(&self.ctx, q.clone())
    }
}

impl Semifield for RationalFunctions {
    type Elem = RatFunc;

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn div(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.div(b)
    }
    fn one(&self) -> RatFunc {
        RatFunc::constant(&self.ctx, BigRational::one())
    }
    fn is_absorber(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn nat(&self, k: u32) -> RatFunc {
        RatFunc::constant(&self.ctx, BigRational::from_integer(k.into()))
    }
}

/// A subtraction-free rational expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(u32),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expression syntax error at byte {pos}: {msg}")]
pub struct ExprSyntaxError {
    pub pos: usize,
    pub msg: String,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprSyntaxError> {
        let mut p = ExprParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Expr::Const(_) => {}
            Expr::Add(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Pow(a, _) => a.collect_vars(out),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> ExprSyntaxError {
        ExprSyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> Result<Expr, ExprSyntaxError> {
        let mut lhs = self.product()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ExprSyntaxError> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ExprSyntaxError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.number()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u32, ExprSyntaxError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ExprSyntaxError {
                pos: start,
                msg: "expected a nonnegative integer".into(),
            })
    }

    fn atom(&mut self) -> Result<Expr, ExprSyntaxError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let k = self.number()?;
                if k == 0 {
                    return Err(ExprSyntaxError {
                        pos: at,
                        msg: "constants must be positive".into(),
                    });
                }
                Ok(Expr::Const(k))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Var(name.to_string()))
            }
            Some(_) => Err(self.error("expected a number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Evaluates `expr` in `field` with the given variable bindings, exactly.
pub fn semifield_eval<F: Semifield>(
    expr: &Expr,
    bindings: &BTreeMap<String, F::Elem>,
    field: &F,
) -> Result<F::Elem, ScalarError> {
    Ok(match expr {
        Expr::Var(v) => bindings
            .get(v)
            .cloned()
            .ok_or_else(|| ScalarError::UnboundVariable(v.clone()))?,
        Expr::Const(k) => field.nat(*k),
        Expr::Add(a, b) => field.add(
            &semifield_eval(a, bindings, field)?,
            &semifield_eval(b, bindings, field)?,
        ),
        Expr::Mul(a, b) => field.mul(
            &semifield_eval(a, bindings, field)?,
            &semifield_eval(b, bindings, field)?,
        ),
        Expr::Div(a, b) => {
            let d = semifield_eval(b, bindings, field)?;
            if field.is_absorber(&d) {
                return Err(ScalarError::DivisionByAdditiveAbsorber);
            }
            field.div(&semifield_eval(a, bindings, field)?, &d)
        }
        Expr::Pow(a, k) => field.pow(&semifield_eval(a, bindings, field)?, *k),
    })
}
