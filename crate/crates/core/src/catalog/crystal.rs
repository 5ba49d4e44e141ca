//! Piecewise-linear maps on nonnegative integers and bits.
//!
//! The functions accept any integers so they can be compared with tropical
//! readings of the birational formulas off the nonnegative orthant; slot
//! domains are enforced by the [`LocalMap`](crate::kernel::LocalMap) wrapper.

use num_bigint::BigInt;
use num_traits::Zero;

fn min(a: &BigInt, b: &BigInt) -> BigInt {
    a.min(b).clone()
}

fn max(a: &BigInt, b: &BigInt) -> BigInt {
    a.max(b).clone()
}

/// `(x1 + x2 - m, m, x2 + x3 - m)` with `m = min(x1, x3)`.
pub fn r3dr_crystal(x: &[BigInt]) -> Vec<BigInt> {
    let [x1, x2, x3] = [&x[0], &x[1], &x[2]];
    let m = min(x1, x3);
    vec![x1 + x2 - &m, m.clone(), x2 + x3 - &m]
}

fn boundary_tail(x: &[BigInt], y1: &BigInt, y2: &BigInt) -> Vec<BigInt> {
    let [x1, x2, x3, x4] = [&x[0], &x[1], &x[2], &x[3]];
    vec![
        x1 + 2 * x2 + x3 - y1,
        y1 - y2,
        2 * y2 - y1,
        x2 + x3 + x4 - y2,
    ]
}

/// Tropical boundary map:
/// `y1 = min(x1 + 2 min(x2, x4), x3 + 2 x4)`, `y2 = min(x1 + min(x2, x4), x3 + x4)`.
pub fn j3dj_crystal(x: &[BigInt]) -> Vec<BigInt> {
    let [x1, x2, x3, x4] = [&x[0], &x[1], &x[2], &x[3]];
    let m = min(x2, x4);
    let y1 = min(&(x1 + 2 * &m), &(x3 + 2 * x4));
    let y2 = min(&(x1 + &m), &(x3 + x4));
    boundary_tail(x, &y1, &y2)
}

/// On `Z>=0 x {0,1} x {0,1}`: `(x1 + x2 - v, v, x2 + x3 - v)`, `v = min(x1 + x2, x3)`.
pub fn m3dm(x: &[BigInt]) -> Vec<BigInt> {
    let [x1, x2, x3] = [&x[0], &x[1], &x[2]];
    let v = min(&(x1 + x2), x3);
    vec![x1 + x2 - &v, v.clone(), x2 + x3 - &v]
}

/// On `{0,1} x Z>=0 x {0,1}`: `(x1 + w, x2 - w, x3 + w)`, `w = min(x2, 1 - x1 - x3)`.
pub fn n3dn(x: &[BigInt]) -> Vec<BigInt> {
    let [x1, x2, x3] = [&x[0], &x[1], &x[2]];
    let w = min(x2, &(BigInt::from(1) - x1 - x3));
    vec![x1 + &w, x2 - &w, x3 + &w]
}

/// On `Z>=0 x {0,1} x Z>=0 x {0,1}`:
/// `y1 = max(x3 + min(x1 + 2 x2 + x4 - 1, 2 x4), 0)`,
/// `y2 = max(x3 + min(x1 + x2 + x4 - 1, x4), 0)`.
/// Intermediates may be negative; the outer `max` restores the sign.
pub fn x3dx(x: &[BigInt]) -> Vec<BigInt> {
    let [x1, x2, x3, x4] = [&x[0], &x[1], &x[2], &x[3]];
    let zero = BigInt::zero();
    let y1 = max(&(x3 + min(&(x1 + 2 * x2 + x4 - 1), &(2 * x4))), &zero);
    let y2 = max(&(x3 + min(&(x1 + x2 + x4 - 1), x4)), &zero);
    boundary_tail(x, &y1, &y2)
}
