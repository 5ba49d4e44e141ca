//! Birational maps, written once over an arbitrary semifield and
//! instantiated over exact rationals and over rational functions.
//!
//! Inputs are flattened coordinates; a parameter comes first and pairs are
//! laid out as `(x, y)`.

use crate::semifield::Semifield;

/// `(x1 x2 / (x1 + x3), x1 + x3, x2 x3 / (x1 + x3))`.
pub fn r3dr<F: Semifield>(f: &F, x: &[F::Elem]) -> Vec<F::Elem> {
    let [x1, x2, x3] = [&x[0], &x[1], &x[2]];
    let s = f.add(x1, x3);
    vec![f.div(&f.mul(x1, x2), &s), s.clone(), f.div(&f.mul(x2, x3), &s)]
}

/// Electrical map: as [`r3dr`] with `x1 + x3` replaced by
/// `x1 + x3 + lambda x1 x2 x3`. Input `(lambda, x1, x2, x3)`.
pub fn r3dr_electrical<F: Semifield>(f: &F, x: &[F::Elem]) -> Vec<F::Elem> {
    let [lam, x1, x2, x3] = [&x[0], &x[1], &x[2], &x[3]];
    let d = f.add(&f.add(x1, x3), &f.product(&[lam.clone(), x1.clone(), x2.clone(), x3.clone()]));
    vec![f.div(&f.mul(x1, x2), &d), d.clone(), f.div(&f.mul(x2, x3), &d)]
}

/// Two-component map. Input `(x1, y1, x2, y2, x3, y3)`.
pub fn r3dr_vec<F: Semifield>(f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
    let [x1, y1, x2, y2, x3, y3] = [&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]];
    let s = f.add(x1, x3);
    let t = f.add(&f.mul(x1, y1), &f.mul(x3, y3));
    vec![
        f.div(&f.mul(x1, x2), &s),
        f.div(&f.product(&[s.clone(), y1.clone(), y2.clone()]), &t),
        s.clone(),
        f.div(&t, &s),
        f.div(&f.mul(x2, x3), &s),
        f.div(&f.product(&[s.clone(), y2.clone(), y3.clone()]), &t),
    ]
}

fn boundary_tail<F: Semifield>(f: &F, x: &[F::Elem], y1: &F::Elem, y2: &F::Elem) -> Vec<F::Elem> {
    let [x1, x2, x3, x4] = [&x[0], &x[1], &x[2], &x[3]];
    vec![
        f.div(&f.product(&[x1.clone(), f.pow(x2, 2), x3.clone()]), y1),
        f.div(y1, y2),
        f.div(&f.pow(y2, 2), y1),
        f.div(&f.product(&[x2.clone(), x3.clone(), x4.clone()]), y2),
    ]
}

/// Boundary map with `y1 = x1 (x2 + x4)^2 + x3 x4^2`, `y2 = x1 (x2 + x4) + x3 x4`.
pub fn j3dj<F: Semifield>(f: &F, x: &[F::Elem]) -> Vec<F::Elem> {
    let [x1, x2, x3, x4] = [&x[0], &x[1], &x[2], &x[3]];
    let s = f.add(x2, x4);
    let y1 = f.add(&f.mul(x1, &f.pow(&s, 2)), &f.mul(x3, &f.pow(x4, 2)));
    let y2 = f.add(&f.mul(x1, &s), &f.mul(x3, x4));
    boundary_tail(f, x, &y1, &y2)
}

/// Electrical boundary map. Input `(lambda, x1, x2, x3, x4)`.
pub fn j3dj_electrical<F: Semifield>(f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
    let lam = &v[0];
    let x = &v[1..];
    let [x1, x2, x3, x4] = [&x[0], &x[1], &x[2], &x[3]];
    let s = f.add(x2, x4);
    let two_lam = f.mul(&f.nat(2), lam);
    let u = f.add(&s, &f.product(&[two_lam, x2.clone(), x3.clone(), x4.clone()]));
    let y1 = f.add(&f.product(&[x1.clone(), s.clone(), u.clone()]), &f.mul(x3, &f.pow(x4, 2)));
    let y2 = f.add(&f.mul(x1, &u), &f.mul(x3, x4));
    boundary_tail(f, x, &y1, &y2)
}

/// Two-component boundary map. Input `(x1, y1, ..., x4, y4)`.
pub fn j3dj_vec<F: Semifield>(f: &F, v: &[F::Elem]) -> Vec<F::Elem> {
    let x: Vec<&F::Elem> = v.iter().step_by(2).collect();
    let y: Vec<&F::Elem> = v.iter().skip(1).step_by(2).collect();
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    let (y1, y2, y3, y4) = (y[0], y[1], y[2], y[3]);
    let s = f.add(x2, x4);
    let z1 = f.add(&f.mul(x1, &f.pow(&s, 2)), &f.mul(x3, &f.pow(x4, 2)));
    let z2 = f.add(&f.mul(x1, &s), &f.mul(x3, x4));
    let sy = f.add(&f.mul(x2, y2), &f.mul(x4, y4));
    let w1 = f.add(
        &f.product(&[x1.clone(), y1.clone(), f.pow(&sy, 2)]),
        &f.product(&[x3.clone(), f.pow(x4, 2), y3.clone(), f.pow(y4, 2)]),
    );
    let w2 = f.add(
        &f.product(&[x1.clone(), y1.clone(), sy.clone()]),
        &f.product(&[x3.clone(), x4.clone(), y3.clone(), y4.clone()]),
    );
    vec![
        f.div(&f.product(&[x1.clone(), f.pow(x2, 2), x3.clone()]), &z1),
        f.div(&f.product(&[y1.clone(), f.pow(y2, 2), y3.clone(), z1.clone()]), &w1),
        f.div(&z1, &z2),
        f.div(&f.mul(&z2, &w1), &f.mul(&z1, &w2)),
        f.div(&f.pow(&z2, 2), &z1),
        f.div(&f.mul(&z1, &f.pow(&w2, 2)), &f.mul(&f.pow(&z2, 2), &w1)),
        f.div(&f.product(&[x2.clone(), x3.clone(), x4.clone()]), &z2),
        f.div(&f.product(&[y2.clone(), y3.clone(), y4.clone(), z2.clone()]), &w2),
    ]
}

/// [`r3dr`] with every coefficient made explicit:
/// `(c0 x1 x2 / (c1 x1 + c2 x3), c3 x1 + c4 x3, c5 x2 x3 / (c6 x1 + c7 x3))`.
/// All ones gives back [`r3dr`]; used for negative controls.
pub fn r3dr_with_coefficients<F: Semifield>(f: &F, c: &[u32; 8], x: &[F::Elem]) -> Vec<F::Elem> {
    let [x1, x2, x3] = [&x[0], &x[1], &x[2]];
    let k = |i: usize| f.nat(c[i]);
    let lin = |a: usize, b: usize| f.add(&f.mul(&k(a), x1), &f.mul(&k(b), x3));
    vec![
        f.div(&f.product(&[k(0), x1.clone(), x2.clone()]), &lin(1, 2)),
        lin(3, 4),
        f.div(&f.product(&[k(5), x2.clone(), x3.clone()]), &lin(6, 7)),
    ]
}

/// Subtraction-free text of the three components of [`r3dr`], for
/// re-reading in other semifields.
pub const EXPR_3DR: [&str; 3] = ["x1*x2/(x1+x3)", "x1+x3", "x2*x3/(x1+x3)"];

/// Subtraction-free text of the four components of [`j3dj`].
pub const EXPR_3DJ: [&str; 4] = [
    "x1*x2^2*x3/(x1*(x2+x4)^2 + x3*x4^2)",
    "(x1*(x2+x4)^2 + x3*x4^2)/(x1*(x2+x4) + x3*x4)",
    "(x1*(x2+x4) + x3*x4)^2/(x1*(x2+x4)^2 + x3*x4^2)",
    "x2*x3*x4/(x1*(x2+x4) + x3*x4)",
];
