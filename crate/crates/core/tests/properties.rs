use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tetrabound::catalog::{formulas, j3dj_crystal, r3dr_crystal, Catalog, EXPR_3DJ, EXPR_3DR};
use tetrabound::kernel::{MapBindings, State};
use tetrabound::semifield::{semifield_eval, Expr, MinPlus, Rationals, RationalFunctions, Semifield};
use tetrabound::verify::{check_equation, enumerate_box, sample_states, Backend};
use tetrabound::{CompositeExpr, RatFunc, Scalar, Signature, SlotDomain, SymContext};

fn pos() -> impl Strategy<Value = BigRational> {
    (1i64..=1000, 1i64..=1000).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn rats(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec(pos(), n)
}

fn scalars(v: &[BigRational]) -> Vec<Scalar> {
    v.iter().map(|q| Scalar::Rat(tetrabound::PosRational::new(q.clone()).unwrap())).collect()
}

fn bind<E: Clone>(names: &[&str], vals: &[E]) -> BTreeMap<String, E> {
    names.iter().map(|s| s.to_string()).zip(vals.iter().cloned()).collect()
}

fn eval_texts<F: Semifield>(f: &F, texts: &[&str], names: &[&str], x: &[F::Elem]) -> Vec<F::Elem> {
    let b = bind(names, x);
    texts
        .iter()
        .map(|t| semifield_eval(&Expr::parse(t).unwrap(), &b, f).unwrap())
        .collect()
}

const X3: [&str; 3] = ["x1", "x2", "x3"];
const X4: [&str; 4] = ["x1", "x2", "x3", "x4"];

proptest! {
    #[test]
    fn min_plus_axioms(a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let f = MinPlus;
        let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&f.div(&a, &b), &b), a);
    }

    #[test]
    fn rational_axioms_and_positivity(v in rats(3)) {
        let f = Rationals;
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
        prop_assert_eq!(f.mul(&f.div(a, b), b), a.clone());
        for y in formulas::r3dr(&f, &v) {
            prop_assert!(y > BigRational::from_integer(0.into()));
        }
    }

    #[test]
    fn expression_texts_agree_with_formulas(v in rats(4)) {
        prop_assert_eq!(eval_texts(&Rationals, &EXPR_3DR, &X3, &v[..3]), formulas::r3dr(&Rationals, &v[..3]));
        prop_assert_eq!(eval_texts(&Rationals, &EXPR_3DJ, &X4, &v), formulas::j3dj(&Rationals, &v));
    }

    #[test]
    fn tropical_bridge_3dr(x in proptest::collection::vec(-5i64..=5, 3)) {
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        prop_assert_eq!(eval_texts(&MinPlus, &EXPR_3DR, &X3, &x), r3dr_crystal(&x));
    }

    #[test]
    fn tropical_bridge_3dj(x in proptest::collection::vec(0i64..=6, 4)) {
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        prop_assert_eq!(eval_texts(&MinPlus, &EXPR_3DJ, &X4, &x), j3dj_crystal(&x));
    }

    #[test]
    fn ratfunc_eval_is_a_homomorphism(v in rats(3), k in 1u32..4) {
        let ctx = SymContext::new(X3);
        let f = RationalFunctions::new(ctx.clone());
        let xs: Vec<RatFunc> = (0..3).map(|i| RatFunc::var(&ctx, i)).collect();
        let p = f.add(&f.pow(&xs[0], k), &f.mul(&xs[1], &xs[2]));
        let q = f.div(&p, &f.add(&xs[2], &f.nat(k)));
        let at = |r: &RatFunc| r.eval(&v).unwrap();
        let qf = Rationals;
        let pv = qf.add(&qf.pow(&v[0], k), &qf.mul(&v[1], &v[2]));
        prop_assert_eq!(at(&p), pv.clone());
        prop_assert_eq!(at(&q), qf.div(&pv, &qf.add(&v[2], &qf.nat(k))));
        // equality is decided up to representation
        let q2 = f.div(&f.mul(&p, &xs[0]), &f.mul(&f.add(&xs[2], &f.nat(k)), &xs[0]));
        prop_assert!(q == q2);
        prop_assert!(q.sub(&q2).is_zero());
    }

    #[test]
    fn symbolic_then_numeric_commutes(v in rats(4)) {
        let ctx = SymContext::new(X4);
        let f = RationalFunctions::new(ctx.clone());
        let xs: Vec<RatFunc> = (0..4).map(|i| RatFunc::var(&ctx, i)).collect();
        let sym = formulas::j3dj(&f, &xs);
        let num = formulas::j3dj(&Rationals, &v);
        let evaluated: Vec<BigRational> = sym.iter().map(|r| r.eval(&v).unwrap()).collect();
        prop_assert_eq!(evaluated, num);
    }

    #[test]
    fn reversed_labels_conjugate(v in rats(3)) {
        let c = Catalog::new();
        let sig = Signature::homogeneous(["1", "2", "3"], SlotDomain::PosRational).unwrap();
        let maps: MapBindings = [("R".to_string(), c.map("3dr").unwrap())].into();
        let rev = CompositeExpr::parse("R[3,2,1]").unwrap().bind(&sig, &maps).unwrap();
        let fwd = CompositeExpr::parse("R[1,2,3]").unwrap().bind(&sig, &maps).unwrap();
        let x = State::new(scalars(&v));
        let reversed = |s: &State| -> State { s.values().iter().rev().cloned().collect() };
        prop_assert_eq!(rev.eval(&x).unwrap(), reversed(&fwd.eval(&reversed(&x)).unwrap()));
    }

    #[test]
    fn rational_maps_are_involutions(v in rats(8)) {
        let c = Catalog::new();
        for (id, n) in [("3dr", 3), ("3dj", 4), ("3dr-vec", 3), ("3dj-vec", 4)] {
            let m = c.map(id).unwrap();
            let x: Vec<Scalar> = if m.domains()[0] == SlotDomain::PosRationalPair {
                v.chunks(2).take(n).map(|p| Scalar::Pair(
                    tetrabound::PosRational::new(p[0].clone()).unwrap(),
                    tetrabound::PosRational::new(p[1].clone()).unwrap(),
                )).collect()
            } else {
                scalars(&v[..n])
            };
            prop_assert_eq!(m.apply(&m.apply(&x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn crystal_maps_are_involutions(x in proptest::collection::vec(0i64..=20, 4)) {
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        prop_assert_eq!(r3dr_crystal(&r3dr_crystal(&x[..3])), x[..3].to_vec());
        prop_assert_eq!(j3dj_crystal(&j3dj_crystal(&x)), x);
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>()) {
        let d = [SlotDomain::PosRational, SlotDomain::NonNegInt, SlotDomain::Bit, SlotDomain::PosRationalPair];
        prop_assert_eq!(sample_states(&d, 5, seed, 4), sample_states(&d, 5, seed, 4));
    }

    #[test]
    fn box_is_complete_and_sorted(bound in 0u64..4, bits in 0usize..3, ints in 1usize..3) {
        let mut d = vec![SlotDomain::NonNegInt; ints];
        d.extend(vec![SlotDomain::Bit; bits]);
        let states = enumerate_box(&d, bound, 1 << 20).unwrap();
        let expected = (bound + 1).pow(ints as u32) * 2u64.pow(bits as u32);
        prop_assert_eq!(states.len() as u64, expected);
        let keys: Vec<Vec<BigInt>> = states.iter().map(|s| s.iter().map(|v| v.as_int().unwrap()).collect()).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn reports_are_seed_deterministic() {
    let c = Catalog::new();
    let eq = c.equation("tre").unwrap().resolve(&c).unwrap();
    let a = check_equation(&eq, &Backend::sample(30, 9)).unwrap().without_timing();
    let b = check_equation(&eq, &Backend::sample(30, 9)).unwrap().without_timing();
    assert_eq!(a.to_json(), b.to_json());
}
