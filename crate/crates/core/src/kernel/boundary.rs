use std::sync::Arc;

use crate::scalar::{Scalar, SlotDomain};

use super::composite::infer_signature;
use super::{BoundComposite, CompositeExpr, KernelError, LocalMap, MapBindings, Signature, State};

/// `R_245 R_135 R_126 R_346`.
pub const TETRA_LEFT: &str = "R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]";
/// `R_346 R_126 R_135 R_245`, equal to [`TETRA_LEFT`] for a tetrahedron map.
pub const TETRA_RIGHT: &str = "R[3,4,6] R[1,2,6] R[1,3,5] R[2,4,5]";

/// `(x1, x2, x3, x4) -> (x1, x2, x2, x3, x4, x4)`.
pub fn phi(x: &State) -> Result<State, KernelError> {
    if x.len() != 4 {
        return Err(KernelError::StateLength {
            expected: 4,
            found: x.len(),
        });
    }
    let v = x.values();
    Ok(State::new(vec![
        v[0].clone(),
        v[1].clone(),
        v[1].clone(),
        v[2].clone(),
        v[3].clone(),
        v[3].clone(),
    ]))
}

/// Membership in `Y = {x2 = x3, x5 = x6}`.
pub fn in_y(y: &State) -> bool {
    y.len() == 6 && y.get(1) == y.get(2) && y.get(4) == y.get(5)
}

/// Inverse of [`phi`] on `Y`.
pub fn phi_inv(y: &State) -> Result<State, KernelError> {
    if y.len() != 6 {
        return Err(KernelError::StateLength {
            expected: 6,
            found: y.len(),
        });
    }
    if !in_y(y) {
        return Err(KernelError::NotInY(y.to_string()));
    }
    let v = y.values();
    Ok(State::new(vec![v[0].clone(), v[1].clone(), v[3].clone(), v[4].clone()]))
}

/// A composite of four arity-3 maps on six slots shaped like
/// `R_245 R_135 R_126 R_346`. The maps may differ (the inhomogeneous case).
#[derive(Debug, Clone)]
pub struct TetrahedralComposite {
    id: String,
    expr: CompositeExpr,
    maps: MapBindings,
    bound: BoundComposite,
}

impl TetrahedralComposite {
    pub fn new(id: impl Into<String>, expr: CompositeExpr, maps: MapBindings) -> Result<Self, KernelError> {
        let labels = super::numbered_labels(6);
        let signature = infer_signature(&labels, &[&expr], &maps)?;
        let bound = expr.bind(&signature, &maps)?;
        Ok(TetrahedralComposite {
            id: id.into(),
            expr,
            maps,
            bound,
        })
    }

    /// `T = R_245 R_135 R_126 R_346` for a single map.
    pub fn homogeneous(r: &LocalMap) -> Result<Self, KernelError> {
        Self::with_factorization(r, TETRA_LEFT)
    }

    /// `T` for a single map using the given factor order (`TETRA_LEFT` or `TETRA_RIGHT`).
    pub fn with_factorization(r: &LocalMap, text: &str) -> Result<Self, KernelError> {
        let maps = MapBindings::from([("R".to_string(), r.clone())]);
        Self::new(format!("T({})", r.id()), CompositeExpr::parse(text)?, maps)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn expr(&self) -> &CompositeExpr {
        &self.expr
    }

    pub fn maps(&self) -> &MapBindings {
        &self.maps
    }

    pub fn signature(&self) -> &Signature {
        self.bound.signature()
    }

    pub fn eval(&self, x: &State) -> Result<State, KernelError> {
        self.bound.eval(x)
    }

    /// Domains of the four folded coordinates, when slots 2/3 and 5/6 agree.
    pub fn folded_domains(&self) -> Result<Vec<SlotDomain>, KernelError> {
        let d: Vec<SlotDomain> = self.signature().domains().collect();
        for (a, b) in [(1, 2), (4, 5)] {
            if d[a] != d[b] {
                return Err(KernelError::DomainConflict {
                    label: (b + 1).to_string(),
                    first: d[a],
                    second: d[b],
                });
            }
        }
        Ok(vec![d[0], d[1], d[3], d[4]])
    }

    /// `T` as a single six-slot map. With `require_y`, inputs and outputs
    /// outside `Y` are rejected.
    pub fn as_block(&self, require_y: bool) -> LocalMap {
        let t = Arc::new(self.clone());
        let id = if require_y {
            format!("{}|Y", self.id)
        } else {
            self.id.clone()
        };
        LocalMap::from_fn(
            id,
            self.signature().domains().collect(),
            Arc::new(move |args: &[Scalar]| {
                let x = State::new(args.to_vec());
                if require_y && !in_y(&x) {
                    return Err(KernelError::NotInY(x.to_string()));
                }
                let y = t.eval(&x)?;
                if require_y && !in_y(&y) {
                    return Err(KernelError::NotInY(y.to_string()));
                }
                Ok(y.into_values())
            }),
        )
    }
}

/// The boundarization `J = phi^{-1} . T . phi`. Evaluation fails with
/// `NotInY` wherever `T` leaves `Y`, i.e. when the boundarizable condition
/// does not hold at that point.
pub fn boundarize(t: &TetrahedralComposite, id: impl Into<String>) -> Result<LocalMap, KernelError> {
    let domains = t.folded_domains()?;
    let t = Arc::new(t.clone());
    Ok(LocalMap::from_fn(
        id,
        domains,
        Arc::new(move |args: &[Scalar]| {
            let x = State::new(args.to_vec());
            Ok(phi_inv(&t.eval(&phi(&x)?)?)?.into_values())
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::kernel::numbered_labels;

    fn rat_state(text: &str, n: usize) -> State {
        Signature::homogeneous(numbered_labels(n), SlotDomain::PosRational)
            .unwrap()
            .parse_state(text)
            .unwrap()
    }

    #[test]
    fn phi_and_inverse() {
        assert_eq!(phi(&rat_state("1,2,3,4", 4)).unwrap().to_string(), "1, 2, 2, 3, 4, 4");
        let y = rat_state("1/5,5/3,5/3,9/5,1/3,1/3", 6);
        assert_eq!(phi_inv(&y).unwrap().to_string(), "1/5, 5/3, 9/5, 1/3");
        assert!(matches!(phi_inv(&rat_state("1,2,3,3,4,4", 6)), Err(KernelError::NotInY(_))));
    }

    #[test]
    fn tetrahedral_composite_on_ones() {
        let t = TetrahedralComposite::homogeneous(&Catalog::new().map("3dr").unwrap()).unwrap();
        let y = t.eval(&rat_state("1,1,1,1,1,1", 6)).unwrap();
        assert_eq!(y.to_string(), "1/5, 5/3, 5/3, 9/5, 1/3, 1/3");
        assert!(in_y(&y));
    }

    #[test]
    fn boundarization_values() {
        let c = Catalog::new();
        let j = boundarize(&c.tetrahedral("3dr").unwrap(), "J").unwrap();
        let out = j.apply(rat_state("1,1,1,1", 4).values()).unwrap();
        assert_eq!(State::new(out).to_string(), "1/5, 5/3, 9/5, 1/3");
        let jc = boundarize(&c.tetrahedral("3dr-crystal").unwrap(), "Jc").unwrap();
        let ones: Vec<Scalar> = (0..4).map(|_| Scalar::int(1)).collect();
        assert_eq!(jc.apply(&ones).unwrap(), ones);
    }

    #[test]
    fn super_boundarization_second_case() {
        let c = Catalog::new();
        let j = boundarize(&c.tetrahedral("super-T").unwrap(), "J").unwrap();
        for x4 in 1..6 {
            let out = j.apply(&[Scalar::int(0), Scalar::bit(0), Scalar::int(x4), Scalar::bit(0)]).unwrap();
            assert_eq!(out, [Scalar::int(1), Scalar::bit(0), Scalar::int(x4 - 1), Scalar::bit(1)]);
        }
    }

    #[test]
    fn block_rejects_states_outside_y() {
        let t = TetrahedralComposite::homogeneous(&Catalog::new().map("3dr").unwrap()).unwrap();
        let strict = t.as_block(true);
        assert!(matches!(strict.apply(rat_state("1,2,3,3,4,4", 6).values()), Err(KernelError::NotInY(_))));
        assert!(t.as_block(false).apply(rat_state("1,2,3,3,4,4", 6).values()).is_ok());
    }
}
