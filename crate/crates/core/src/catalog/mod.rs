//! Concrete tetrahedron maps, their boundary partners, and the named
//! equations they satisfy.

mod crystal;
mod equations;
pub mod formulas;

pub use crystal::{j3dj_crystal, m3dm, n3dn, r3dr_crystal, x3dx};
pub use equations::{equation_registry, EquationSpec, ResolvedEquation, R20_TETRA_LEFT, R20_TETRA_RIGHT};
pub use formulas::{EXPR_3DJ, EXPR_3DR};

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::kernel::{CompositeExpr, FormulaPair, KernelError, LocalMap, MapBindings, Param, TetrahedralComposite};
use crate::poly::RatFunc;
use crate::scalar::SlotDomain;
use crate::semifield::{RationalFunctions, Rationals};

use SlotDomain::{Bit, NonNegInt, PosRational, PosRationalPair};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown map `{id}`; known maps: {}", known.join(", "))]
    UnknownMap { id: String, known: Vec<String> },
    #[error("unknown equation `{id}`; known equations: {}", known.join(", "))]
    UnknownEquation { id: String, known: Vec<String> },
    #[error("`{0}` is not a tetrahedron map or tetrahedral composite")]
    NotTetrahedral(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Id of the inhomogeneous tetrahedral composite `N_245 M_135 M_126 N_346`.
pub const SUPER_T: &str = "super-T";

/// Factor order of [`SUPER_T`], with `M = 3dm`, `N = 3dn`.
pub const SUPER_T_LEFT: &str = "N[2,4,5] M[1,3,5] M[1,2,6] N[3,4,6]";
pub const SUPER_T_RIGHT: &str = "N[3,4,6] M[1,2,6] M[1,3,5] N[2,4,5]";

/// A registered map with the properties it is claimed to have. The claims are
/// data for the verifier, not assumptions used anywhere.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub map: LocalMap,
    pub summary: &'static str,
    pub involutive: bool,
    /// `R_123 = R_321`. Only meaningful for arity 3.
    pub symmetric: Option<bool>,
    pub boundarizable: bool,
    /// For a tetrahedron map, the id of its closed-form boundarization.
    pub partner: Option<&'static str>,
}

/// The map registry. Parameterized maps use the catalog's `lambda`.
#[derive(Debug, Clone)]
pub struct Catalog {
    lambda: Param,
    entries: Vec<CatalogEntry>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::new()
    }
}

macro_rules! formula {
    ($f:path) => {
        Arc::new(FormulaPair {
            rat: |fld: &Rationals, x: &[BigRational]| $f(fld, x),
            sym: |fld: &RationalFunctions, x: &[RatFunc]| $f(fld, x),
        })
    };
}

/// [`formulas::r3dr_with_coefficients`] as a birational map.
struct Perturbed3dr([u32; 8]);

impl crate::kernel::BirationalRule for Perturbed3dr {
    fn eval_rat(&self, field: &Rationals, x: &[BigRational]) -> Vec<BigRational> {
        formulas::r3dr_with_coefficients(field, &self.0, x)
    }
    fn eval_sym(&self, field: &RationalFunctions, x: &[RatFunc]) -> Vec<RatFunc> {
        formulas::r3dr_with_coefficients(field, &self.0, x)
    }
}

/// `3dr` with coefficient `index` (0..8, see [`formulas::r3dr_with_coefficients`])
/// replaced by `value`.
pub fn perturbed_3dr(index: usize, value: u32) -> LocalMap {
    let mut c = [1u32; 8];
    c[index] = value;
    LocalMap::birational(
        format!("3dr~c{index}={value}"),
        vec![PosRational; 3],
        Arc::new(Perturbed3dr(c)),
        None,
    )
}

impl Catalog {
    /// Catalog with `lambda = 1`.
    pub fn new() -> Self {
        Self::with_lambda(Param::Value(BigRational::one()))
    }

    pub fn with_lambda(lambda: Param) -> Self {
        let lam = Some(lambda.clone());
        let q3 = vec![PosRational; 3];
        let q4 = vec![PosRational; 4];
        let entries = vec![
            CatalogEntry {
                id: "3dr",
                map: LocalMap::birational("3dr", q3.clone(), formula!(formulas::r3dr), None),
                summary: "birational tetrahedron map on positive rationals",
                involutive: true,
                symmetric: Some(true),
                boundarizable: true,
                partner: Some("3dj"),
            },
            CatalogEntry {
                id: "3dr-crystal",
                map: LocalMap::integer("3dr-crystal", vec![NonNegInt; 3], r3dr_crystal),
                summary: "tropical limit of 3dr on nonnegative integers",
                involutive: true,
                symmetric: Some(true),
                boundarizable: true,
                partner: Some("3dj-crystal"),
            },
            CatalogEntry {
                id: "3dr-electrical",
                map: LocalMap::birational(
                    "3dr-electrical",
                    q3.clone(),
                    formula!(formulas::r3dr_electrical),
                    lam.clone(),
                ),
                summary: "one-parameter electrical map; lambda = 0 gives 3dr",
                involutive: true,
                symmetric: Some(true),
                boundarizable: true,
                partner: Some("3dj-electrical"),
            },
            CatalogEntry {
                id: "3dr-vec",
                map: LocalMap::birational(
                    "3dr-vec",
                    vec![PosRationalPair; 3],
                    formula!(formulas::r3dr_vec),
                    None,
                ),
                summary: "two-component map; first components follow 3dr",
                involutive: true,
                symmetric: Some(true),
                boundarizable: true,
                partner: Some("3dj-vec"),
            },
            CatalogEntry {
                id: "3dm",
                map: LocalMap::integer("3dm", vec![NonNegInt, Bit, Bit], m3dm),
                summary: "super map on Z>=0 x {0,1} x {0,1}",
                involutive: true,
                symmetric: Some(false),
                boundarizable: false,
                partner: None,
            },
            CatalogEntry {
                id: "3dn",
                map: LocalMap::integer("3dn", vec![Bit, NonNegInt, Bit], n3dn),
                summary: "super map on {0,1} x Z>=0 x {0,1}",
                involutive: true,
                symmetric: Some(true),
                boundarizable: false,
                partner: None,
            },
            CatalogEntry {
                id: "3dj",
                map: LocalMap::birational("3dj", q4.clone(), formula!(formulas::j3dj), None),
                summary: "3D reflection map, boundarization of 3dr",
                involutive: true,
                symmetric: None,
                boundarizable: false,
                partner: None,
            },
            CatalogEntry {
                id: "3dj-crystal",
                map: LocalMap::integer("3dj-crystal", vec![NonNegInt; 4], j3dj_crystal),
                summary: "tropical limit of 3dj",
                involutive: true,
                symmetric: None,
                boundarizable: false,
                partner: None,
            },
            CatalogEntry {
                id: "3dj-electrical",
                map: LocalMap::birational(
                    "3dj-electrical",
                    q4.clone(),
                    formula!(formulas::j3dj_electrical),
                    lam,
                ),
                summary: "boundarization of the electrical map",
                involutive: true,
                symmetric: None,
                boundarizable: false,
                partner: None,
            },
            CatalogEntry {
                id: "3dj-vec",
                map: LocalMap::birational(
                    "3dj-vec",
                    vec![PosRationalPair; 4],
                    formula!(formulas::j3dj_vec),
                    None,
                ),
                summary: "boundarization of the two-component map",
                involutive: true,
                symmetric: None,
                boundarizable: false,
                partner: None,
            },
            CatalogEntry {
                id: "3dx",
                map: LocalMap::integer("3dx", vec![NonNegInt, Bit, NonNegInt, Bit], x3dx),
                summary: "super 3D reflection map, boundarization of super-T",
                involutive: true,
                symmetric: None,
                boundarizable: false,
                partner: None,
            },
        ];
        Catalog { lambda, entries }
    }

    pub fn lambda(&self) -> &Param {
        &self.lambda
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.id).collect()
    }

    pub fn entry(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| CatalogError::UnknownMap {
            id: id.to_string(),
            known: self.ids().into_iter().map(String::from).collect(),
        })
    }

    pub fn map(&self, id: &str) -> Result<LocalMap, CatalogError> {
        Ok(self.entry(id)?.map.clone())
    }

    /// Ids accepted by [`Catalog::tetrahedral`].
    pub fn tetrahedral_ids(&self) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = self
            .entries
            .iter()
            .filter(|e| e.map.arity() == 3)
            .map(|e| e.id)
            .collect();
        ids.push(SUPER_T);
        ids
    }

    /// The tetrahedral composite of an arity-3 map, or [`SUPER_T`].
    pub fn tetrahedral(&self, id: &str) -> Result<TetrahedralComposite, CatalogError> {
        self.tetrahedral_with_order(id, false)
    }

    /// As [`Catalog::tetrahedral`], using the reversed factor order
    /// `R_346 R_126 R_135 R_245` when `reversed`.
    pub fn tetrahedral_with_order(&self, id: &str, reversed: bool) -> Result<TetrahedralComposite, CatalogError> {
        if id == SUPER_T {
            let maps = MapBindings::from([
                ("M".to_string(), self.map("3dm")?),
                ("N".to_string(), self.map("3dn")?),
            ]);
            let text = if reversed { SUPER_T_RIGHT } else { SUPER_T_LEFT };
            return Ok(TetrahedralComposite::new(SUPER_T, CompositeExpr::parse(text)?, maps)?);
        }
        let r = self.map(id)?;
        if r.arity() != 3 {
            return Err(CatalogError::NotTetrahedral(id.to_string()));
        }
        let text = if reversed {
            crate::kernel::TETRA_RIGHT
        } else {
            crate::kernel::TETRA_LEFT
        };
        Ok(TetrahedralComposite::with_factorization(&r, text)?)
    }

    /// The closed-form boundary map registered for `id`.
    pub fn partner(&self, id: &str) -> Result<Option<LocalMap>, CatalogError> {
        if id == SUPER_T {
            return Ok(Some(self.map("3dx")?));
        }
        match self.entry(id)?.partner {
            Some(p) => Ok(Some(self.map(p)?)),
            None => Ok(None),
        }
    }

    pub fn equation(&self, id: &str) -> Result<EquationSpec, CatalogError> {
        let all = equation_registry();
        let known = all.iter().map(|e| e.id.clone()).collect();
        all.into_iter()
            .find(|e| e.id == id)
            .ok_or(CatalogError::UnknownEquation { id: id.to_string(), known })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn rats(v: &[(i64, i64)]) -> Vec<Scalar> {
        v.iter().map(|&(n, d)| Scalar::rat(n, d)).collect()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn apply(c: &Catalog, id: &str, args: Vec<Scalar>) -> Vec<Scalar> {
        c.map(id).unwrap().apply(&args).unwrap()
    }

    #[test]
    fn map_3dr_values() {
        let c = Catalog::new();
        assert_eq!(apply(&c, "3dr", rats(&[(1, 1), (1, 1), (1, 1)])), rats(&[(1, 2), (2, 1), (1, 2)]));
        assert_eq!(apply(&c, "3dr", rats(&[(2, 1), (3, 1), (1, 1)])), rats(&[(2, 1), (3, 1), (1, 1)]));
        assert_eq!(apply(&c, "3dr", rats(&[(1, 1), (2, 1), (3, 1)])), rats(&[(1, 2), (4, 1), (3, 2)]));
    }

    #[test]
    fn electrical_values() {
        let c = Catalog::new();
        let ones = rats(&[(1, 1); 3]);
        assert_eq!(apply(&c, "3dr-electrical", ones.clone()), rats(&[(1, 3), (3, 1), (1, 3)]));
        assert_eq!(
            apply(&c, "3dr-electrical", rats(&[(2, 1), (3, 1), (1, 1)])),
            rats(&[(2, 3), (9, 1), (1, 3)])
        );
        assert_eq!(
            apply(&c, "3dj-electrical", rats(&[(1, 1); 4])),
            rats(&[(1, 9), (9, 5), (25, 9), (1, 5)])
        );
    }

    #[test]
    fn electrical_at_zero_is_3dr() {
        let c = Catalog::with_lambda(Param::Value(BigRational::from_integer(0.into())));
        let x = rats(&[(3, 7), (5, 2), (1, 9)]);
        assert_eq!(apply(&c, "3dr-electrical", x.clone()), apply(&c, "3dr", x));
    }

    #[test]
    fn vec_values() {
        let c = Catalog::new();
        let pair = |a: (i64, i64), b: (i64, i64)| {
            Scalar::Pair(
                crate::scalar::PosRational::from_ints(a.0, a.1).unwrap(),
                crate::scalar::PosRational::from_ints(b.0, b.1).unwrap(),
            )
        };
        let out = apply(&c, "3dr-vec", vec![pair((1, 1), (2, 1)), pair((1, 1), (1, 1)), pair((1, 1), (1, 1))]);
        assert_eq!(out, vec![pair((1, 2), (4, 3)), pair((2, 1), (3, 2)), pair((1, 2), (2, 3))]);
        let ones = vec![pair((1, 1), (1, 1)); 4];
        let out = apply(&c, "3dj-vec", ones);
        assert_eq!(
            out,
            vec![pair((1, 5), (1, 1)), pair((5, 3), (1, 1)), pair((9, 5), (1, 1)), pair((1, 3), (1, 1))]
        );
    }

    #[test]
    fn boundary_and_super_values() {
        let c = Catalog::new();
        assert_eq!(apply(&c, "3dj", rats(&[(1, 1); 4])), rats(&[(1, 5), (5, 3), (9, 5), (1, 3)]));
        assert_eq!(apply(&c, "3dj-crystal", ints(&[2, 1, 0, 3])), ints(&[0, 1, 2, 1]));
        let m = c.map("3dm").unwrap();
        assert_eq!(m.apply(&[Scalar::int(2), Scalar::bit(1), Scalar::bit(0)]).unwrap(),
            vec![Scalar::int(3), Scalar::bit(0), Scalar::bit(1)]);
        let n = c.map("3dn").unwrap();
        assert_eq!(n.apply(&[Scalar::bit(0), Scalar::int(2), Scalar::bit(0)]).unwrap(),
            vec![Scalar::bit(1), Scalar::int(1), Scalar::bit(1)]);
    }

    #[test]
    fn super_maps_reject_out_of_domain_input() {
        let c = Catalog::new();
        let m = c.map("3dm").unwrap();
        let err = m.apply(&[Scalar::int(2), Scalar::int(2), Scalar::bit(0)]).unwrap_err();
        assert!(matches!(err, KernelError::DomainMismatch { position: 2, .. }));
    }

    #[test]
    fn unknown_ids_list_known_ones() {
        let c = Catalog::new();
        let err = c.map("3dq").unwrap_err();
        assert!(err.to_string().contains("3dr-crystal"));
        let err = c.equation("nope").unwrap_err();
        assert!(err.to_string().contains("tre-super"));
    }

    #[test]
    fn perturbation_with_unit_coefficient_is_3dr() {
        let c = Catalog::new();
        let x = rats(&[(3, 7), (5, 2), (1, 9)]);
        assert_eq!(perturbed_3dr(4, 1).apply(&x).unwrap(), apply(&c, "3dr", x.clone()));
        assert_ne!(perturbed_3dr(4, 2).apply(&x).unwrap(), apply(&c, "3dr", x));
    }
}
