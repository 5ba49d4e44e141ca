//! The named identities, as pairs of composites over labelled slots.
//!
//! Slot domains are never written down by hand: they are inferred from the
//! argument domains of the bound maps, and a label used with two different
//! domains is an error. For `tre-super` this yields `Z>=0` on slots
//! 1, 2, 3, 4, 7 and `{0,1}` on 5, 6, 8, 9; for `r20-super`, `Z>=0` on
//! 1, 2, 2b, 3, 4, 4b, 7 and `{0,1}` elsewhere.

use std::collections::BTreeMap;

use crate::kernel::{
    infer_signature, numbered_labels, r20_labels, BoundComposite, CompositeExpr, KernelError, MapBindings,
    Signature, TETRA_LEFT, TETRA_RIGHT,
};

use super::{Catalog, CatalogError};

const TRE_LEFT: &str = "R[4,8,9] J[3,5,7,9] R[2,6,9] R[2,5,8] J[1,6,7,8] J[1,2,3,4] R[4,5,6]";
const TRE_RIGHT: &str = "R[4,5,6] J[1,2,3,4] J[1,6,7,8] R[2,5,8] R[2,6,9] J[3,5,7,9] R[4,8,9]";

const R20_LEFT: &str = "R[4,8,9] R[4b,8b,9b] R[5,7,9] R[3,5b,9] R[3,5,9b] R[5b,7,9b] \
    R[2,6,9b] R[2b,6b,9] R[2,5b,8] R[2b,5,8b] R[6b,7,8b] R[1,6,8b] R[1,6b,8] R[6,7,8] \
    R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] R[4b,5b,6b] R[4,5,6]";
const R20_RIGHT: &str = "R[4,5,6] R[4b,5b,6b] R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] \
    R[6b,7,8b] R[1,6,8b] R[1,6b,8] R[6,7,8] R[2b,5,8b] R[2,5b,8] R[2b,6b,9] R[2,6,9b] \
    R[5,7,9] R[3,5b,9] R[3,5,9b] R[5b,7,9b] R[4b,8b,9b] R[4,8,9]";

const R20_SUPER_LEFT: &str = "M[4,8,9] M[4b,8b,9b] N[5,7,9] M[3,5b,9] M[3,5,9b] N[5b,7,9b] \
    M[2,6,9b] M[2b,6b,9] M[2,5b,8] M[2b,5,8b] N[6b,7,8b] M[1,6,8b] M[1,6b,8] N[6,7,8] \
    R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] M[4b,5b,6b] M[4,5,6]";
const R20_SUPER_RIGHT: &str = "M[4,5,6] M[4b,5b,6b] R[2,3,4] R[1,2b,4] R[1,2,4b] R[2b,3,4b] \
    N[6b,7,8b] M[1,6,8b] M[1,6b,8] N[6,7,8] M[2b,5,8b] M[2,5b,8] M[2b,6b,9] M[2,6,9b] \
    N[5,7,9] M[3,5b,9] M[3,5,9b] N[5b,7,9b] M[4b,8b,9b] M[4,8,9]";

/// The twenty-factor identity with each group of four factors forming a
/// tetrahedral composite collapsed into one six-slot block `T`.
pub const R20_TETRA_LEFT: &str = "R[4,8,9] R[4b,8b,9b] T[3,5,5b,7,9,9b] R[2,6,9b] R[2b,6b,9] \
    R[2,5b,8] R[2b,5,8b] T[1,6,6b,7,8,8b] T[1,2,2b,3,4,4b] R[4b,5b,6b] R[4,5,6]";
pub const R20_TETRA_RIGHT: &str = "R[4,5,6] R[4b,5b,6b] T[1,2,2b,3,4,4b] T[1,6,6b,7,8,8b] \
    R[2b,5,8b] R[2,5b,8] R[2b,6b,9] R[2,6,9b] T[3,5,5b,7,9,9b] R[4b,8b,9b] R[4,8,9]";

/// An identity `lhs = rhs` on the slots `labels`, with each map symbol bound
/// to a catalog id.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSpec {
    pub id: String,
    pub summary: String,
    pub labels: Vec<String>,
    pub lhs: CompositeExpr,
    pub rhs: CompositeExpr,
    pub bindings: BTreeMap<String, String>,
}

/// An equation with maps and signature resolved, ready to evaluate.
#[derive(Debug, Clone)]
pub struct ResolvedEquation {
    pub id: String,
    pub signature: Signature,
    pub maps: MapBindings,
    pub lhs_expr: CompositeExpr,
    pub rhs_expr: CompositeExpr,
    pub lhs: BoundComposite,
    pub rhs: BoundComposite,
}

impl ResolvedEquation {
    pub fn new(
        id: impl Into<String>,
        labels: &[String],
        lhs_expr: CompositeExpr,
        rhs_expr: CompositeExpr,
        maps: MapBindings,
    ) -> Result<Self, KernelError> {
        let signature = infer_signature(labels, &[&lhs_expr, &rhs_expr], &maps)?;
        let lhs = lhs_expr.bind(&signature, &maps)?;
        let rhs = rhs_expr.bind(&signature, &maps)?;
        Ok(ResolvedEquation {
            id: id.into(),
            signature,
            maps,
            lhs_expr,
            rhs_expr,
            lhs,
            rhs,
        })
    }

    /// Replaces the map bound to `symbol` and re-resolves.
    pub fn with_map(&self, symbol: &str, map: crate::kernel::LocalMap) -> Result<Self, KernelError> {
        let mut maps = self.maps.clone();
        maps.insert(symbol.to_string(), map);
        let labels: Vec<String> = self.signature.labels().map(String::from).collect();
        Self::new(self.id.clone(), &labels, self.lhs_expr.clone(), self.rhs_expr.clone(), maps)
    }
}

impl EquationSpec {
    fn new(id: &str, summary: &str, labels: Vec<String>, lhs: &str, rhs: &str, bindings: &[(&str, &str)]) -> Self {
        EquationSpec {
            id: id.to_string(),
            summary: summary.to_string(),
            labels,
            lhs: CompositeExpr::parse(lhs).expect("registry composite"),
            rhs: CompositeExpr::parse(rhs).expect("registry composite"),
            bindings: bindings.iter().map(|(s, m)| (s.to_string(), m.to_string())).collect(),
        }
    }

    /// Same equation with `symbol` bound to another catalog map.
    pub fn with_binding(&self, symbol: &str, map_id: &str) -> Self {
        let mut e = self.clone();
        e.bindings.insert(symbol.to_string(), map_id.to_string());
        e
    }

    pub fn resolve(&self, catalog: &Catalog) -> Result<ResolvedEquation, CatalogError> {
        let maps = self
            .bindings
            .iter()
            .map(|(s, id)| Ok((s.clone(), catalog.map(id)?)))
            .collect::<Result<MapBindings, CatalogError>>()?;
        Ok(ResolvedEquation::new(
            self.id.clone(),
            &self.labels,
            self.lhs.clone(),
            self.rhs.clone(),
            maps,
        )?)
    }
}

/// All registered equations.
pub fn equation_registry() -> Vec<EquationSpec> {
    let six = numbered_labels(6);
    let nine = numbered_labels(9);
    vec![
        EquationSpec::new("te", "tetrahedron equation for 3dr", six.clone(), TETRA_LEFT, TETRA_RIGHT, &[("R", "3dr")]),
        EquationSpec::new(
            "te-usual",
            "tetrahedron equation for 3dr, relabelled to the common index convention",
            six.clone(),
            "R[1,2,3] R[1,4,5] R[2,4,6] R[3,5,6]",
            "R[3,5,6] R[2,4,6] R[1,4,5] R[1,2,3]",
            &[("R", "3dr")],
        ),
        EquationSpec::new(
            "tre",
            "3D reflection equation for (3dr, 3dj)",
            nine.clone(),
            TRE_LEFT,
            TRE_RIGHT,
            &[("R", "3dr"), ("J", "3dj")],
        ),
        EquationSpec::new(
            "tre-1para",
            "3D reflection equation for the electrical pair",
            nine.clone(),
            TRE_LEFT,
            TRE_RIGHT,
            &[("R", "3dr-electrical"), ("J", "3dj-electrical")],
        ),
        EquationSpec::new(
            "tre-crystal",
            "3D reflection equation for the tropical pair",
            nine.clone(),
            TRE_LEFT,
            TRE_RIGHT,
            &[("R", "3dr-crystal"), ("J", "3dj-crystal")],
        ),
        EquationSpec::new(
            "r20",
            "twenty-factor identity on fifteen slots for 3dr",
            r20_labels(),
            R20_LEFT,
            R20_RIGHT,
            &[("R", "3dr")],
        ),
        EquationSpec::new(
            "r20-super",
            "twenty-factor identity for the super maps",
            r20_labels(),
            R20_SUPER_LEFT,
            R20_SUPER_RIGHT,
            &[("M", "3dm"), ("N", "3dn"), ("R", "3dr-crystal")],
        ),
        EquationSpec::new(
            "te-super-1",
            "inhomogeneous tetrahedron equation in 3dm and 3dn",
            six.clone(),
            "N[2,4,5] M[1,3,5] M[1,2,6] N[3,4,6]",
            "N[3,4,6] M[1,2,6] M[1,3,5] N[2,4,5]",
            &[("M", "3dm"), ("N", "3dn")],
        ),
        EquationSpec::new(
            "te-super-2",
            "inhomogeneous tetrahedron equation in 3dr-crystal and 3dm",
            six,
            "R[1,2,3] M[1,4,5] M[2,4,6] M[3,5,6]",
            "M[3,5,6] M[2,4,6] M[1,4,5] R[1,2,3]",
            &[("R", "3dr-crystal"), ("M", "3dm")],
        ),
        EquationSpec::new(
            "tre-super",
            "3D reflection equation for 3dm, 3dx and 3dj-crystal",
            nine,
            "M[4,8,9] X[3,5,7,9] M[2,6,9] M[2,5,8] X[1,6,7,8] J[1,2,3,4] M[4,5,6]",
            "M[4,5,6] J[1,2,3,4] X[1,6,7,8] M[2,5,8] M[2,6,9] X[3,5,7,9] M[4,8,9]",
            &[("M", "3dm"), ("X", "3dx"), ("J", "3dj-crystal")],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::SlotDomain;

    #[test]
    fn every_equation_resolves() {
        let c = Catalog::new();
        let all = equation_registry();
        assert_eq!(all.len(), 10);
        for e in &all {
            let r = e.resolve(&c).unwrap_or_else(|err| panic!("{}: {err}", e.id));
            assert_eq!(r.signature.len(), e.labels.len());
        }
    }

    #[test]
    fn tre_lookup() {
        let e = Catalog::new().equation("tre").unwrap();
        assert_eq!(e.labels.len(), 9);
        assert_eq!(e.lhs.to_string(), TRE_LEFT);
        assert_eq!(e.lhs.len(), 7);
    }

    #[test]
    fn te_super_2_signature() {
        let r = Catalog::new().equation("te-super-2").unwrap().resolve(&Catalog::new()).unwrap();
        let d: Vec<SlotDomain> = r.signature.domains().collect();
        assert_eq!(d[..3], [SlotDomain::NonNegInt; 3]);
        assert_eq!(d[3..], [SlotDomain::Bit; 3]);
    }

    #[test]
    fn mixed_signatures() {
        let c = Catalog::new();
        let ints_of = |id: &str| -> Vec<String> {
            let r = c.equation(id).unwrap().resolve(&c).unwrap();
            r.signature
                .labels()
                .zip(r.signature.domains())
                .filter(|(_, d)| *d == SlotDomain::NonNegInt)
                .map(|(l, _)| l.to_string())
                .collect()
        };
        assert_eq!(ints_of("tre-super"), ["1", "2", "3", "4", "7"]);
        assert_eq!(ints_of("r20-super"), ["1", "2", "2b", "3", "4", "4b", "7"]);
    }

    #[test]
    fn rebinding_changes_domains() {
        let c = Catalog::new();
        let e = c.equation("tre").unwrap().with_binding("R", "3dr-vec").with_binding("J", "3dj-vec");
        let r = e.resolve(&c).unwrap();
        assert!(r.signature.domains().all(|d| d == SlotDomain::PosRationalPair));
        let bad = c.equation("tre").unwrap().with_binding("J", "3dj-vec");
        assert!(matches!(
            bad.resolve(&c),
            Err(CatalogError::Kernel(KernelError::DomainConflict { .. }))
        ));
    }
}
