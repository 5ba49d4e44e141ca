use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::SlotDomain;

use super::{KernelError, LocalMap, Signature, State};

/// Map symbols (`R`, `J`, ...) to concrete maps.
pub type MapBindings = BTreeMap<String, LocalMap>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub map: String,
    pub labels: Vec<String>,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.map, self.labels.join(","))
    }
}

/// A product of indexed maps, written left to right and applied right to
/// left: in `A[1,2,3] B[2,3,4]` the factor `B` acts first.
///
/// Text form: whitespace-separated factors `NAME[l1,l2,...]`. Labels are
/// alphanumeric; a trailing `b` marks a barred copy (`4b` for 4-bar). The
/// empty string is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompositeExpr {
    pub factors: Vec<Factor>,
}

impl CompositeExpr {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self, KernelError> {
        let b = text.as_bytes();
        let mut pos = 0;
        let mut factors = Vec::new();
        let err = |pos: usize, msg: &str| KernelError::Syntax {
            pos,
            msg: msg.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < b.len() && b[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos == b.len() {
                break;
            }
            let start = pos;
            if !(b[pos].is_ascii_alphabetic() || b[pos] == b'_') {
                return Err(err(pos, "expected a map name"));
            }
            while pos < b.len() && (b[pos].is_ascii_alphanumeric() || b[pos] == b'_' || b[pos] == b'-') {
                pos += 1;
            }
            let name = text[start..pos].to_string();
            if pos == b.len() || b[pos] != b'[' {
                return Err(err(pos, "expected `[` after map name"));
            }
            pos += 1;
            let mut labels = Vec::new();
            loop {
                skip_ws(&mut pos);
                let ls = pos;
                while pos < b.len() && b[pos].is_ascii_alphanumeric() {
                    pos += 1;
                }
                if ls == pos {
                    return Err(err(pos, "expected a label"));
                }
                labels.push(text[ls..pos].to_string());
                skip_ws(&mut pos);
                match b.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b']') => {
                        pos += 1;
                        break;
                    }
                    _ => return Err(err(pos, "expected `,` or `]`")),
                }
            }
            factors.push(Factor { map: name, labels });
        }
        Ok(CompositeExpr { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Renames every label.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Self {
        CompositeExpr {
            factors: self
                .factors
                .iter()
                .map(|fa| Factor {
                    map: fa.map.clone(),
                    labels: fa.labels.iter().map(|l| f(l)).collect(),
                })
                .collect(),
        }
    }

    /// Renames map symbols.
    pub fn rename_maps(&self, f: impl Fn(&str) -> String) -> Self {
        CompositeExpr {
            factors: self
                .factors
                .iter()
                .map(|fa| Factor {
                    map: f(&fa.map),
                    labels: fa.labels.clone(),
                })
                .collect(),
        }
    }

    /// Concatenation: `self` after `other` (so `other` acts first).
    pub fn then_after(&self, other: &CompositeExpr) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        CompositeExpr { factors }
    }

    /// Map symbols in order of first appearance.
    pub fn map_symbols(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for f in &self.factors {
            if !out.contains(&f.map.as_str()) {
                out.push(&f.map);
            }
        }
        out
    }

    pub fn bind(&self, signature: &Signature, maps: &MapBindings) -> Result<BoundComposite, KernelError> {
        let mut steps = Vec::with_capacity(self.factors.len());
        for f in self.factors.iter().rev() {
            let map = maps.get(&f.map).ok_or_else(|| KernelError::UnknownMap(f.map.clone()))?;
            if map.arity() != f.labels.len() {
                return Err(KernelError::ArityMismatch {
                    map: f.map.clone(),
                    expected: map.arity(),
                    found: f.labels.len(),
                });
            }
            let mut positions = Vec::with_capacity(f.labels.len());
            for (a, l) in f.labels.iter().enumerate() {
                let p = signature.position(l)?;
                if positions.contains(&p) {
                    return Err(KernelError::DuplicateLabel(l.clone()));
                }
                if signature.domain(p) != map.domains()[a] {
                    return Err(KernelError::DomainMismatch {
                        map: f.map.clone(),
                        position: a + 1,
                        expected: map.domains()[a],
                        found: format!("slot `{l}` of domain {}", signature.domain(p)),
                    });
                }
                positions.push(p);
            }
            steps.push((map.clone(), positions));
        }
        Ok(BoundComposite {
            signature: signature.clone(),
            steps,
        })
    }
}

impl fmt::Display for CompositeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, fa) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{fa}")?;
        }
        Ok(())
    }
}

/// Infers the slot domains of `labels` from the argument domains of every
/// factor of `exprs`. Each label must receive a single consistent domain.
pub fn infer_signature(
    labels: &[String],
    exprs: &[&CompositeExpr],
    maps: &MapBindings,
) -> Result<Signature, KernelError> {
    let mut doms: Vec<Option<SlotDomain>> = vec![None; labels.len()];
    for e in exprs {
        for f in &e.factors {
            let map = maps.get(&f.map).ok_or_else(|| KernelError::UnknownMap(f.map.clone()))?;
            if map.arity() != f.labels.len() {
                return Err(KernelError::ArityMismatch {
                    map: f.map.clone(),
                    expected: map.arity(),
                    found: f.labels.len(),
                });
            }
            for (a, l) in f.labels.iter().enumerate() {
                let p = labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| KernelError::UnknownLabel(l.clone()))?;
                let d = map.domains()[a];
                match doms[p] {
                    None => doms[p] = Some(d),
                    Some(prev) if prev != d => {
                        return Err(KernelError::DomainConflict {
                            label: l.clone(),
                            first: prev,
                            second: d,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let slots = labels
        .iter()
        .zip(doms)
        .map(|(l, d)| d.map(|d| (l.clone(), d)).ok_or_else(|| KernelError::UnconstrainedLabel(l.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Signature::new(slots)
}

/// A composite resolved against a signature, ready to evaluate.
#[derive(Debug, Clone)]
pub struct BoundComposite {
    signature: Signature,
    /// In application order.
    steps: Vec<(LocalMap, Vec<usize>)>,
}

impl BoundComposite {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn eval(&self, state: &State) -> Result<State, KernelError> {
        state.check(&self.signature)?;
        let mut cur = state.clone();
        for (map, pos) in &self.steps {
            cur = map.apply_at(pos, &cur)?;
        }
        Ok(cur)
    }

    /// Every intermediate state, starting with the input.
    pub fn trace(&self, state: &State) -> Result<Vec<State>, KernelError> {
        state.check(&self.signature)?;
        let mut out = vec![state.clone()];
        for (map, pos) in &self.steps {
            let next = map.apply_at(pos, out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_tetrahedral_composite() {
        let e = CompositeExpr::parse("R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]").unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.factors[3].labels, ["3", "4", "6"]);
        assert_eq!(e.to_string(), "R[2,4,5] R[1,3,5] R[1,2,6] R[3,4,6]");
    }

    #[test]
    fn barred_labels_and_whitespace() {
        let e = CompositeExpr::parse("  R[4b, 8b ,9b]\n").unwrap();
        assert_eq!(e.factors[0].labels, ["4b", "8b", "9b"]);
        assert_eq!(e.to_string(), "R[4b,8b,9b]");
    }

    #[test]
    fn empty_is_identity() {
        let e = CompositeExpr::parse("").unwrap();
        assert!(e.is_empty());
        assert_eq!(e, CompositeExpr::identity());
    }

    #[test]
    fn syntax_errors_report_position() {
        for (text, pos) in [("R[1,2", 5), ("R(1,2,3)", 1), ("R[1,,2]", 4)] {
            match CompositeExpr::parse(text) {
                Err(KernelError::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn binding_reports_unknown_maps() {
        let e = CompositeExpr::parse("Q[1,2,3]").unwrap();
        let sig = Signature::homogeneous(["1", "2", "3"], crate::scalar::SlotDomain::PosRational).unwrap();
        assert!(matches!(e.bind(&sig, &MapBindings::new()), Err(KernelError::UnknownMap(m)) if m == "Q"));
    }
}
