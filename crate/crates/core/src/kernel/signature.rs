use std::fmt;

use crate::scalar::{Scalar, SlotDomain};

use super::KernelError;

/// Ordered slots of a product space, each with a label and a domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    slots: Vec<(String, SlotDomain)>,
}

impl Signature {
    pub fn new<S: Into<String>>(
        slots: impl IntoIterator<Item = (S, SlotDomain)>,
    ) -> Result<Self, KernelError> {
        let slots: Vec<(String, SlotDomain)> = slots.into_iter().map(|(l, d)| (l.into(), d)).collect();
        for (i, (l, _)) in slots.iter().enumerate() {
            if slots[..i].iter().any(|(m, _)| m == l) {
                return Err(KernelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Signature { slots })
    }

    pub fn homogeneous<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        domain: SlotDomain,
    ) -> Result<Self, KernelError> {
        Self::new(labels.into_iter().map(|l| (l, domain)))
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn position(&self, label: &str) -> Result<usize, KernelError> {
        self.slots
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| KernelError::UnknownLabel(label.to_string()))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.slots.iter().map(|(l, _)| l.as_str())
    }

    pub fn domains(&self) -> impl Iterator<Item = SlotDomain> + '_ {
        self.slots.iter().map(|(_, d)| *d)
    }

    pub fn domain(&self, i: usize) -> SlotDomain {
        self.slots[i].1
    }

    /// Parses a comma-separated state, one entry per slot.
    pub fn parse_state(&self, text: &str) -> Result<State, KernelError> {
        let parts: Vec<&str> = if text.trim().is_empty() {
            Vec::new()
        } else {
            text.split(',').collect()
        };
        if parts.len() != self.len() {
            return Err(KernelError::StateLength {
                expected: self.len(),
                found: parts.len(),
            });
        }
        let values = parts
            .iter()
            .zip(self.domains())
            .map(|(p, d)| d.parse_value(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(State::new(values))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, d)) in self.slots.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{l}:{d}")?;
        }
        Ok(())
    }
}

/// `"1"`, `"2"`, ..., `"n"`.
pub fn numbered_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// The fifteen spaces of the doubled reflection identity, in order
/// `1, 2, 2b, 3, 4, 4b, 5, 5b, 6, 6b, 7, 8, 8b, 9, 9b` (`b` marks a barred copy).
pub fn r20_labels() -> Vec<String> {
    ["1", "2", "2b", "3", "4", "4b", "5", "5b", "6", "6b", "7", "8", "8b", "9", "9b"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// A point of a product space.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    values: Vec<Scalar>,
}

impl State {
    pub fn new(values: Vec<Scalar>) -> Self {
        State { values }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Scalar> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.values[i]
    }

    pub fn set(&mut self, i: usize, v: Scalar) {
        self.values[i] = v;
    }

    pub fn check(&self, sig: &Signature) -> Result<(), KernelError> {
        if self.len() != sig.len() {
            return Err(KernelError::StateLength {
                expected: sig.len(),
                found: self.len(),
            });
        }
        for (i, (v, d)) in self.values.iter().zip(sig.domains()).enumerate() {
            if !v.fits(d) {
                return Err(KernelError::DomainMismatch {
                    map: "<state>".into(),
                    position: i + 1,
                    expected: d,
                    found: v.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Slot strings, for reports.
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromIterator<Scalar> for State {
    fn from_iter<T: IntoIterator<Item = Scalar>>(iter: T) -> Self {
        State::new(iter.into_iter().collect())
    }
}
