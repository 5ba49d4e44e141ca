use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of checked instances, or `"proved"` for a symbolic identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Instances {
    Count(u64),
    Label(String),
}

impl Instances {
    pub fn proved() -> Self {
        Instances::Label("proved".to_string())
    }
}

impl fmt::Display for Instances {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instances::Count(n) => write!(f, "{n}"),
            Instances::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// An input on which the two sides differ, with both outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: Vec<String>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    /// 1-based line of a data file, for appendix traces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Outcome of one identity check. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub equation: String,
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: Instances,
    pub result: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Wall time. Left out of serialized output unless explicitly kept, so
    /// reports are byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }

    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Multi-line human-readable form.
    pub fn to_human(&self) -> String {
        let mut s = String::new();
        let verdict = match self.result {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
        };
        s.push_str(&format!("{verdict}  {}  [{}]  instances: {}", self.equation, self.backend, self.instances));
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("  ({ms} ms)"));
        }
        s.push('\n');
        if let Some(c) = &self.counterexample {
            if let Some(line) = c.line {
                s.push_str(&format!("  first differing line: {line}\n"));
            }
            s.push_str(&format!("  input: {}\n", c.input.join(", ")));
            s.push_str(&format!("  lhs:   {}\n", c.lhs.join(", ")));
            s.push_str(&format!("  rhs:   {}\n", c.rhs.join(", ")));
            if let Some(n) = &c.note {
                s.push_str(&format!("  note:  {n}\n"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> VerificationReport {
        VerificationReport {
            equation: "te".into(),
            backend: "sample(count=3, seed=1)".into(),
            seed: Some(1),
            instances: Instances::Count(3),
            result: Outcome::Fail,
            counterexample: Some(Counterexample {
                input: vec!["1".into(), "2/3".into()],
                lhs: vec!["1".into()],
                rhs: vec!["2".into()],
                line: None,
                note: None,
            }),
            elapsed_ms: None,
        }
    }

    #[test]
    fn json_round_trip_and_key_order() {
        let r = sample_report();
        let text = r.to_json();
        assert_eq!(VerificationReport::from_json(&text).unwrap(), r);
        let keys: Vec<usize> = ["\"equation\"", "\"backend\"", "\"seed\"", "\"instances\"", "\"result\"", "\"counterexample\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(!text.contains("elapsed_ms"));
    }

    #[test]
    fn proved_serializes_as_string() {
        let mut r = sample_report();
        r.instances = Instances::proved();
        r.result = Outcome::Pass;
        r.counterexample = None;
        let text = r.to_json();
        assert!(text.contains("\"instances\": \"proved\""));
        assert!(text.contains("\"result\": \"pass\""));
        assert_eq!(VerificationReport::from_json(&text).unwrap(), r);
    }
}
