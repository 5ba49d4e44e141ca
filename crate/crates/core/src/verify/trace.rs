//! Replays a line-by-line derivation: every line must denote the same map.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::catalog::Catalog;
use crate::kernel::{infer_signature, CompositeExpr, MapBindings, State};
use crate::scalar::SlotDomain;

use super::instances::{sample_states, BoxEnumeration};
use super::{Backend, Counterexample, Instances, Outcome, VerificationReport, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Appendix {
    /// The homogeneous derivation, for `3dr`.
    A,
    /// The super derivation, for `3dm`, `3dn` and `3dr-crystal`.
    B,
}

impl Appendix {
    pub fn file_name(self) -> &'static str {
        match self {
            Appendix::A => "appendix_a.dsl",
            Appendix::B => "appendix_b.dsl",
        }
    }

    /// The data file shipped with the crate.
    pub fn embedded(self) -> &'static str {
        match self {
            Appendix::A => include_str!("../../data/appendix_a.dsl"),
            Appendix::B => include_str!("../../data/appendix_b.dsl"),
        }
    }
}

impl fmt::Display for Appendix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Appendix::A => "A",
            Appendix::B => "B",
        })
    }
}

/// A parsed derivation file.
///
/// Format: `#` starts a comment; `@signature l1 l2 ...` fixes the slot order;
/// `@bind S=map-id ...` binds map symbols; every other non-blank line is one
/// composite.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixData {
    pub labels: Vec<String>,
    pub bindings: BTreeMap<String, String>,
    /// `(file line, composite)`.
    pub lines: Vec<(usize, CompositeExpr)>,
}

impl AppendixData {
    pub fn parse(text: &str, origin: &str) -> Result<Self, VerifyError> {
        let err = |line: usize, msg: String| VerifyError::Parse {
            file: origin.to_string(),
            line,
            msg,
        };
        let mut labels = None;
        let mut bindings = BTreeMap::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("@signature") {
                labels = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else if let Some(rest) = content.strip_prefix("@bind") {
                for b in rest.split_whitespace() {
                    let (sym, id) = b
                        .split_once('=')
                        .ok_or_else(|| err(n, format!("binding `{b}` is not of the form SYMBOL=map-id")))?;
                    bindings.insert(sym.to_string(), id.to_string());
                }
            } else if content.starts_with('@') {
                return Err(err(n, format!("unknown directive `{content}`")));
            } else {
                let expr = CompositeExpr::parse(content).map_err(|e| err(n, e.to_string()))?;
                lines.push((n, expr));
            }
        }
        let labels = labels.ok_or_else(|| err(1, "missing @signature".into()))?;
        if lines.is_empty() {
            return Err(err(text.lines().count().max(1), "no composite lines".into()));
        }
        Ok(AppendixData { labels, bindings, lines })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineResult {
    /// 1-based position among the composite lines.
    pub line: usize,
    pub file_line: usize,
    /// Agrees with the first line on every instance.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub report: VerificationReport,
    pub lines: Vec<LineResult>,
}

/// Evaluates every line of `data` on the backend's instance set and compares
/// it with the first line. The counterexample names the first line (in file
/// order) that differs at the first failing instance.
pub fn trace_appendix(
    name: &str,
    data: &AppendixData,
    catalog: &Catalog,
    backend: &Backend,
) -> Result<TraceReport, VerifyError> {
    let start = Instant::now();
    let maps = data
        .bindings
        .iter()
        .map(|(s, id)| Ok((s.clone(), catalog.map(id)?)))
        .collect::<Result<MapBindings, VerifyError>>()?;
    let exprs: Vec<&CompositeExpr> = data.lines.iter().map(|(_, e)| e).collect();
    let signature = infer_signature(&data.labels, &exprs, &maps).map_err(|e| VerifyError::Parse {
        file: name.to_string(),
        line: data.lines[0].0,
        msg: e.to_string(),
    })?;
    let bound = data
        .lines
        .iter()
        .map(|(n, e)| {
            e.bind(&signature, &maps).map_err(|err| VerifyError::Parse {
                file: name.to_string(),
                line: *n,
                msg: err.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let domains: Vec<SlotDomain> = signature.domains().collect();
    let states: Vec<State> = match backend {
        Backend::Sample { count, seed, int_bound } => sample_states(&domains, *count, *seed, *int_bound)
            .into_iter()
            .map(State::new)
            .collect(),
        Backend::Exhaustive { int_bound, ceiling } => {
            BoxEnumeration::new(&domains, *int_bound, *ceiling)?.iter().map(State::new).collect()
        }
        Backend::Symbolic { .. } => {
            return Err(VerifyError::BackendIncompatible {
                backend: backend.to_string(),
                reason: "traces are replayed on concrete states".into(),
            })
        }
    };
    // per state: outputs of every line, or the failure to evaluate
    let results: Vec<Vec<Result<State, String>>> = states
        .par_iter()
        .map(|x| bound.iter().map(|b| b.eval(x).map_err(|e| e.to_string())).collect())
        .collect();
    let mut ok = vec![true; bound.len()];
    let mut cex = None;
    for (x, outs) in states.iter().zip(&results) {
        for k in 1..outs.len() {
            let same = matches!((&outs[0], &outs[k]), (Ok(a), Ok(b)) if a == b);
            if !same {
                ok[k] = false;
                if cex.is_none() {
                    let show = |r: &Result<State, String>| match r {
                        Ok(s) => s.to_strings(),
                        Err(_) => Vec::new(),
                    };
                    let note = [&outs[0], &outs[k]].iter().find_map(|r| r.as_ref().err().cloned());
                    cex = Some(Counterexample {
                        input: x.to_strings(),
                        lhs: show(&outs[0]),
                        rhs: show(&outs[k]),
                        line: Some(k + 1),
                        note: Some(match note {
                            Some(e) => format!("file line {}: evaluation failed: {e}", data.lines[k].0),
                            None => format!("file line {}", data.lines[k].0),
                        }),
                    });
                }
            }
        }
    }
    let lines = data
        .lines
        .iter()
        .enumerate()
        .map(|(k, (n, _))| LineResult {
            line: k + 1,
            file_line: *n,
            passed: ok[k],
        })
        .collect();
    Ok(TraceReport {
        report: VerificationReport {
            equation: format!("trace({name})"),
            backend: backend.to_string(),
            seed: backend.seed(),
            instances: Instances::Count(states.len() as u64),
            result: if cex.is_some() { Outcome::Fail } else { Outcome::Pass },
            counterexample: cex,
            elapsed_ms: Some(start.elapsed().as_millis() as u64),
        },
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_files_parse() {
        for a in [Appendix::A, Appendix::B] {
            let d = AppendixData::parse(a.embedded(), a.file_name()).unwrap();
            assert_eq!(d.lines.len(), 27);
            assert!(d.lines.iter().all(|(_, e)| e.len() == 20));
            assert_eq!(d.labels.len(), 15);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "@signature 1 2 3\n# c\nR[1,2,3]\nR[1,2\n";
        match AppendixData::parse(text, "x.dsl") {
            Err(VerifyError::Parse { file, line, .. }) => {
                assert_eq!(file, "x.dsl");
                assert_eq!(line, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            AppendixData::parse("R[1,2,3]\n", "y.dsl"),
            Err(VerifyError::Parse { .. })
        ));
    }

    #[test]
    fn short_trace_a() {
        let a = Appendix::A;
        let d = AppendixData::parse(a.embedded(), a.file_name()).unwrap();
        let t = trace_appendix("A", &d, &Catalog::new(), &Backend::sample(3, 1)).unwrap();
        assert!(t.report.passed(), "{}", t.report.to_human());
        assert!(t.lines.iter().all(|l| l.passed));
    }
}
