//! Command-line front end.
//!
//! Exit status: 0 when every check passes, 1 when one fails, 2 on usage
//! errors and on checks that could not be decided (e.g. budget exceeded).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CatalogError, SUPER_T};
use crate::kernel::{numbered_labels, CompositeExpr, KernelError, LocalMap, MapBindings, Param, Signature, State};
use crate::scalar::{parse_rational, SlotDomain};
use crate::verify::{
    check_boundarization, check_equation, is_boundarizable, trace_appendix, Appendix, AppendixData, Backend,
    VerificationReport, VerifyError, DEFAULT_CEILING, DEFAULT_TERM_BUDGET,
};

#[derive(Debug, Parser)]
#[command(name = "tetrabound", version, about = "Tetrahedron maps, their boundarization, and exact checks of the identities they satisfy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a registered equation.
    Verify {
        /// Equation id, e.g. `te`, `tre`, `tre-super`.
        id: String,
        /// Rebind a map symbol, e.g. `--map R=3dr-vec`.
        #[arg(long = "map", value_name = "SYMBOL=ID")]
        maps: Vec<String>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Boundarize a tetrahedron map: evaluate at a point, compare with a
    /// closed form, or (by default) check the boundarizable condition.
    Boundarize {
        /// Map id with arity 3, or `super-T`.
        id: String,
        /// Evaluate the boundarization at this point.
        #[arg(long, value_name = "X1,X2,X3,X4")]
        point: Option<String>,
        /// Compare the boundarization with this registered map.
        #[arg(long = "match", value_name = "ID")]
        match_id: Option<String>,
        #[command(flatten)]
        opts: CheckOpts,
    },
    /// Evaluate a composite expression on a state.
    Eval {
        /// Composite, e.g. "R[2,4,5] R[1,3,5]". The rightmost factor acts first.
        expr: String,
        #[arg(long = "map", value_name = "SYMBOL=ID")]
        maps: Vec<String>,
        /// Comma-separated slot values; pairs as `a:b`.
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// Comma-separated slot labels (default 1, 2, ..., n).
        #[arg(long)]
        labels: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Replay an appendix derivation, comparing every line with the first.
    Trace {
        which: AppendixArg,
        /// Read the derivation from this file instead of the built-in copy.
        #[arg(long)]
        data: Option<PathBuf>,
        #[command(flatten)]
        opts: CheckOpts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AppendixArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Symbolic,
    Sample,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Clone, Args)]
pub struct CheckOpts {
    /// Default: symbolic for a symbolic lambda, sample for rational slots,
    /// exhaustive for integer and bit slots.
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Upper bound for integer slots (exhaustive and sample backends).
    #[arg(long)]
    pub bound: Option<u64>,
    /// Exact rational, or `symbolic`. Default 1.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Cap on polynomial terms for the symbolic backend.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Include wall time in the output.
    #[arg(long)]
    pub timing: bool,
}

/// Everything a command can print in structured form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Output {
    Report(VerificationReport),
    Trace {
        report: VerificationReport,
        lines: Vec<TraceLine>,
    },
    Evaluation {
        input: Vec<String>,
        output: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub line: usize,
    pub file_line: usize,
    pub passed: bool,
}

impl Output {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("output serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn passed(&self) -> bool {
        match self {
            Output::Report(r) | Output::Trace { report: r, .. } => r.passed(),
            Output::Evaluation { .. } => true,
        }
    }

    fn to_human(&self) -> String {
        match self {
            Output::Report(r) => r.to_human(),
            Output::Trace { report, lines } => {
                let mut s = String::new();
                for l in lines {
                    let mark = if l.passed { "ok" } else { "DIFFERS" };
                    s.push_str(&format!("line {:>2} (file line {:>3})  {mark}\n", l.line, l.file_line));
                }
                s.push_str(&report.to_human());
                s
            }
            Output::Evaluation { output, .. } => format!("{}\n", output.join(", ")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn parse_lambda(text: Option<&str>) -> Result<Param, CliError> {
    match text {
        None => Ok(Param::Value(BigRational::one())),
        Some("symbolic") => Ok(Param::Symbolic("lambda".into())),
        Some(t) => {
            let q = parse_rational(t).map_err(|e| CliError::Usage(format!("--lambda: {e}")))?;
            if q.is_negative() {
                return Err(CliError::Usage("--lambda must be nonnegative".into()));
            }
            Ok(Param::Value(q))
        }
    }
}

fn parse_bindings(specs: &[String]) -> Result<Vec<(String, String)>, CliError> {
    specs
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| CliError::Usage(format!("--map expects SYMBOL=ID, got `{s}`")))
        })
        .collect()
}

fn default_bound(slots: usize) -> u64 {
    match slots {
        0..=6 => 8,
        7..=9 => 4,
        _ => 2,
    }
}

/// Picks the backend for a check on `domains` with maps whose parameters are `params`.
fn select_backend(opts: &CheckOpts, domains: &[SlotDomain], symbolic_param: bool) -> Result<Backend, CliError> {
    let discrete = domains.iter().any(|d| d.is_discrete());
    let kind = match opts.backend {
        Some(k) => k,
        None if symbolic_param => BackendKind::Symbolic,
        None if opts.samples.is_some() => BackendKind::Sample,
        None if discrete => BackendKind::Exhaustive,
        None => BackendKind::Sample,
    };
    if opts.samples == Some(0) {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    Ok(match kind {
        BackendKind::Symbolic => Backend::Symbolic {
            term_budget: Some(opts.budget.unwrap_or(DEFAULT_TERM_BUDGET)),
        },
        BackendKind::Sample => Backend::Sample {
            count: opts.samples.unwrap_or(200),
            seed: opts.seed.unwrap_or(0),
            int_bound: opts.bound.unwrap_or(crate::verify::DEFAULT_SAMPLE_INT_BOUND),
        },
        BackendKind::Exhaustive => Backend::Exhaustive {
            int_bound: opts.bound.unwrap_or_else(|| default_bound(domains.len())),
            ceiling: DEFAULT_CEILING,
        },
    })
}

fn has_symbolic_param<'a>(maps: impl IntoIterator<Item = &'a LocalMap>) -> bool {
    maps.into_iter().any(|m| matches!(m.param(), Some(Param::Symbolic(_))))
}

fn finish(report: VerificationReport, timing: bool) -> Output {
    Output::Report(if timing { report } else { report.without_timing() })
}

fn cmd_verify(id: &str, maps: &[String], opts: &CheckOpts) -> Result<Output, CliError> {
    let catalog = Catalog::with_lambda(parse_lambda(opts.lambda.as_deref())?);
    let mut spec = catalog.equation(id)?;
    for (sym, map) in parse_bindings(maps)? {
        if !spec.bindings.contains_key(&sym) {
            return Err(CliError::Usage(format!(
                "equation `{id}` has no map symbol `{sym}`; symbols: {}",
                spec.bindings.keys().cloned().collect::<Vec<_>>().join(", ")
            )));
        }
        spec = spec.with_binding(&sym, &map);
    }
    let eq = spec.resolve(&catalog)?;
    let domains: Vec<SlotDomain> = eq.signature.domains().collect();
    let backend = select_backend(opts, &domains, has_symbolic_param(eq.maps.values()))?;
    Ok(finish(check_equation(&eq, &backend)?, opts.timing))
}

fn cmd_boundarize(id: &str, point: Option<&str>, match_id: Option<&str>, opts: &CheckOpts) -> Result<Output, CliError> {
    let catalog = Catalog::with_lambda(parse_lambda(opts.lambda.as_deref())?);
    if id != SUPER_T && catalog.entry(id).is_err() {
        return Err(CliError::Usage(format!(
            "unknown tetrahedron map `{id}`; known: {}",
            catalog.tetrahedral_ids().join(", ")
        )));
    }
    let t = catalog.tetrahedral(id)?;
    let folded = t.folded_domains()?;
    if let Some(p) = point {
        let j = crate::kernel::boundarize(&t, format!("J[{id}]"))?;
        let sig = Signature::new(numbered_labels(4).into_iter().zip(folded))?;
        let x = sig.parse_state(p)?;
        let y = State::new(j.apply(x.values())?);
        return Ok(Output::Evaluation {
            input: x.to_strings(),
            output: y.to_strings(),
        });
    }
    let sym = has_symbolic_param(t.maps().values());
    let backend = select_backend(opts, &folded, sym)?;
    let report = match match_id {
        Some(m) => check_boundarization(&t, &catalog.map(m)?, &backend)?,
        None => is_boundarizable(&t, &backend)?,
    };
    Ok(finish(report, opts.timing))
}

fn guess_domain(text: &str) -> SlotDomain {
    if text.contains(':') {
        SlotDomain::PosRationalPair
    } else if text.contains('/') {
        SlotDomain::PosRational
    } else {
        SlotDomain::NonNegInt
    }
}

fn cmd_eval(expr: &str, maps: &[String], state: &str, labels: Option<&str>, lambda: Option<&str>) -> Result<Output, CliError> {
    let catalog = Catalog::with_lambda(parse_lambda(lambda)?);
    let expr = CompositeExpr::parse(expr)?;
    let mut bound = MapBindings::new();
    for (sym, id) in parse_bindings(maps)? {
        bound.insert(sym, catalog.map(&id)?);
    }
    let parts: Vec<&str> = if state.trim().is_empty() { Vec::new() } else { state.split(',').collect() };
    let labels: Vec<String> = match labels {
        Some(l) => l.split(',').map(|s| s.trim().to_string()).collect(),
        None => numbered_labels(parts.len()),
    };
    if labels.len() != parts.len() {
        return Err(CliError::Usage(format!("{} labels for {} values", labels.len(), parts.len())));
    }
    // domains come from the factors touching each slot, else from the value's shape
    let mut domains: Vec<Option<SlotDomain>> = vec![None; labels.len()];
    for f in &expr.factors {
        let map = bound.get(&f.map).ok_or_else(|| KernelError::UnknownMap(f.map.clone()))?;
        if map.arity() != f.labels.len() {
            return Err(KernelError::ArityMismatch {
                map: f.map.clone(),
                expected: map.arity(),
                found: f.labels.len(),
            }
            .into());
        }
        for (a, l) in f.labels.iter().enumerate() {
            let p = labels.iter().position(|x| x == l).ok_or_else(|| KernelError::UnknownLabel(l.clone()))?;
            let d = map.domains()[a];
            match domains[p] {
                Some(prev) if prev != d => {
                    return Err(KernelError::DomainConflict {
                        label: l.clone(),
                        first: prev,
                        second: d,
                    }
                    .into())
                }
                _ => domains[p] = Some(d),
            }
        }
    }
    let sig = Signature::new(
        labels
            .iter()
            .zip(&domains)
            .zip(&parts)
            .map(|((l, d), p)| (l.clone(), d.unwrap_or_else(|| guess_domain(p)))),
    )?;
    let x = sig.parse_state(state)?;
    let y = expr.bind(&sig, &bound)?.eval(&x)?;
    Ok(Output::Evaluation {
        input: x.to_strings(),
        output: y.to_strings(),
    })
}

fn cmd_trace(which: AppendixArg, data: Option<&PathBuf>, opts: &CheckOpts) -> Result<Output, CliError> {
    let appendix = match which {
        AppendixArg::A => Appendix::A,
        AppendixArg::B => Appendix::B,
    };
    let (text, origin) = match data {
        Some(p) => (
            std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
            p.display().to_string(),
        ),
        None => (appendix.embedded().to_string(), appendix.file_name().to_string()),
    };
    let parsed = AppendixData::parse(&text, &origin)?;
    let catalog = Catalog::with_lambda(parse_lambda(opts.lambda.as_deref())?);
    let backend = match opts.backend {
        Some(BackendKind::Exhaustive) => Backend::Exhaustive {
            int_bound: opts.bound.unwrap_or(2),
            ceiling: DEFAULT_CEILING,
        },
        Some(BackendKind::Symbolic) => {
            return Err(CliError::Usage("traces run on the sample or exhaustive backend".into()))
        }
        _ => Backend::Sample {
            count: opts.samples.unwrap_or(50),
            seed: opts.seed.unwrap_or(0),
            int_bound: opts.bound.unwrap_or(2),
        },
    };
    let t = trace_appendix(&appendix.to_string(), &parsed, &catalog, &backend)?;
    let report = if opts.timing { t.report } else { t.report.without_timing() };
    Ok(Output::Trace {
        report,
        lines: t
            .lines
            .into_iter()
            .map(|l| TraceLine {
                line: l.line,
                file_line: l.file_line,
                passed: l.passed,
            })
            .collect(),
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let format = match &cli.command {
        Command::Verify { opts, .. } | Command::Boundarize { opts, .. } | Command::Trace { opts, .. } => opts.format,
        Command::Eval { format, .. } => *format,
    };
    let result = match &cli.command {
        Command::Verify { id, maps, opts } => cmd_verify(id, maps, opts),
        Command::Boundarize {
            id,
            point,
            match_id,
            opts,
        } => cmd_boundarize(id, point.as_deref(), match_id.as_deref(), opts),
        Command::Eval {
            expr,
            maps,
            state,
            labels,
            lambda,
            ..
        } => cmd_eval(expr, maps, state, labels.as_deref(), lambda.as_deref()),
        Command::Trace { which, data, opts } => cmd_trace(*which, data.as_ref(), opts),
    };
    match result {
        Ok(output) => {
            let text = match format {
                Format::Human => output.to_human(),
                Format::Structured => format!("{}\n", output.to_json()),
            };
            let _ = out.write_all(text.as_bytes());
            if output.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
