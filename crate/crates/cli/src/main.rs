//! Batch front end over the invariant library: generate state files,
//! analyze them, decide rank-2 separability, and sweep local-unitary
//! invariance. Every command is deterministic in (input, flags, seed), and
//! JSON comes out canonically formatted so runs can be byte-compared.
//!
//! Exit codes are a contract: 0 ok/separable, 1 input error, 3 entangled,
//! 4 indeterminate, 5 invariance drift.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use luinv::{
    bipartition_invariants, char_poly_coeffs, concurrence_multipartite, entanglement_of_formation,
    invariance_suite, invariant_vector, make_named, ppt_check, random_state, resolve_separability,
    schmidt_spectrum, to_canonical_json, tol, tripartite_invariants, DegeneracyKind, NamedKind,
    PureMultipartiteState, RankTwoMixedState, Resolution, StateJson, Violation,
};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_ENTANGLED: u8 = 3;
const EXIT_INDETERMINATE: u8 = 4;
const EXIT_DRIFT: u8 = 5;

#[derive(Parser)]
#[command(
    name = "luinv",
    version,
    about = "Invariants, concurrence, spectra, and separability for multipartite pure states"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a named or seeded-random state file
    Gen {
        /// Which state family to produce
        #[arg(long, value_enum)]
        kind: Kind,
        /// Local dimension N
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Party count M; defaults to the kind's natural count
        #[arg(long)]
        m: Option<usize>,
        /// Seed for `random`; ignored by the named kinds
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report invariants and entanglement quantities of a state file
    Analyze {
        /// State file to read
        input: PathBuf,
        /// Comma-separated sections; defaults to all that apply
        #[arg(long, value_delimiter = ',', value_enum)]
        what: Vec<What>,
        #[arg(long, value_enum, default_value_t = Fmt::Json)]
        format: Fmt,
    },
    /// Decide separability of a rank-2 mixed state file
    Sepcheck {
        /// File with fields p, E1, E2
        input: PathBuf,
        /// Also run the partial-transpose test and record agreement
        #[arg(long)]
        with_ppt: bool,
        #[arg(long, value_enum, default_value_t = Fmt::Json)]
        format: Fmt,
    },
    /// Sweep Haar-random local unitaries and report per-quantity drift
    Lutest {
        /// State file to read
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Fmt::Json)]
        format: Fmt,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Product,
    MaxEntangled,
    Bell,
    Ghz,
    BellPlus,
    Random,
}

impl Kind {
    fn default_parties(self) -> usize {
        match self {
            Kind::Ghz | Kind::BellPlus => 3,
            _ => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Kind::Product => "product",
            Kind::MaxEntangled => "max-entangled",
            Kind::Bell => "bell",
            Kind::Ghz => "ghz",
            Kind::BellPlus => "bell-plus",
            Kind::Random => "random",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Invariants,
    Concurrence,
    Schmidt,
    Eof,
    Charpoly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

/// Input-side failure: reported as a structured object on stderr, exit 1.
struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn params(message: impl Into<String>) -> Self {
        Self {
            kind: "params",
            message: message.into(),
        }
    }

    fn object(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

impl From<luinv::Error> for CliError {
    fn from(e: luinv::Error) -> Self {
        Self {
            kind: "validate",
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprint!("{}", to_canonical_json(&err.object()));
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Gen {
            kind,
            n,
            m,
            seed,
            out,
        } => cmd_gen(kind, n, m.unwrap_or(kind.default_parties()), seed, out),
        Cmd::Analyze {
            input,
            what,
            format,
        } => cmd_analyze(&input, &what, format),
        Cmd::Sepcheck {
            input,
            with_ppt,
            format,
        } => cmd_sepcheck(&input, with_ppt, format),
        Cmd::Lutest {
            input,
            trials,
            seed,
            format,
        } => cmd_lutest(&input, trials, seed, format),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError {
        kind: "io",
        message: format!("{}: {e}", path.display()),
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError {
        kind: "parse",
        message: format!("{}: {e}", path.display()),
    })
}

fn load_state(path: &Path) -> Result<(PureMultipartiteState, Option<String>), CliError> {
    let file: StateJson = parse_json(path, &read_file(path)?)?;
    let state = file.to_state()?;
    Ok((state, file.label))
}

fn emit(report: &Value, format: Fmt) {
    match format {
        Fmt::Json => print!("{}", to_canonical_json(report)),
        Fmt::Text => print!("{}", render_text(report)),
    }
}

// ---- gen ----

fn cmd_gen(
    kind: Kind,
    n: usize,
    m: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<u8, CliError> {
    let state = match kind {
        Kind::Random => random_state(m, n, seed)?,
        Kind::Product => make_named(NamedKind::Product, n, m)?,
        Kind::MaxEntangled => make_named(NamedKind::MaxEntangled, n, m)?,
        Kind::Bell => make_named(NamedKind::Bell, n, m)?,
        Kind::Ghz => make_named(NamedKind::Ghz, n, m)?,
        Kind::BellPlus => make_named(NamedKind::BellPlus, n, m)?,
    };
    let text = to_canonical_json(&StateJson::from_state(&state, Some(kind.label().to_string())));
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| CliError {
            kind: "io",
            message: format!("{}: {e}", path.display()),
        })?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

// ---- analyze ----

fn cmd_analyze(input: &Path, what: &[What], format: Fmt) -> Result<u8, CliError> {
    let (state, label) = load_state(input)?;
    let parties = state.parties();

    let sections: Vec<What> = if what.is_empty() {
        if parties == 2 {
            vec![
                What::Invariants,
                What::Concurrence,
                What::Schmidt,
                What::Eof,
                What::Charpoly,
            ]
        } else {
            vec![What::Invariants, What::Concurrence]
        }
    } else {
        for w in what {
            let bipartite_only = matches!(w, What::Schmidt | What::Eof | What::Charpoly);
            if bipartite_only && parties != 2 {
                return Err(CliError::params(format!(
                    "section {} needs a two-party state, file has {parties} parties",
                    w.to_possible_value().unwrap().get_name()
                )));
            }
        }
        what.to_vec()
    };

    let mut report = Map::new();
    report.insert("parties".into(), json!(parties));
    report.insert("dim".into(), json!(state.dim()));
    if let Some(l) = label {
        report.insert("label".into(), json!(l));
    }

    for section in &sections {
        match section {
            What::Invariants => {
                if parties == 2 {
                    let vec = invariant_vector(&state.to_bipartite()?)?;
                    report.insert("invariants".into(), json!(vec.values()));
                }
                if parties == 3 {
                    let t = tripartite_invariants(&state)?;
                    report.insert(
                        "tripartite_invariants".into(),
                        json!({ "I_1": t.i1, "I_2": t.i2, "I_3": t.i3 }),
                    );
                }
                let mut purities = Map::new();
                for (part, value) in bipartition_invariants(&state)? {
                    purities.insert(part.label(), json!(value));
                }
                report.insert("bipartition_invariants".into(), Value::Object(purities));
            }
            What::Concurrence => {
                let rep = concurrence_multipartite(&state)?;
                report.insert(
                    "concurrence".into(),
                    json!({
                        "value": rep.value,
                        "route_invariant": rep.route_invariant,
                        "route_minors": rep.route_minors,
                        "discrepancy": rep.discrepancy,
                    }),
                );
            }
            What::Schmidt => {
                let spec = schmidt_spectrum(&state.to_bipartite()?)?;
                report.insert("schmidt".into(), json!(spec.values()));
            }
            What::Eof => {
                let spec = schmidt_spectrum(&state.to_bipartite()?)?;
                report.insert("eof".into(), json!(entanglement_of_formation(&spec)));
            }
            What::Charpoly => {
                let vec = invariant_vector(&state.to_bipartite()?)?;
                let coeffs = char_poly_coeffs(&vec);
                let mut obj = Map::new();
                for (k, value) in coeffs.entries() {
                    obj.insert(format!("c_{k}"), json!(value));
                }
                report.insert("charpoly".into(), Value::Object(obj));
            }
        }
    }

    emit(&Value::Object(report), format);
    Ok(EXIT_OK)
}

// ---- sepcheck ----

/// On-disk form of a rank-2 mixture: weight and the two eigenvectors as
/// embedded two-party state objects.
#[derive(Debug, Serialize, Deserialize)]
struct RankTwoFile {
    p: f64,
    #[serde(rename = "E1")]
    e1: StateJson,
    #[serde(rename = "E2")]
    e2: StateJson,
}

fn violation_name(v: Violation) -> &'static str {
    match v {
        Violation::None => "none",
        Violation::ThetaNonexistent => "theta_nonexistent",
        Violation::ProportionalityFailed => "proportionality_failed",
        Violation::RootConditionFailed => "root_condition_failed",
        Violation::DegenerateAlpha => "degenerate_alpha",
    }
}

fn degeneracy_name(d: DegeneracyKind) -> &'static str {
    match d {
        DegeneracyKind::Alpha => "alpha",
        DegeneracyKind::Roots => "roots",
    }
}

fn cmd_sepcheck(input: &Path, with_ppt: bool, format: Fmt) -> Result<u8, CliError> {
    let file: RankTwoFile = parse_json(input, &read_file(input)?)?;
    let e1 = file.e1.to_state()?.to_bipartite()?;
    let e2 = file.e2.to_state()?.to_bipartite()?;
    let rho = RankTwoMixedState::new(file.p, e1, e2)?;

    let resolution = resolve_separability(&rho)?;
    let mut report = Map::new();
    let exit = match &resolution {
        Resolution::Criterion(verdict) => {
            report.insert("resolution".into(), json!("criterion"));
            report.insert("separable".into(), json!(verdict.separable));
            report.insert("theta".into(), json!(verdict.theta));
            report.insert("mixing_value".into(), json!(verdict.mixing_value));
            report.insert("violated".into(), json!(violation_name(verdict.violated)));
            if with_ppt {
                let ppt = ppt_check(&rho)?;
                report.insert(
                    "ppt_agrees".into(),
                    json!(ppt.is_ppt == verdict.separable),
                );
                report.insert(
                    "ppt".into(),
                    json!({ "is_ppt": ppt.is_ppt, "min_eigenvalue": ppt.min_eigenvalue }),
                );
            }
            if verdict.separable {
                EXIT_OK
            } else {
                EXIT_ENTANGLED
            }
        }
        Resolution::PptFallback {
            reason,
            ppt,
            separable,
        } => {
            report.insert("resolution".into(), json!("ppt_fallback"));
            report.insert("separable".into(), json!(separable));
            report.insert("degeneracy".into(), json!(degeneracy_name(*reason)));
            report.insert(
                "ppt".into(),
                json!({ "is_ppt": ppt.is_ppt, "min_eigenvalue": ppt.min_eigenvalue }),
            );
            if *separable {
                EXIT_OK
            } else {
                EXIT_ENTANGLED
            }
        }
        Resolution::Indeterminate { reason } => {
            report.insert("resolution".into(), json!("indeterminate"));
            report.insert("separable".into(), Value::Null);
            report.insert("degeneracy".into(), json!(degeneracy_name(*reason)));
            if with_ppt {
                let ppt = ppt_check(&rho)?;
                report.insert(
                    "ppt".into(),
                    json!({ "is_ppt": ppt.is_ppt, "min_eigenvalue": ppt.min_eigenvalue }),
                );
            }
            EXIT_INDETERMINATE
        }
    };

    emit(&Value::Object(report), format);
    Ok(exit)
}

// ---- lutest ----

fn cmd_lutest(input: &Path, trials: u64, seed: u64, format: Fmt) -> Result<u8, CliError> {
    let (state, _) = load_state(input)?;
    let suite = invariance_suite(&state, trials, seed)?;
    let within = suite.within(tol::DRIFT_TOL);

    let quantities: Vec<Value> = suite
        .quantities
        .iter()
        .map(|q| {
            json!({
                "label": q.label,
                "baseline": q.baseline,
                "max_drift": q.max_drift,
            })
        })
        .collect();
    let report = json!({
        "trials": suite.trials,
        "seed": seed,
        "tolerance": tol::DRIFT_TOL,
        "max_drift": suite.max_drift(),
        "within_tolerance": within,
        "quantities": quantities,
    });

    emit(&report, format);
    Ok(if within { EXIT_OK } else { EXIT_DRIFT })
}

// ---- text rendering ----

/// Flattens the report into aligned `path value` rows; nested keys join
/// with dots, array elements index with brackets.
fn render_text(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 2;
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}{v}\n"));
    }
    out
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, rows);
            }
        }
        Value::Array(arr) => {
            for (i, v) in arr.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, rows);
            }
        }
        leaf => rows.push((prefix.to_string(), leaf_text(leaf))),
    }
}

fn leaf_text(value: &Value) -> String {
    match value {
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap()),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
