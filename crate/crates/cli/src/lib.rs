//! Commands behind the `filicheck` binary and the reports they produce.
//!
//! Every command returns a [`Report`]: one object with a `schema_version`,
//! rendered either as JSON or as plain text.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use serde::Serialize;

use filicheck_core::catalog::{builtin, catalog_keys, verify_entry, EntryCheck, Expected, Property};
use filicheck_core::cohomology::verify_coboundary_identity;
use filicheck_core::format::parse;
use filicheck_core::nilpotent::{characteristic_sequence, is_filiform, lower_central_series};
use filicheck_core::sampling::DEFAULT_SEED;
use filicheck_core::structures::{
    exact_invariant_verdict, is_bi_invariant_cs, is_invariant_cs, numeric_invariant_search, solve_bi_invariant,
    Certificate, Exhaustion, NumericOptions, Status, Verdict,
};
use filicheck_core::{EndoMap, Error, LieAlgebra};

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "FILICHECK_SEED";

pub mod exit {
    pub const OK: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const INVALID: u8 = 3;
    pub const UNKNOWN: u8 = 4;
    pub const ODD_DIMENSION: u8 = 5;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Bi,
    Invariant,
}

#[derive(Debug, PartialEq)]
pub enum CliError {
    /// Unreadable file, unknown key, bad flag value.
    Input(String),
    Parse(String),
    Invalid(String),
    OddDimension(usize),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Parse(_) => exit::PARSE,
            CliError::Invalid(_) => exit::INVALID,
            CliError::OddDimension(_) => exit::ODD_DIMENSION,
            CliError::Internal(_) => exit::MISMATCH,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid Lie algebra: {m}"),
            CliError::OddDimension(n) => write!(f, "odd dimension {n}: no complex structure is possible"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::OddDimension(n) => CliError::OddDimension(n),
            Error::InvalidArgument(_) | Error::UnknownKey(_) => CliError::Input(e.to_string()),
            Error::InvalidAlgebra(m) => CliError::Invalid(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Flag, then environment, then the built-in default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    let Some(raw) = env else { return Ok(DEFAULT_SEED) };
    let raw = raw.trim();
    let parsed = match raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => raw.parse(),
    };
    parsed.map_err(|_| CliError::Input(format!("{SEED_ENV}={raw} is not an unsigned 64-bit integer")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputId {
    pub kind: &'static str,
    pub name: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: Option<InputId>,
    pub seed: u64,
    pub analyses: Vec<&'static str>,
    pub results: Results,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Analyze(AnalyzeResults),
    Search(SearchResults),
    Catalog(CatalogResults),
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeResults {
    pub dim: usize,
    pub field: String,
    pub labels: Vec<String>,
    pub valid: bool,
    pub series_dims: Vec<usize>,
    pub nilpotent: bool,
    pub filiform: bool,
    pub char_sequence: Option<Vec<usize>>,
    pub characteristic_vector: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericParams {
    pub restarts: usize,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResults {
    pub mode: Mode,
    pub dim: usize,
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub witness: Option<EndoMap>,
    pub witness_reverified: Option<bool>,
    /// `δJ = μ_J` for the witness.
    pub coboundary_identity: Option<bool>,
    pub numeric: Option<NumericParams>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogResults {
    pub all_passed: bool,
    pub passed: usize,
    pub total: usize,
    pub entries: Vec<EntryCheck>,
}

impl Report {
    fn new(command: &'static str, input: Option<InputId>, seed: u64, analyses: Vec<&'static str>, results: Results) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "filicheck",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input,
            seed,
            analyses,
            results,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match &self.results {
            Results::Search(s) if s.status == Status::Unknown => exit::UNKNOWN,
            Results::Catalog(c) if !c.all_passed => exit::MISMATCH,
            _ => exit::OK,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(input) = &self.input {
            let _ = writeln!(out, "input: {} {}", input.kind, input.name);
        }
        match &self.results {
            Results::Analyze(a) => render_analyze(&mut out, a),
            Results::Search(s) => render_search(&mut out, s),
            Results::Catalog(c) => render_catalog(&mut out, c),
        }
        out
    }
}

fn tuple(parts: &[usize]) -> String {
    let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn render_analyze(out: &mut String, a: &AnalyzeResults) {
    let _ = writeln!(out, "dimension: {} over {}", a.dim, a.field);
    let _ = writeln!(out, "valid: {}", a.valid);
    let _ = writeln!(out, "lower central series: {}", tuple(&a.series_dims));
    let _ = writeln!(out, "nilpotent: {}", a.nilpotent);
    let _ = writeln!(out, "filiform: {}", a.filiform);
    if let Some(c) = &a.char_sequence {
        let _ = writeln!(out, "characteristic sequence: {}", tuple(c));
    }
    if let Some(x) = &a.characteristic_vector {
        let _ = writeln!(out, "characteristic vector: ({})", x.join(", "));
    }
}

pub fn describe_certificate(c: &Certificate) -> String {
    match c {
        Certificate::FiliformTheorem => "FiliformTheorem (filiform algebras admit no invariant structure)".into(),
        Certificate::PairingObstruction { sequence } => {
            format!("PairingObstruction (characteristic sequence {} does not pair up)", tuple(sequence))
        }
        Certificate::CommutantExhausted(Exhaustion::OddInvariantSubspace { source, dim }) => {
            format!("CommutantExhausted ({source} of odd dimension {dim} is stable under the commutant)")
        }
        Certificate::CommutantExhausted(Exhaustion::OddRealBlock { residue_degree, multiplicity }) => format!(
            "CommutantExhausted (real simple factor of degree {residue_degree} with odd multiplicity {multiplicity})"
        ),
        Certificate::ExplicitWitness => "ExplicitWitness".into(),
        Certificate::ResidualFloor { min_residual, restarts, below_tolerance } => format!(
            "ResidualFloor (minimum residual {min_residual:e} over {restarts} restarts{})",
            if *below_tolerance { ", below tolerance but not certified" } else { "" }
        ),
    }
}

fn render_search(out: &mut String, s: &SearchResults) {
    let mode = match s.mode {
        Mode::Bi => "bi-invariant",
        Mode::Invariant => "invariant",
    };
    let _ = writeln!(out, "mode: {mode}");
    let _ = writeln!(out, "status: {}", s.status);
    if let Some(c) = &s.certificate {
        let _ = writeln!(out, "certificate: {}", describe_certificate(c));
    }
    if let Some(w) = &s.witness {
        let _ = writeln!(out, "witness (columns are images of basis vectors):");
        for row in w.to_string_rows() {
            let _ = writeln!(out, "  [{}]", row.join(" "));
        }
    }
    if let Some(ok) = s.witness_reverified {
        let _ = writeln!(out, "witness re-verified: {ok}");
    }
    if let Some(ok) = s.coboundary_identity {
        let _ = writeln!(out, "coboundary identity: {ok}");
    }
}

fn render_catalog(out: &mut String, c: &CatalogResults) {
    for e in &c.entries {
        if e.passed {
            let _ = writeln!(out, "ok       {}", e.key);
        } else {
            let _ = writeln!(out, "MISMATCH {}", e.key);
            for m in &e.mismatches {
                let _ = writeln!(out, "  - {}: expected {}", m.property, m.expected);
                let _ = writeln!(out, "  + {}: actual   {}", m.property, m.actual);
            }
        }
    }
    let _ = writeln!(out, "{}/{} entries pass", c.passed, c.total);
}

fn load(source: &Source) -> Result<(InputId, LieAlgebra), CliError> {
    let (id, alg) = match source {
        Source::Builtin(key) => {
            let entry = builtin(key).map_err(|e| CliError::Input(e.to_string()))?;
            (InputId { kind: "builtin", name: entry.key }, entry.algebra)
        }
        Source::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let alg = parse(&text).map_err(|e| {
                let msg = format!("{}: {e}", path.display());
                if e.is_jacobi_failure() {
                    CliError::Invalid(msg)
                } else {
                    CliError::Parse(msg)
                }
            })?;
            (InputId { kind: "file", name: path.display().to_string() }, alg)
        }
    };
    let report = alg.validate();
    if !alg.is_valid() {
        return Err(CliError::Invalid(format!("{}: {report:?}", id.name)));
    }
    Ok((id, alg))
}

pub fn cmd_analyze(source: &Source, seed: u64) -> Result<Report, CliError> {
    let (input, alg) = load(source)?;
    let series = lower_central_series(&alg);
    let nilpotent = series.is_nilpotent();
    let mut analyses = vec!["validate", "lower_central_series", "is_filiform"];
    let (char_sequence, characteristic_vector) = if nilpotent {
        analyses.push("characteristic_sequence");
        let (c, x) = characteristic_sequence(&alg)?;
        (Some(c.parts().to_vec()), Some(x.iter().map(ToString::to_string).collect()))
    } else {
        (None, None)
    };
    let results = AnalyzeResults {
        dim: alg.dim(),
        field: alg.field().to_string(),
        labels: alg.labels().to_vec(),
        valid: true,
        series_dims: series.dims,
        nilpotent,
        filiform: is_filiform(&alg),
        char_sequence,
        characteristic_vector,
    };
    Ok(Report::new("analyze", Some(input), seed, analyses, Results::Analyze(results)))
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub mode: Mode,
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
}

pub fn cmd_search(source: &Source, opts: &SearchOptions) -> Result<Report, CliError> {
    if !(opts.tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {}", opts.tol)));
    }
    if opts.restarts == 0 {
        return Err(CliError::Input("--restarts must be at least 1".into()));
    }
    let (input, alg) = load(source)?;
    if alg.dim() % 2 != 0 {
        return Err(CliError::OddDimension(alg.dim()));
    }
    let mut analyses = vec!["validate", "obstructions"];
    let mut numeric = None;
    let verdict: Verdict = match opts.mode {
        Mode::Bi => {
            analyses.push("bi_invariant_solver");
            solve_bi_invariant(&alg)?
        }
        Mode::Invariant => {
            analyses.push("exact_checks");
            let exact = exact_invariant_verdict(&alg)?;
            if exact.is_decided() {
                exact
            } else {
                analyses.push("numeric_search");
                numeric = Some(NumericParams { restarts: opts.restarts, tol: opts.tol });
                let options =
                    NumericOptions { restarts: opts.restarts, tol: opts.tol, seed: opts.seed, ..Default::default() };
                numeric_invariant_search(&alg, &options)?
            }
        }
    };
    let (witness_reverified, coboundary_identity) = match &verdict.witness {
        Some(j) => {
            let ok = match opts.mode {
                Mode::Bi => is_bi_invariant_cs(&alg, j)?,
                Mode::Invariant => is_invariant_cs(&alg, j)?,
            };
            let identity = if ok { Some(verify_coboundary_identity(&alg, j)?) } else { None };
            (Some(ok), identity)
        }
        None => (None, None),
    };
    let results = SearchResults {
        mode: opts.mode,
        dim: alg.dim(),
        status: verdict.status,
        certificate: verdict.certificate,
        witness: verdict.witness,
        witness_reverified,
        coboundary_identity,
        numeric,
    };
    Ok(Report::new("search", Some(input), opts.seed, analyses, Results::Search(results)))
}

/// Replacement expectation `key property value`, one per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Override {
    pub key: String,
    pub property: Property,
    pub value: Expected,
}

fn parse_property(s: &str) -> Option<Property> {
    use Property::*;
    [Valid, Nilpotent, Filiform, SeriesDims, CharSequence, BiInvariant, Invariant]
        .into_iter()
        .find(|p| p.to_string() == s)
}

fn parse_expected(s: &str) -> Option<Expected> {
    match s {
        "true" => return Some(Expected::Bool(true)),
        "false" => return Some(Expected::Bool(false)),
        "Exists" => return Some(Expected::Status(Status::Exists)),
        "NotExists" => return Some(Expected::Status(Status::NotExists)),
        "Unknown" => return Some(Expected::Status(Status::Unknown)),
        _ => {}
    }
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    inner.split(',').map(|p| p.trim().parse().ok()).collect::<Option<Vec<usize>>>().map(Expected::Dims)
}

/// Reads override lines; `#` starts a comment.
pub fn parse_overrides(text: &str) -> Result<Vec<Override>, CliError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || CliError::Parse(format!("override line {}: expected `key property value`, got `{line}`", no + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [key, property, value] = fields[..] else { return Err(bad()) };
        out.push(Override {
            key: key.to_string(),
            property: parse_property(property).ok_or_else(bad)?,
            value: parse_expected(value).ok_or_else(bad)?,
        });
    }
    Ok(out)
}

pub fn cmd_verify_catalog(seed: u64, overrides: &[Override]) -> Result<Report, CliError> {
    let mut keys = catalog_keys();
    for o in overrides {
        if !keys.contains(&o.key) {
            keys.push(o.key.clone());
        }
    }
    let mut entries = Vec::with_capacity(keys.len());
    for key in &keys {
        let mut entry = builtin(key).map_err(|e| CliError::Input(e.to_string()))?;
        for o in overrides.iter().filter(|o| &o.key == key) {
            entry.expected.insert(o.property, o.value.clone());
        }
        entries.push(verify_entry(&entry));
    }
    let passed = entries.iter().filter(|e| e.passed).count();
    let results =
        CatalogResults { all_passed: passed == entries.len(), passed, total: entries.len(), entries };
    Ok(Report::new("verify-catalog", None, seed, vec!["recompute_expectations"], Results::Catalog(results)))
}
