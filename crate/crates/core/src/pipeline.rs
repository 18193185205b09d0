//! Census ingestion, check orchestration and deterministic reporting.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eulerclass::{euler_tuple, obstruction_verdict, EulerResult, KnotFacts, ObstructionReport, Verdict};
use crate::knotgroup::{build_representation, two_bridge_presentation, KnotPresentation, MatrixRep, Word};
use crate::mobius::{
    render_pretzel_chain, render_strip_7_4, uniqueness_check_7_4, uniqueness_check_pretzel, UniquenessReport,
};
use crate::numfield::{FieldElement, FieldMatrix, NumberField};
use crate::polycore::RatPoly;
use crate::pretzel::{
    lambda_closed_form, lambda_poly, pretzel_holonomy, psi_root_census, relator_factorization_check, tangency_chain,
};
use crate::slopes::{slope_set_for_knot, CaseDescriptor, SlopeSetResult};

pub const SCHEMA_VERSION: u32 = 1;

/// The census shipped with the library.
pub const BUNDLED_CENSUS: &str = include_str!("../data/census.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("BadCensus(line {line}, {field})")]
    BadCensus { line: usize, field: String },
    #[error("NotARepresentation({name}): {reason}")]
    NotARepresentation { name: String, reason: String },
    #[error("Io({0})")]
    Io(String),
    #[error("UnknownCheck({0})")]
    UnknownCheck(String),
}

/// Where the representation of a census row comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KnotSource {
    /// Riley representation of the two-bridge knot p/q.
    TwoBridge { p: i64, q: i64 },
    /// P(2k+1, 2k+1, 2k+1) with its parabolic holonomy.
    Pretzel { k: u32 },
    /// Generator images written as power-basis coefficient lists in the field generator.
    Explicit {
        generators: Vec<String>,
        relators: Vec<String>,
        meridian: String,
        longitude: String,
        images: Vec<[RatPoly; 4]>,
    },
    /// No representation bundled; only the recorded facts are carried.
    Stub,
}

impl KnotSource {
    fn kind(&self) -> &'static str {
        match self {
            KnotSource::TwoBridge { .. } => "two_bridge",
            KnotSource::Pretzel { .. } => "pretzel",
            KnotSource::Explicit { .. } => "explicit",
            KnotSource::Stub => "stub",
        }
    }
}

/// Regression anchors.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusRow {
    pub name: String,
    #[serde(flatten)]
    pub source: KnotSource,
    /// Minimal polynomial of the field generator, e.g. `x^3-x-1`.
    #[serde(default)]
    pub minpoly: Option<String>,
    #[serde(default)]
    pub genus: Option<u32>,
    #[serde(default)]
    pub fibered: bool,
    #[serde(default)]
    pub known_unique_surface: bool,
    #[serde(default)]
    pub manual_field_flags: Vec<String>,
    #[serde(default)]
    pub slope_cases: Option<Vec<CaseDescriptor>>,
    #[serde(default)]
    pub expected: Expected,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CensusFile {
    schema: u32,
    knots: Vec<CensusRow>,
}

/// A census row with its verified representation (absent for stubs).
#[derive(Debug, Clone)]
pub struct KnotRecord {
    pub row: CensusRow,
    pub minpoly: Option<RatPoly>,
    pub rep: Option<MatrixRep>,
}

impl KnotRecord {
    pub fn name(&self) -> &str {
        &self.row.name
    }
}

fn line_of(text: &str, name: &str) -> usize {
    let needle = format!("\"{name}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(0, |i| i + 1)
}

pub fn load_census(path: &Path) -> Result<Vec<KnotRecord>, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
    load_census_str(&text)
}

pub fn load_bundled_census() -> Result<Vec<KnotRecord>, PipelineError> {
    load_census_str(BUNDLED_CENSUS)
}

/// Parses and validates a census, building every representation eagerly.
pub fn load_census_str(text: &str) -> Result<Vec<KnotRecord>, PipelineError> {
    let file: CensusFile =
        serde_json::from_str(text).map_err(|e| PipelineError::BadCensus { line: e.line(), field: e.to_string() })?;
    if file.schema != SCHEMA_VERSION {
        return Err(PipelineError::BadCensus {
            line: line_of(text, "schema"),
            field: format!("schema {}", file.schema),
        });
    }
    let raw: serde_json::Value = serde_json::from_str(text).expect("already parsed");
    for (row, value) in file.knots.iter().zip(raw["knots"].as_array().into_iter().flatten()) {
        let allowed = row_keys(&row.source);
        if let Some(key) = value.as_object().into_iter().flat_map(|o| o.keys()).find(|k| !allowed.contains(&k.as_str()))
        {
            return Err(PipelineError::BadCensus {
                line: line_of(text, &row.name),
                field: format!("unknown field {key}"),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for row in &file.knots {
        if !seen.insert(row.name.clone()) {
            return Err(PipelineError::BadCensus {
                line: line_of(text, &row.name),
                field: format!("duplicate name {}", row.name),
            });
        }
    }
    file.knots
        .into_par_iter()
        .map(|row| {
            let line = line_of(text, &row.name);
            load_row(row, line)
        })
        .collect()
}

fn row_keys(source: &KnotSource) -> Vec<&'static str> {
    let mut keys = vec![
        "name",
        "kind",
        "minpoly",
        "genus",
        "fibered",
        "known_unique_surface",
        "manual_field_flags",
        "slope_cases",
        "expected",
    ];
    keys.extend_from_slice(match source {
        KnotSource::TwoBridge { .. } => &["p", "q"][..],
        KnotSource::Pretzel { .. } => &["k"],
        KnotSource::Explicit { .. } => &["generators", "relators", "meridian", "longitude", "images"],
        KnotSource::Stub => &[],
    });
    keys
}

fn load_row(row: CensusRow, line: usize) -> Result<KnotRecord, PipelineError> {
    let bad = |field: &str| PipelineError::BadCensus { line, field: field.to_string() };
    let not_rep = |reason: String| PipelineError::NotARepresentation { name: row.name.clone(), reason };
    let minpoly = match &row.minpoly {
        Some(s) => Some(s.parse::<RatPoly>().map_err(|_| bad("minpoly"))?),
        None => None,
    };
    if minpoly.as_ref().is_some_and(|m| m.degree().unwrap_or(0) < 1) {
        return Err(bad("minpoly"));
    }
    let rep = match &row.source {
        KnotSource::Stub => None,
        KnotSource::TwoBridge { p, q } => {
            let minpoly = minpoly.as_ref().ok_or_else(|| bad("minpoly"))?;
            let mut pres = two_bridge_presentation(*p, *q).map_err(|e| not_rep(e.to_string()))?;
            annotate(&mut pres, &row);
            Some(build_representation(&pres, minpoly).map_err(|e| not_rep(e.to_string()))?)
        }
        KnotSource::Pretzel { k } => {
            if *k == 0 {
                return Err(bad("k"));
            }
            if minpoly.as_ref().is_some_and(|m| m.monic() != lambda_poly(*k)) {
                return Err(not_rep(format!("minpoly differs from the pretzel polynomial for k = {k}")));
            }
            let mut data = pretzel_holonomy(*k).map_err(|e| not_rep(e.to_string()))?;
            annotate(&mut data.rep.presentation, &row);
            Some(data.rep)
        }
        KnotSource::Explicit { generators, relators, meridian, longitude, images } => {
            let minpoly = minpoly.as_ref().ok_or_else(|| bad("minpoly"))?;
            Some(explicit_rep(&row, generators, relators, meridian, longitude, images, minpoly).map_err(
                |e| match e {
                    ExplicitError::Parse(f) => bad(&f),
                    ExplicitError::Rep(r) => not_rep(r),
                },
            )?)
        }
    };
    Ok(KnotRecord { row, minpoly, rep })
}

fn annotate(pres: &mut KnotPresentation, row: &CensusRow) {
    pres.name = row.name.clone();
    if row.genus.is_some() {
        pres.genus = row.genus;
    }
    pres.fibered = Some(row.fibered);
}

enum ExplicitError {
    Parse(String),
    Rep(String),
}

fn explicit_rep(
    row: &CensusRow,
    generators: &[String],
    relators: &[String],
    meridian: &str,
    longitude: &str,
    images: &[[RatPoly; 4]],
    minpoly: &RatPoly,
) -> Result<MatrixRep, ExplicitError> {
    let names: Vec<&str> = generators.iter().map(String::as_str).collect();
    let word = |s: &str, field: &str| Word::parse(s, &names).map_err(|_| ExplicitError::Parse(field.to_string()));
    let pres = KnotPresentation {
        name: row.name.clone(),
        generator_names: generators.to_vec(),
        relators: relators.iter().map(|r| word(r, "relators")).collect::<Result<_, _>>()?,
        meridian: word(meridian, "meridian")?,
        longitude: word(longitude, "longitude")?,
        genus: row.genus,
        fibered: Some(row.fibered),
        two_bridge: None,
    };
    let field = NumberField::new(row.name.clone(), minpoly.clone()).map_err(|e| ExplicitError::Rep(e.to_string()))?;
    let images = images
        .iter()
        .map(|[a, b, c, d]| {
            let e = |p: &RatPoly| FieldElement::from_poly(&field, p);
            FieldMatrix::new(e(a), e(b), e(c), e(d))
        })
        .collect();
    MatrixRep::new(pres, field, images).map_err(|e| ExplicitError::Rep(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Slopes,
    Euler,
    Pretzel,
    Uniqueness,
    Render,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Slopes, Check::Euler, Check::Pretzel, Check::Uniqueness, Check::Render];
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Slopes => "slopes",
            Check::Euler => "euler",
            Check::Pretzel => "pretzel",
            Check::Uniqueness => "uniqueness",
            Check::Render => "render",
        })
    }
}

impl FromStr for Check {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, PipelineError> {
        Check::ALL
            .into_iter()
            .find(|c| c.to_string() == s.trim())
            .ok_or_else(|| PipelineError::UnknownCheck(s.to_string()))
    }
}

/// Comma-separated check list; `all` selects everything and the empty string nothing.
pub fn parse_checks(s: &str) -> Result<BTreeSet<Check>, PipelineError> {
    if s.trim() == "all" {
        return Ok(Check::ALL.into_iter().collect());
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone)]
pub struct RunFlags {
    pub precision_bits: u64,
    /// Directory receiving SVG files from the render check; rendering is only validated when absent.
    pub render_dir: Option<PathBuf>,
}

impl Default for RunFlags {
    fn default() -> Self {
        RunFlags { precision_bits: 128, render_dir: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorCheck {
    pub anchor: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PretzelSummary {
    pub k: u32,
    pub checks: Vec<(String, bool)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RenderSummary {
    pub config: String,
    pub bytes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KnotReport {
    pub knot: String,
    pub kind: String,
    /// "ok", "skipped" or "error".
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slopes: Option<SlopeSetResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<Vec<EulerResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pretzel: Option<PretzelSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub render: Option<RenderSummary>,
    pub anchors: Vec<AnchorCheck>,
    pub errors: Vec<String>,
}

impl KnotReport {
    fn new(rec: &KnotRecord) -> Self {
        KnotReport {
            knot: rec.row.name.clone(),
            kind: rec.row.source.kind().to_string(),
            status: "ok".to_string(),
            note: None,
            slopes: None,
            euler: None,
            obstruction: None,
            pretzel: None,
            uniqueness: None,
            render: None,
            anchors: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn anchors_ok(&self) -> bool {
        self.anchors.iter().all(|a| a.ok)
    }

    fn anchor(&mut self, name: &str, expected: String, actual: String) {
        let ok = expected == actual;
        self.anchors.push(AnchorCheck { anchor: name.to_string(), expected, actual, ok });
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub checks: Vec<Check>,
    pub precision_bits: u64,
    pub knots: Vec<KnotReport>,
    /// One line per anchor mismatch or hard error, in census order.
    pub failures: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(!self.success())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn knot(&self, name: &str) -> Option<&KnotReport> {
        self.knots.iter().find(|k| k.knot == name)
    }
}

fn display<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn render_config(rec: &KnotRecord) -> Option<&'static str> {
    match rec.row.source {
        KnotSource::Pretzel { .. } => Some("pretzel-chain"),
        KnotSource::TwoBridge { p: 15, q: 11 } => Some("74-strip"),
        _ => None,
    }
}

pub fn render_knot(rec: &KnotRecord, config: &str) -> Result<String, String> {
    match (config, &rec.row.source) {
        ("pretzel-chain", KnotSource::Pretzel { k }) => render_pretzel_chain(*k).map_err(|e| e.to_string()),
        ("74-strip", KnotSource::TwoBridge { p: 15, q: 11 }) => render_strip_7_4().map_err(|e| e.to_string()),
        _ => Err(format!("configuration {config} does not apply to {}", rec.row.name)),
    }
}

fn run_knot(rec: &KnotRecord, checks: &BTreeSet<Check>, flags: &RunFlags) -> KnotReport {
    let mut out = KnotReport::new(rec);
    let Some(rep) = &rec.rep else {
        out.status = "skipped".to_string();
        out.note = Some("no representation bundled".to_string());
        return out;
    };
    let row = &rec.row;
    if checks.contains(&Check::Slopes) {
        if let Some(cases) = &row.slope_cases {
            match slope_set_for_knot(rep, cases, &row.manual_field_flags) {
                Ok(res) => {
                    if let Some(exp) = &row.expected.slopes {
                        let exp: BTreeSet<String> = exp.iter().cloned().collect();
                        let got: BTreeSet<String> = res.slopes.iter().map(|s| s.to_string()).collect();
                        out.anchor("slopes", display(&exp), display(&got));
                    }
                    out.slopes = Some(res);
                }
                Err(e) => out.errors.push(format!("slopes: {e}")),
            }
        }
    }
    if checks.contains(&Check::Euler) {
        match euler_tuple(rep, flags.precision_bits) {
            Ok(res) => {
                let tuple: Vec<i64> = res.iter().map(|r| r.n).collect();
                if let Some(exp) = &row.expected.euler {
                    out.anchor("euler", display(exp), display(&tuple));
                }
                let facts =
                    KnotFacts::from_rep(rep, row.genus, row.fibered, row.known_unique_surface, &row.manual_field_flags);
                match obstruction_verdict(&facts, &tuple) {
                    Ok(v) => {
                        if let Some(exp) = &row.expected.obstruction {
                            out.anchor("obstruction", display(exp), display(&v.obstruction));
                        }
                        if let Some(exp) = &row.expected.verdict {
                            out.anchor("verdict", display(exp), display(&v.verdict));
                        }
                        out.obstruction = Some(v);
                    }
                    Err(e) => out.errors.push(format!("verdict: {e}")),
                }
                out.euler = Some(res);
            }
            Err(e) => out.errors.push(format!("euler: {e}")),
        }
    }
    if let KnotSource::Pretzel { k } = row.source {
        if checks.contains(&Check::Pretzel) {
            out.pretzel = Some(pretzel_summary(k, flags.precision_bits.max(256)));
        }
        if checks.contains(&Check::Uniqueness) {
            match uniqueness_check_pretzel(k) {
                Ok(u) => out.uniqueness = Some(u),
                Err(e) => out.errors.push(format!("uniqueness: {e}")),
            }
        }
    } else if checks.contains(&Check::Uniqueness) && render_config(rec) == Some("74-strip") {
        match uniqueness_check_7_4() {
            Ok(u) => out.uniqueness = Some(u),
            Err(e) => out.errors.push(format!("uniqueness: {e}")),
        }
    }
    if checks.contains(&Check::Render) {
        if let Some(config) = render_config(rec) {
            match render_knot(rec, config) {
                Ok(svg) => {
                    let mut path = None;
                    if let Some(dir) = &flags.render_dir {
                        let file = dir.join(format!("{}-{config}.svg", row.name));
                        match std::fs::write(&file, &svg) {
                            Ok(()) => path = Some(file.display().to_string()),
                            Err(e) => out.errors.push(format!("render: {}: {e}", file.display())),
                        }
                    }
                    out.render = Some(RenderSummary { config: config.to_string(), bytes: svg.len(), path });
                }
                Err(e) => out.errors.push(format!("render: {e}")),
            }
        }
    }
    if !out.errors.is_empty() {
        out.status = "error".to_string();
    }
    out
}

fn pretzel_summary(k: u32, precision_bits: u64) -> PretzelSummary {
    let mut checks =
        vec![("lambda recursion matches closed form".to_string(), lambda_poly(k) == lambda_closed_form(k))];
    let mut push = |name: &str, r: Result<bool, String>| match r {
        Ok(ok) => checks.push((name.to_string(), ok)),
        Err(e) => checks.push((format!("{name}: {e}"), false)),
    };
    push(
        "relators factor through the pretzel polynomial",
        relator_factorization_check(k).map(|r| r.all_hold()).map_err(|e| e.to_string()),
    );
    push(
        "psi root census",
        psi_root_census(k, precision_bits).map(|c| c.matches_expected()).map_err(|e| e.to_string()),
    );
    push("tangency chain", tangency_chain(k).map(|c| c.checks.iter().all(|x| x.1)).map_err(|e| e.to_string()));
    PretzelSummary { k, checks }
}

/// Runs the selected checks over every record. Knots fan out over the rayon pool and the
/// report keeps census order.
pub fn run(census: &[KnotRecord], checks: &BTreeSet<Check>, flags: &RunFlags) -> RunReport {
    let start = Instant::now();
    let knots: Vec<KnotReport> = if checks.is_empty() {
        Vec::new()
    } else {
        census.par_iter().map(|rec| run_knot(rec, checks, flags)).collect()
    };
    let mut failures = Vec::new();
    for k in &knots {
        for e in &k.errors {
            failures.push(format!("{}: {e}", k.knot));
        }
        for a in k.anchors.iter().filter(|a| !a.ok) {
            failures.push(format!("{}: {} expected {} got {}", k.knot, a.anchor, a.expected, a.actual));
        }
        if let Some(p) = &k.pretzel {
            for (name, _) in p.checks.iter().filter(|c| !c.1) {
                failures.push(format!("{}: pretzel check failed: {name}", k.knot));
            }
        }
    }
    RunReport {
        schema: SCHEMA_VERSION,
        checks: checks.iter().copied().collect(),
        precision_bits: flags.precision_bits,
        knots,
        failures,
        elapsed: start.elapsed(),
    }
}
