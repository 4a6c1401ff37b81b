//! Experiment configs, figure presets and result emission.
//!
//! A config is a TOML document with five sections:
//!
//! ```toml
//! [model]
//! kind = "1d"               # or "2d"
//! L = [6, 8, 10, 12]        # 1d: one length or a list
//! range = "aa"              # "nn", "aa", "half", an integer, or a list
//!
//! [sweep]
//! units = "J_over_Jc"       # "native", "JL_over_delta" (2d), "J_over_Jc" (1d)
//! log = { from = 0.01, to = 100.0, points = 9 }   # or values = [...]
//!
//! [ensemble]
//! realizations = 10
//! base_seed = 7
//!
//! [measures]
//! names = ["S1", "Shalf"]
//! scope = { pn = "central" }
//!
//! [output]
//! directory = "results"
//! formats = ["csv", "json"]
//! ```
//!
//! Lists of `L` and `range` expand into one sweep per combination.

mod emit;
mod presets;

pub use emit::{emit, FailureNote, RunMetadata};
pub use presets::{preset, PRESET_NAMES};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ensemble::{run_sweep, CouplingUnits, Measure, MeasureSpec, ResultTable, Scope, SweepPlan};
use crate::error::{ConfigErrors, ConfigIssue, Error, Result};
use crate::hamiltonian::{Model1d, Model2d, ModelSpec};
use crate::spectral::{BandRule, Unfolding};

/// A scalar or a list of scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// Interaction range of the chain, symbolic or explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeSpec {
    /// `l_c = 1`.
    Nn,
    /// `l_c = L − 1`.
    Aa,
    /// `l_c = L / 2`.
    Half,
    Fixed(usize),
}

impl RangeSpec {
    pub fn resolve(self, len: usize) -> usize {
        match self {
            RangeSpec::Nn => 1,
            RangeSpec::Aa => len.saturating_sub(1),
            RangeSpec::Half => len / 2,
            RangeSpec::Fixed(n) => n,
        }
    }
}

impl Serialize for RangeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RangeSpec::Nn => s.serialize_str("nn"),
            RangeSpec::Aa => s.serialize_str("aa"),
            RangeSpec::Half => s.serialize_str("half"),
            RangeSpec::Fixed(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for RangeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(RangeSpec::Fixed(n as usize)),
            Raw::Name(s) => match s.as_str() {
                "nn" => Ok(RangeSpec::Nn),
                "aa" => Ok(RangeSpec::Aa),
                "half" => Ok(RangeSpec::Half),
                other => Err(serde::de::Error::custom(format!(
                    "unknown range '{other}', expected \"nn\", \"aa\", \"half\" or an integer"
                ))),
            },
        }
    }
}

fn default_lattice() -> usize {
    3
}
fn default_mean_splitting() -> f64 {
    1.0
}
fn default_spread() -> f64 {
    0.09
}
fn default_len() -> OneOrMany<usize> {
    OneOrMany::One(12)
}
fn default_gradient() -> f64 {
    1.0
}
fn default_rabi() -> f64 {
    100.0
}
fn default_range() -> OneOrMany<RangeSpec> {
    OneOrMany::One(RangeSpec::Aa)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ModelBlock {
    #[serde(rename = "2d")]
    TwoD {
        #[serde(default = "default_lattice")]
        lx: usize,
        #[serde(default = "default_lattice")]
        ly: usize,
        #[serde(default = "default_mean_splitting")]
        mean_splitting: f64,
        #[serde(default = "default_spread")]
        splitting_spread: f64,
    },
    #[serde(rename = "1d")]
    OneD {
        #[serde(rename = "L", default = "default_len")]
        len: OneOrMany<usize>,
        #[serde(default = "default_gradient")]
        gradient: f64,
        #[serde(default = "default_rabi")]
        rabi: f64,
        #[serde(default = "default_range")]
        range: OneOrMany<RangeSpec>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGrid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let (a, b) = (self.from.ln(), self.to.ln());
        (0..self.points)
            .map(|k| (a + (b - a) * k as f64 / (self.points - 1) as f64).exp())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    #[serde(default)]
    pub units: CouplingUnits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log: Option<LogGrid>,
}

impl SweepBlock {
    pub fn grid(&self) -> Vec<f64> {
        match (&self.values, &self.log) {
            (Some(v), _) => v.clone(),
            (None, Some(l)) => l.values(),
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleBlock {
    /// Defaults to 200 for the lattice and 10 for the chain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizations: Option<usize>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_spacing_bin() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasuresBlock {
    pub names: Vec<Measure>,
    /// Per-measure scope overrides keyed by measure name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scope: BTreeMap<String, Scope>,
    /// Bands by number of up spins; empty selects the default band.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bands: Vec<usize>,
    #[serde(default)]
    pub band_rule: BandRule,
    #[serde(default)]
    pub unfolding: Unfolding,
    #[serde(default = "default_spacing_bin")]
    pub spacing_bin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn default_directory() -> String {
    "results".into()
}
fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            formats: default_formats(),
        }
    }
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelBlock,
    pub sweep: SweepBlock,
    #[serde(default)]
    pub ensemble: EnsembleBlock,
    pub measures: MeasuresBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

impl ExperimentConfig {
    pub fn realizations(&self) -> usize {
        self.ensemble.realizations.unwrap_or(match self.model {
            ModelBlock::TwoD { .. } => 200,
            ModelBlock::OneD { .. } => 10,
        })
    }

    fn measure_specs(&self) -> Vec<MeasureSpec> {
        self.measures
            .names
            .iter()
            .map(|&m| match self.measures.scope.get(&m.to_string()) {
                Some(&scope) => MeasureSpec::scoped(m, scope),
                None => MeasureSpec::new(m),
            })
            .collect()
    }

    fn models(&self) -> Vec<ModelSpec> {
        match &self.model {
            &ModelBlock::TwoD {
                lx,
                ly,
                mean_splitting,
                splitting_spread,
            } => vec![ModelSpec::TwoD(Model2d {
                lx,
                ly,
                mean_splitting,
                splitting_spread,
                coupling: 0.0,
            })],
            ModelBlock::OneD {
                len,
                gradient,
                rabi,
                range,
            } => {
                let mut out = Vec::new();
                for l in len.to_vec() {
                    for r in range.to_vec() {
                        out.push(ModelSpec::OneD(Model1d {
                            len: l,
                            gradient: *gradient,
                            rabi: *rabi,
                            coupling: 0.0,
                            range: r.resolve(l),
                        }));
                    }
                }
                out
            }
        }
    }

    /// One sweep plan per `(L, range)` combination.
    pub fn plans(&self) -> Vec<SweepPlan> {
        self.models()
            .into_iter()
            .map(|model| {
                let mut plan = SweepPlan::new(model, self.sweep.grid(), self.sweep.units);
                plan.realizations = self.realizations();
                plan.base_seed = self.ensemble.base_seed;
                plan.workers = self.ensemble.workers;
                plan.measures = self.measure_specs();
                plan.bands = self.measures.bands.clone();
                plan.band_rule = self.measures.band_rule;
                plan.unfolding = self.measures.unfolding;
                plan.spacing_bin = self.measures.spacing_bin;
                plan
            })
            .collect()
    }

    /// TOML text that parses back to an identical config.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Validation(format!("cannot serialize config: {e}")))
    }

    /// Checks every constraint and reports all violations at once.
    pub fn validate(&self, text: Option<&str>) -> Result<()> {
        let at = |section: &str, key: &str| text.and_then(|t| locate(t, section, key));
        let mut issues = Vec::new();
        macro_rules! push {
            ($line:expr, $($msg:tt)+) => {
                issues.push(ConfigIssue { line: $line, message: $($msg)+ })
            };
        }

        match &self.model {
            ModelBlock::OneD { len, range, .. } => {
                let lens = len.to_vec();
                if lens.is_empty() {
                    push!(at("model", "L"), "L list is empty".into());
                }
                if range.to_vec().is_empty() {
                    push!(at("model", "range"), "range list is empty".into());
                }
                for l in &lens {
                    if *l < 2 {
                        push!(at("model", "L"), format!("chain length L = {l} must be at least 2"));
                    }
                    for r in range.to_vec() {
                        let lc = r.resolve(*l);
                        if *l >= 2 && (lc < 1 || lc >= *l) {
                            push!(
                                at("model", "range"),
                                format!("interaction range l_c = {lc} must satisfy 1 <= l_c <= L - 1 = {}", l - 1),
                            );
                        }
                    }
                }
            }
            ModelBlock::TwoD { lx, ly, .. } => {
                if *lx == 0 || *ly == 0 {
                    push!(at("model", "lx").or(at("model", "ly")), "lattice dimensions must be positive".into());
                }
            }
        }

        match (&self.sweep.values, &self.sweep.log) {
            (Some(_), Some(_)) => push!(at("sweep", "log"), "give either values or log, not both".into()),
            (None, None) => push!(at("sweep", "values").or(at("sweep", "log")), "sweep grid is missing: give values or log".into()),
            (None, Some(g)) => {
                if !(g.from > 0.0 && g.to > 0.0 && g.points >= 1) {
                    push!(at("sweep", "log"), "log grid needs positive bounds and at least one point".into());
                }
            }
            (Some(v), None) => {
                if v.is_empty() {
                    push!(at("sweep", "values"), "sweep grid is empty".into());
                }
                if v.iter().any(|j| !(*j >= 0.0) || !j.is_finite()) {
                    push!(at("sweep", "values"), "couplings must be finite and non-negative".into());
                }
            }
        }
        let units_ok = matches!(
            (self.sweep.units, &self.model),
            (CouplingUnits::Native, _)
                | (CouplingUnits::JlOverDelta, ModelBlock::TwoD { .. })
                | (CouplingUnits::JOverJc, ModelBlock::OneD { .. })
        );
        if !units_ok {
            push!(
                at("sweep", "units"),
                format!("units {} do not apply to this model", self.sweep.units.label()),
            );
        }

        if self.realizations() == 0 {
            push!(at("ensemble", "realizations"), "at least one realization is required".into());
        }
        if self.ensemble.workers == Some(0) {
            push!(at("ensemble", "workers"), "worker count must be positive".into());
        }
        if self.measures.names.is_empty() {
            push!(at("measures", "names"), "no measures selected".into());
        }
        for key in self.measures.scope.keys() {
            if !self.measures.names.iter().any(|m| m.to_string() == *key) {
                push!(at("measures", "scope"), format!("scope given for unselected measure '{key}'"));
            }
        }
        if self.output.formats.is_empty() {
            push!(at("output", "formats"), "no output formats selected".into());
        }

        if issues.is_empty() {
            for plan in self.plans() {
                if let Err(e) = plan.validate() {
                    let message = match e {
                        Error::Argument(m) | Error::Capacity(m) | Error::Validation(m) => m,
                        other => other.to_string(),
                    };
                    push!(None, message);
                }
            }
        }

        if issues.is_empty() {
            Ok(())
        } else {
            issues.dedup();
            Err(Error::Config(ConfigErrors(issues)))
        }
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_toml() {
            Ok(s) => f.write_str(&s),
            Err(_) => Err(fmt::Error),
        }
    }
}

/// 1-based line of `key` inside `[section]`.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        if current == section {
            if let Some((k, _)) = t.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Unknown-field errors point at the enclosing table; find the key inside it.
fn unknown_key_line(text: &str, span: &std::ops::Range<usize>, message: &str) -> Option<usize> {
    let key = message.strip_prefix("unknown field `")?.split('`').next()?;
    let mut offset = span.start.min(text.len());
    for (i, line) in text[offset..].split_inclusive('\n').enumerate() {
        let t = line.trim();
        if i > 0 && t.starts_with('[') {
            break;
        }
        if t.split_once('=').is_some_and(|(k, _)| k.trim() == key) {
            return Some(line_of(text, offset));
        }
        offset += line.len();
    }
    None
}

/// Parses and validates a config, reporting every problem with its line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let message = e.message().trim().to_string();
        let line = e.span().map(|span| unknown_key_line(text, &span, &message).unwrap_or(line_of(text, span.start)));
        Error::Config(ConfigErrors(vec![ConfigIssue { line, message }]))
    })?;
    config.validate(Some(text))?;
    Ok(config)
}

/// Runs every sweep of `config` and writes the results to `out`.
///
/// Returns the combined table and the paths written.
pub fn run_experiment(
    config: &ExperimentConfig,
    out: impl AsRef<std::path::Path>,
    dump_eigenvalues: Option<&std::path::Path>,
) -> Result<(ResultTable, Vec<std::path::PathBuf>)> {
    config.validate(None)?;
    let start = std::time::Instant::now();
    let mut table = ResultTable::default();
    for mut plan in config.plans() {
        plan.dump_eigenvalues = dump_eigenvalues.map(|p| p.to_path_buf());
        table.extend(run_sweep(&plan)?);
    }
    let meta = RunMetadata::new(config, start.elapsed().as_secs_f64(), &table.failures);
    let written = emit(&table, &meta, out)?;
    Ok((table, written))
}

/// Reads and parses a config file.
pub fn load_config(path: impl AsRef<std::path::Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
