//! Disorder sweeps: build, diagonalize, select bands, measure, aggregate.
//!
//! Work is split into independent `(J, realization)` tasks executed on a
//! rayon pool. Realization `r` draws its disorder from
//! [`realization_seed`]`(base_seed, r)` and the same draw is reused at every
//! `J`, so curves along the grid are correlated the way a physical sample
//! would be. Task outputs are collected in task order, which makes every
//! aggregate independent of scheduling and worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use faer::c64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{self, PairClass};
use crate::eigensolve::{eig_hermitian_with, EigenSystem, SolveHints};
use crate::entanglement::{self, PartialTrace};
use crate::error::{Error, Result};
use crate::hamiltonian::{quarter_turn_gauge, realization_seed, sample_realization, ModelSpec};
use crate::spectral::{self, BandRule, BandSelection, BandSpec, Unfolding};
use crate::stats::{mean_and_stderr, Histogram};

/// Fraction of failed tasks above which a sweep is aborted.
pub const MAX_FAILURE_FRACTION: f64 = 0.10;

/// Unit in which a coupling grid is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CouplingUnits {
    #[default]
    #[serde(rename = "native")]
    Native,
    /// `J L / δ`, 2D model only.
    #[serde(rename = "JL_over_delta")]
    JlOverDelta,
    /// `J / J_c`, 1D family only.
    #[serde(rename = "J_over_Jc")]
    JOverJc,
}

impl CouplingUnits {
    pub fn label(self) -> &'static str {
        match self {
            CouplingUnits::Native => "native",
            CouplingUnits::JlOverDelta => "JL_over_delta",
            CouplingUnits::JOverJc => "J_over_Jc",
        }
    }

    /// Native coupling per grid unit for `model`.
    pub fn scale(self, model: &ModelSpec) -> Result<f64> {
        match (self, model) {
            (CouplingUnits::Native, _) => Ok(1.0),
            (CouplingUnits::JlOverDelta, ModelSpec::TwoD(m)) => Ok(m.coupling_unit()),
            (CouplingUnits::JOverJc, ModelSpec::OneD(m)) => Ok(m.critical_coupling()),
            (u, _) => Err(Error::arg(format!(
                "coupling units {} do not apply to this model",
                u.label()
            ))),
        }
    }
}

/// Which eigenstates of a band a measure is averaged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every eigenstate of the band.
    Band,
    /// Only the band's central eigenfunction.
    Central,
    /// The middle third of the band.
    CentralThird,
}

/// A quantity evaluated per realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    /// Level-statistics parameter `γ` of the band (`gamma`).
    Gamma,
    /// Participation number in the unperturbed basis (`pn`).
    Pn,
    /// Concurrence averaged over pairs at distance `n` (`C<n>`).
    Concurrence(usize),
    /// Concurrence averaged over all pairs (`Ca`).
    ConcurrenceAll,
    /// Single-qubit entropy averaged over qubits (`S1`).
    SingleEntropy,
    /// Entropy of the left block of `n` qubits (`Sn<n>`).
    BlockEntropy(usize),
    /// Half-chain entropy (`Shalf`).
    HalfEntropy,
    /// Mean and distribution of `c_λ` over all pairs (`clambda`).
    Clambda,
    /// Negativity averaged over all pairs (`Na`).
    Negativity,
    /// `C₁` of every eigenstate of the spectrum (`cmap`).
    ConcurrenceMap,
}

impl Measure {
    pub fn default_scope(self) -> Scope {
        Scope::Band
    }

    fn accepts(self, scope: Scope) -> bool {
        !matches!(self, Measure::Gamma | Measure::ConcurrenceMap) || scope == Scope::Band
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Gamma => write!(f, "gamma"),
            Measure::Pn => write!(f, "pn"),
            Measure::Concurrence(n) => write!(f, "C{n}"),
            Measure::ConcurrenceAll => write!(f, "Ca"),
            Measure::SingleEntropy => write!(f, "S1"),
            Measure::BlockEntropy(n) => write!(f, "Sn{n}"),
            Measure::HalfEntropy => write!(f, "Shalf"),
            Measure::Clambda => write!(f, "clambda"),
            Measure::Negativity => write!(f, "Na"),
            Measure::ConcurrenceMap => write!(f, "cmap"),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let number = |rest: &str| -> Result<usize> {
            rest.parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::arg(format!("unknown measure '{s}'")))
        };
        Ok(match s {
            "gamma" => Measure::Gamma,
            "pn" => Measure::Pn,
            "Ca" => Measure::ConcurrenceAll,
            "S1" => Measure::SingleEntropy,
            "Shalf" => Measure::HalfEntropy,
            "clambda" => Measure::Clambda,
            "Na" => Measure::Negativity,
            "cmap" => Measure::ConcurrenceMap,
            _ if s.starts_with("Sn") => Measure::BlockEntropy(number(&s[2..])?),
            _ if s.starts_with('C') => Measure::Concurrence(number(&s[1..])?),
            _ => return Err(Error::arg(format!("unknown measure '{s}'"))),
        })
    }
}

impl Serialize for Measure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A measure together with its averaging scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub measure: Measure,
    pub scope: Scope,
}

impl MeasureSpec {
    pub fn new(measure: Measure) -> Self {
        Self {
            measure,
            scope: measure.default_scope(),
        }
    }

    pub fn scoped(measure: Measure, scope: Scope) -> Self {
        Self { measure, scope }
    }
}

/// Everything needed to run one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    /// Model template; its coupling is overwritten at every grid point.
    pub model: ModelSpec,
    /// Coupling grid in `units`.
    pub couplings: Vec<f64>,
    pub units: CouplingUnits,
    pub realizations: usize,
    pub base_seed: u64,
    pub measures: Vec<MeasureSpec>,
    /// Bands by number of up spins; empty selects the default band.
    pub bands: Vec<usize>,
    pub band_rule: BandRule,
    pub unfolding: Unfolding,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Bin width of the emitted spacing histograms.
    pub spacing_bin: f64,
    /// Directory receiving one eigenvalue CSV per task.
    pub dump_eigenvalues: Option<std::path::PathBuf>,
}

impl SweepPlan {
    pub fn new(model: ModelSpec, couplings: Vec<f64>, units: CouplingUnits) -> Self {
        Self {
            model,
            couplings,
            units,
            realizations: 1,
            base_seed: 0,
            measures: Vec::new(),
            bands: Vec::new(),
            band_rule: BandRule::Count,
            unfolding: Unfolding::default(),
            workers: None,
            spacing_bin: 0.1,
            dump_eigenvalues: None,
        }
    }

    /// Default band: `n_up = L / 2` for the chain, the band centred at
    /// `−Δ₀` (`n_up = ⌊(L − 1) / 2⌋`) for the lattice.
    pub fn default_band(model: &ModelSpec) -> usize {
        match model {
            ModelSpec::OneD(m) => m.len / 2,
            ModelSpec::TwoD(m) => m.n_qubits().saturating_sub(1) / 2,
        }
    }

    pub fn resolved_bands(&self) -> Vec<usize> {
        if self.bands.is_empty() {
            vec![Self::default_band(&self.model)]
        } else {
            self.bands.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let n = self.model.n_qubits();
        if self.realizations == 0 {
            return Err(Error::arg("at least one realization is required"));
        }
        if self.couplings.is_empty() {
            return Err(Error::arg("coupling grid is empty"));
        }
        if self.couplings.iter().any(|j| !(*j >= 0.0) || !j.is_finite()) {
            return Err(Error::arg("couplings must be finite and non-negative"));
        }
        self.units.scale(&self.model)?;
        if self.measures.is_empty() {
            return Err(Error::arg("no measures selected"));
        }
        if !(self.spacing_bin > 0.0) {
            return Err(Error::arg("spacing histogram bin width must be positive"));
        }
        if self.workers == Some(0) {
            return Err(Error::arg("worker count must be positive"));
        }
        for &b in &self.resolved_bands() {
            if b > n {
                return Err(Error::arg(format!("band n_up = {b} exceeds {n} qubits")));
            }
        }
        for spec in &self.measures {
            if !spec.measure.accepts(spec.scope) {
                return Err(Error::arg(format!(
                    "measure {} is only defined over the whole band",
                    spec.measure
                )));
            }
            match spec.measure {
                Measure::Gamma => {
                    if let Some(b) = self.resolved_bands().into_iter().find(|&b| basis::binomial(n, b) < 3) {
                        return Err(Error::arg(format!(
                            "gamma needs at least 3 levels but band n_up = {b} has {}",
                            basis::binomial(n, b)
                        )));
                    }
                }
                Measure::Concurrence(d) => {
                    basis::pairs_at_distance(self.model.geometry(), d)?;
                }
                Measure::BlockEntropy(b) if b >= n => {
                    return Err(Error::arg(format!(
                        "block of {b} qubits is not a proper subset of {n}"
                    )))
                }
                Measure::SingleEntropy
                | Measure::HalfEntropy
                | Measure::ConcurrenceAll
                | Measure::Clambda
                | Measure::Negativity
                | Measure::ConcurrenceMap
                    if n < 2 =>
                {
                    return Err(Error::arg(format!("{} needs at least two qubits", spec.measure)))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Native coupling of every grid point.
    pub fn native_couplings(&self) -> Result<Vec<f64>> {
        let scale = self.units.scale(&self.model)?;
        Ok(self.couplings.iter().map(|x| x * scale).collect())
    }

    fn slot_measures(&self) -> Vec<MeasureSpec> {
        self.measures
            .iter()
            .copied()
            .filter(|m| m.measure != Measure::ConcurrenceMap)
            .collect()
    }

    fn wants_map(&self) -> bool {
        self.measures.iter().any(|m| m.measure == Measure::ConcurrenceMap)
    }
}

/// One aggregated `(measure, J)` value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// Measure label, suffixed with `[n_up=k]` when several bands are swept.
    pub measure: String,
    #[serde(rename = "J")]
    pub coupling: f64,
    #[serde(rename = "J_units")]
    pub units: &'static str,
    pub value: f64,
    pub stderr: f64,
    pub n_samples: usize,
    #[serde(rename = "L")]
    pub n_qubits: usize,
    pub model: String,
    pub l_c: Option<usize>,
    pub seed: u64,
}

/// Pooled distribution at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRecord {
    /// `spacing` or `clambda`.
    pub kind: &'static str,
    pub coupling: f64,
    pub n_up: usize,
    pub n_qubits: usize,
    pub l_c: Option<usize>,
    pub histogram: Histogram,
}

/// Realization-averaged `C₁` of every eigenstate (rows) at every `J` (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct StateMap {
    pub couplings: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// A task that was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskFailure {
    pub coupling: f64,
    pub realization: usize,
    pub message: String,
}

/// Output of [`run_sweep`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub records: Vec<ResultRecord>,
    pub histograms: Vec<HistogramRecord>,
    pub map: Option<StateMap>,
    pub failures: Vec<TaskFailure>,
}

impl ResultTable {
    /// Record for `measure` (its label) at grid value `coupling`.
    pub fn get(&self, measure: &str, coupling: f64) -> Option<&ResultRecord> {
        self.records
            .iter()
            .find(|r| r.measure == measure && r.coupling == coupling)
    }

    /// `(J, value)` series for one measure label.
    pub fn series(&self, measure: &str) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.measure == measure)
            .map(|r| (r.coupling, r.value))
            .collect()
    }

    pub fn histogram(&self, kind: &str, coupling: f64) -> Option<&HistogramRecord> {
        self.histograms
            .iter()
            .find(|h| h.kind == kind && h.coupling == coupling)
    }

    /// Concatenates tables of several variants.
    pub fn extend(&mut self, other: ResultTable) {
        self.records.extend(other.records);
        self.histograms.extend(other.histograms);
        self.failures.extend(other.failures);
        if self.map.is_none() {
            self.map = other.map;
        }
    }
}

/// Per-run constants shared read-only by all tasks.
struct Workspace {
    n_qubits: usize,
    pair_reducers: Vec<PartialTrace>,
    distance_pairs: BTreeMap<usize, Vec<usize>>,
    single: Vec<PartialTrace>,
    blocks: BTreeMap<usize, PartialTrace>,
    gauge: Option<Vec<c64>>,
    parity: Option<Vec<Vec<usize>>>,
}

impl Workspace {
    fn new(plan: &SweepPlan) -> Result<Self> {
        let n = plan.model.n_qubits();
        let geometry = plan.model.geometry();
        let mut classes: Vec<PairClass> = Vec::new();
        let mut single = Vec::new();
        let mut blocks = BTreeMap::new();
        for spec in &plan.measures {
            match spec.measure {
                Measure::Concurrence(d) => classes.push(basis::pairs_at_distance(geometry, d)?),
                Measure::ConcurrenceMap => classes.push(basis::pairs_at_distance(geometry, 1)?),
                Measure::ConcurrenceAll | Measure::Clambda | Measure::Negativity => {
                    classes.push(basis::all_pairs(n))
                }
                Measure::SingleEntropy if single.is_empty() => {
                    single = (0..n).map(|q| PartialTrace::new(n, &[q])).collect::<Result<_>>()?;
                }
                Measure::BlockEntropy(b) => {
                    blocks.insert(b, PartialTrace::new(n, &(0..b).collect::<Vec<_>>())?);
                }
                Measure::HalfEntropy => {
                    blocks.insert(n / 2, PartialTrace::new(n, &(0..n / 2).collect::<Vec<_>>())?);
                }
                _ => {}
            }
        }
        let mut pair_index = BTreeMap::new();
        let mut pair_reducers = Vec::new();
        let mut distance_pairs = BTreeMap::new();
        for class in classes {
            let ids: Vec<usize> = class
                .pairs
                .iter()
                .map(|&p| {
                    *pair_index.entry(p).or_insert_with(|| {
                        pair_reducers.push(PartialTrace::new(n, &[p.0, p.1]));
                        pair_reducers.len() - 1
                    })
                })
                .collect();
            distance_pairs.insert(class.distance, ids);
        }
        let pair_reducers = pair_reducers.into_iter().collect::<Result<Vec<_>>>()?;

        let (gauge, parity) = match plan.model {
            ModelSpec::OneD(m) => (Some(quarter_turn_gauge(m.len)), None),
            ModelSpec::TwoD(_) => {
                let dim = 1usize << n;
                let even = (0..dim).filter(|b| b.count_ones() % 2 == 0).collect();
                let odd = (0..dim).filter(|b| b.count_ones() % 2 == 1).collect();
                (None, Some(vec![even, odd]))
            }
        };
        Ok(Self {
            n_qubits: n,
            pair_reducers,
            distance_pairs,
            single,
            blocks,
            gauge,
            parity,
        })
    }

    fn solve(&self, model: &ModelSpec, seed: u64) -> Result<(EigenSystem, Vec<f64>)> {
        let real = sample_realization(model, seed);
        let h = model.build(&real)?;
        let hints = SolveHints {
            gauge: self.gauge.as_deref(),
            blocks: self.parity.as_deref(),
        };
        let eig = eig_hermitian_with(&h, hints)?;
        Ok((eig, model.unperturbed_energies(&real)))
    }
}

/// Lazily evaluated two-qubit quantities of one eigenstate.
struct PairValues<'a> {
    ws: &'a Workspace,
    state: &'a [c64],
    clambda: Vec<Option<f64>>,
}

impl<'a> PairValues<'a> {
    fn new(ws: &'a Workspace, state: &'a [c64]) -> Self {
        Self {
            ws,
            state,
            clambda: vec![None; ws.pair_reducers.len()],
        }
    }

    fn clambda(&mut self, id: usize) -> Result<f64> {
        if let Some(v) = self.clambda[id] {
            return Ok(v);
        }
        let rho = self.ws.pair_reducers[id].apply(self.state)?;
        let v = entanglement::c_lambda(&rho)?;
        if !(-0.5 - 1e-9..=1.0 + 1e-9).contains(&v) {
            return Err(Error::Validation(format!("c_lambda = {v} outside [-1/2, 1]")));
        }
        self.clambda[id] = Some(v);
        Ok(v)
    }

    fn mean_concurrence(&mut self, distance: usize) -> Result<f64> {
        let ids = &self.ws.distance_pairs[&distance];
        let mut sum = 0.0;
        for &id in ids {
            sum += self.clambda(id)?.max(0.0);
        }
        Ok(sum / ids.len() as f64)
    }
}

/// Per-task outcome: one value per `(band, measure)` slot, plus raw samples
/// for distributions.
#[derive(Debug, Default)]
struct TaskOutput {
    values: Vec<f64>,
    spacings: Vec<Vec<f64>>,
    clambda: Vec<Vec<f64>>,
    map: Vec<f64>,
}

fn scope_states(band: &BandSelection, scope: Scope) -> std::ops::Range<usize> {
    match scope {
        Scope::Band => band.members.clone(),
        Scope::Central => {
            let c = band.central();
            c..c + 1
        }
        Scope::CentralThird => band.central_third(),
    }
}

fn dump_eigenvalues(dir: &std::path::Path, model: &ModelSpec, coupling: f64, realization: usize, values: &[f64]) -> Result<()> {
    let range = model.range().map(|lc| format!("_lc{lc}")).unwrap_or_default();
    let path = dir.join(format!("eigenvalues_L{}{range}_J{coupling:e}_r{realization}.csv", model.n_qubits()));
    let mut text = String::from("E\n");
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

fn run_task(
    plan: &SweepPlan,
    ws: &Workspace,
    bands: &[usize],
    slots: &[MeasureSpec],
    coupling: f64,
    realization: usize,
) -> Result<TaskOutput> {
    let model = plan.model.with_coupling(coupling);
    let (eig, energies) = ws.solve(&model, realization_seed(plan.base_seed, realization as u64))?;
    let n = ws.n_qubits;
    if let Some(dir) = &plan.dump_eigenvalues {
        dump_eigenvalues(dir, &model, coupling, realization, &eig.values)?;
    }
    let mut out = TaskOutput::default();

    for &n_up in bands {
        let spec = BandSpec::from_unperturbed(&energies, n, n_up)?;
        let band = spectral::select_band(&eig.values, &spec, plan.band_rule);
        if band.is_empty() {
            return Err(Error::Validation(format!("band n_up = {n_up} selected no levels")));
        }
        let mut band_spacings = Vec::new();
        let mut band_clambda = Vec::new();
        for slot in slots {
            let states = scope_states(&band, slot.scope);
            let value = match slot.measure {
                Measure::Gamma => {
                    let sample = spectral::unfold(&eig.values[band.members.clone()], plan.unfolding)?;
                    let g = spectral::gamma(&sample.spacings)?.gamma;
                    band_spacings = sample.spacings;
                    g
                }
                Measure::Pn => mean_over(states, |k| spectral::participation_number(eig.vector(k)))?,
                Measure::Concurrence(d) => mean_over(states, |k| {
                    PairValues::new(ws, eig.vector(k)).mean_concurrence(d)
                })?,
                Measure::ConcurrenceAll => mean_over(states, |k| {
                    PairValues::new(ws, eig.vector(k)).mean_concurrence(0)
                })?,
                Measure::Clambda => {
                    let mut all = Vec::new();
                    for k in states {
                        let mut pv = PairValues::new(ws, eig.vector(k));
                        for &id in &ws.distance_pairs[&0] {
                            all.push(pv.clambda(id)?);
                        }
                    }
                    let mean = all.iter().sum::<f64>() / all.len() as f64;
                    band_clambda = all;
                    mean
                }
                Measure::Negativity => mean_over(states, |k| {
                    let ids = &ws.distance_pairs[&0];
                    let mut sum = 0.0;
                    for &id in ids {
                        sum += entanglement::negativity(&ws.pair_reducers[id].apply(eig.vector(k))?)?;
                    }
                    Ok(sum / ids.len() as f64)
                })?,
                Measure::SingleEntropy => mean_over(states, |k| {
                    let mut sum = 0.0;
                    for r in &ws.single {
                        sum += entanglement::von_neumann_entropy(&r.apply(eig.vector(k))?)?;
                    }
                    Ok(sum / n as f64)
                })?,
                Measure::BlockEntropy(b) => mean_over(states, |k| {
                    entanglement::von_neumann_entropy(&ws.blocks[&b].apply(eig.vector(k))?)
                })?,
                Measure::HalfEntropy => mean_over(states, |k| {
                    entanglement::von_neumann_entropy(&ws.blocks[&(n / 2)].apply(eig.vector(k))?)
                })?,
                Measure::ConcurrenceMap => unreachable!("map is not a slot measure"),
            };
            out.values.push(value);
        }
        out.spacings.push(band_spacings);
        out.clambda.push(band_clambda);
    }

    if plan.wants_map() {
        out.map = (0..eig.dim())
            .map(|k| PairValues::new(ws, eig.vector(k)).mean_concurrence(1))
            .collect::<Result<_>>()?;
    }
    Ok(out)
}

fn mean_over(states: std::ops::Range<usize>, mut f: impl FnMut(usize) -> Result<f64>) -> Result<f64> {
    let count = states.len();
    let mut sum = 0.0;
    for k in states {
        sum += f(k)?;
    }
    Ok(sum / count as f64)
}

/// Runs every `(J, realization)` task of `plan` and aggregates the results.
///
/// Failed tasks are skipped and listed in [`ResultTable::failures`]; more
/// than [`MAX_FAILURE_FRACTION`] failures abort the sweep.
pub fn run_sweep(plan: &SweepPlan) -> Result<ResultTable> {
    plan.validate()?;
    match plan.workers {
        None => sweep(plan),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::arg(format!("cannot start worker pool: {e}")))?
            .install(|| sweep(plan)),
    }
}

/// Serves every allocation above 128 KiB from its own mapping.
///
/// Eigensolver workspaces of a few MiB are otherwise recycled through the
/// main heap, where the small per-task outputs kept between tasks pin them
/// and the resident size grows with every task.
#[cfg(all(target_os = "linux", target_env = "gnu"))]
fn pin_mmap_threshold() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        // SAFETY: mallopt only adjusts allocator tuning parameters.
        unsafe {
            libc::mallopt(libc::M_MMAP_THRESHOLD, 1 << 17);
        }
    });
}

#[cfg(not(all(target_os = "linux", target_env = "gnu")))]
fn pin_mmap_threshold() {}

fn sweep(plan: &SweepPlan) -> Result<ResultTable> {
    pin_mmap_threshold();
    let ws = Workspace::new(plan)?;
    let bands = plan.resolved_bands();
    let slots = plan.slot_measures();
    let native = plan.native_couplings()?;
    let r_count = plan.realizations;
    let total = native.len() * r_count;

    let outcomes: Vec<Result<TaskOutput>> = (0..total)
        .into_par_iter()
        .map(|t| run_task(plan, &ws, &bands, &slots, native[t / r_count], t % r_count))
        .collect();

    let mut failures = Vec::new();
    let mut per_j: Vec<Vec<TaskOutput>> = (0..native.len()).map(|_| Vec::new()).collect();
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(o) => per_j[t / r_count].push(o),
            Err(e) => failures.push(TaskFailure {
                coupling: plan.couplings[t / r_count],
                realization: t % r_count,
                message: e.to_string(),
            }),
        }
    }
    if failures.len() as f64 > MAX_FAILURE_FRACTION * total as f64 {
        return Err(Error::SweepAborted {
            failed: failures.len(),
            total,
        });
    }
    for f in &failures {
        eprintln!(
            "warning: skipped task J = {} realization {}: {}",
            f.coupling, f.realization, f.message
        );
    }

    let label_band = bands.len() > 1;
    let model_label = match plan.model {
        ModelSpec::TwoD(_) => "2d",
        ModelSpec::OneD(_) => "1d",
    };
    let mut records = Vec::new();
    let mut histograms = Vec::new();
    for (bi, &n_up) in bands.iter().enumerate() {
        for (si, slot) in slots.iter().enumerate() {
            let idx = bi * slots.len() + si;
            let measure = if label_band {
                format!("{}[n_up={n_up}]", slot.measure)
            } else {
                slot.measure.to_string()
            };
            for (ji, tasks) in per_j.iter().enumerate() {
                let values: Vec<f64> = tasks.iter().map(|o| o.values[idx]).collect();
                let (value, stderr) = mean_and_stderr(&values);
                records.push(ResultRecord {
                    measure: measure.clone(),
                    coupling: plan.couplings[ji],
                    units: plan.units.label(),
                    value,
                    stderr,
                    n_samples: values.len(),
                    n_qubits: ws.n_qubits,
                    model: model_label.to_string(),
                    l_c: plan.model.range(),
                    seed: plan.base_seed,
                });
            }
        }
        for (ji, tasks) in per_j.iter().enumerate() {
            let spacings: Vec<f64> = tasks.iter().flat_map(|o| o.spacings[bi].iter().copied()).collect();
            if !spacings.is_empty() {
                histograms.push(HistogramRecord {
                    kind: "spacing",
                    coupling: plan.couplings[ji],
                    n_up,
                    n_qubits: ws.n_qubits,
                    l_c: plan.model.range(),
                    histogram: spectral::spacing_histogram(&spacings, plan.spacing_bin),
                });
            }
            let cl: Vec<f64> = tasks.iter().flat_map(|o| o.clambda[bi].iter().copied()).collect();
            if !cl.is_empty() {
                histograms.push(HistogramRecord {
                    kind: "clambda",
                    coupling: plan.couplings[ji],
                    n_up,
                    n_qubits: ws.n_qubits,
                    l_c: plan.model.range(),
                    histogram: entanglement::clambda_statistics(&cl)?.histogram,
                });
            }
        }
    }

    let map = plan.wants_map().then(|| {
        let dim = 1usize << ws.n_qubits;
        let mut values = vec![vec![0.0; native.len()]; dim];
        for (ji, tasks) in per_j.iter().enumerate() {
            for (k, row) in values.iter_mut().enumerate() {
                row[ji] = tasks.iter().map(|o| o.map[k]).sum::<f64>() / tasks.len().max(1) as f64;
            }
        }
        StateMap {
            couplings: plan.couplings.clone(),
            values,
        }
    });

    Ok(ResultTable {
        records,
        histograms,
        map,
        failures,
    })
}
