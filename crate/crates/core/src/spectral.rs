//! Quantum-chaos diagnostics: band selection, unfolded level spacings, the
//! `γ` parameter and participation numbers.

use std::ops::Range;
use std::sync::OnceLock;

use faer::linalg::solvers::SolveLstsq;
use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::basis;
use crate::error::{Error, Result};
use crate::stats::Histogram;

/// Poisson spacing density `e^{−s}`.
pub fn poisson_density(s: f64) -> f64 {
    (-s).exp()
}

/// Wigner surmise `(πs/2) e^{−πs²/4}`.
pub fn wigner_density(s: f64) -> f64 {
    let q = std::f64::consts::FRAC_PI_4;
    2.0 * q * s * (-q * s * s).exp()
}

/// `∫₀^s e^{−x} dx`.
pub fn poisson_cdf(s: f64) -> f64 {
    -(-s).exp_m1()
}

/// `∫₀^s P_WD(x) dx`.
pub fn wigner_cdf(s: f64) -> f64 {
    -(-std::f64::consts::FRAC_PI_4 * s * s).exp_m1()
}

/// Smallest positive `s` where the Poisson and Wigner densities cross
/// (≈ 0.4729), found by bisection once and cached.
pub fn crossing_point() -> f64 {
    static S0: OnceLock<f64> = OnceLock::new();
    *S0.get_or_init(|| {
        let f = |s: f64| poisson_density(s) - wigner_density(s);
        let (mut lo, mut hi) = (0.1, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s0 = 0.5 * (lo + hi);
        assert!((s0 - 0.4729).abs() < 1e-3, "crossing point {s0}");
        s0
    })
}

/// How band members are picked from a perturbed spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandRule {
    /// `C(L, n_up)` consecutive levels at the band's unperturbed rank.
    #[default]
    Count,
    /// All levels inside the band's unperturbed energy range.
    EnergyWindow,
}

/// Where one magnetization band sits in the unperturbed spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSpec {
    pub n_up: usize,
    pub size: usize,
    /// Number of out-of-band unperturbed levels below the band center.
    pub rank_start: usize,
    /// Mean unperturbed energy of the band.
    pub center: f64,
    /// Lowest and highest unperturbed energy of the band.
    pub window: (f64, f64),
}

impl BandSpec {
    /// Locates the `n_up` band from the unperturbed energies of every basis
    /// state (`energies[b]` for basis index `b`).
    pub fn from_unperturbed(energies: &[f64], n_qubits: usize, n_up: usize) -> Result<Self> {
        if energies.len() != 1 << n_qubits {
            return Err(Error::arg("one unperturbed energy per basis state is required"));
        }
        let members = basis::enumerate_sector(n_qubits, n_up)?;
        let size = members.len();
        let center = members.iter().map(|&b| energies[b]).sum::<f64>() / size as f64;
        let lo = members.iter().map(|&b| energies[b]).fold(f64::INFINITY, f64::min);
        let hi = members.iter().map(|&b| energies[b]).fold(f64::NEG_INFINITY, f64::max);
        let rank_start = energies
            .iter()
            .enumerate()
            .filter(|&(b, &e)| basis::up_count(b, n_qubits) != n_up && e < center)
            .count();
        Ok(Self {
            n_up,
            size,
            rank_start,
            center,
            window: (lo, hi),
        })
    }
}

/// Eigenpairs identified with one unperturbed band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSelection {
    pub n_up: usize,
    /// Indices into the ascending spectrum; always contiguous.
    pub members: Range<usize>,
    pub center: f64,
}

impl BandSelection {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the band's central eigenfunction.
    pub fn central(&self) -> usize {
        self.members.start + self.members.len() / 2
    }

    /// The middle third of the band.
    pub fn central_third(&self) -> Range<usize> {
        let n = self.members.len();
        let lo = self.members.start + n / 3;
        lo..self.members.start + (2 * n).div_ceil(3)
    }
}

/// Picks the band's eigenpairs from an ascending spectrum.
pub fn select_band(values: &[f64], band: &BandSpec, rule: BandRule) -> BandSelection {
    let members = match rule {
        BandRule::Count => {
            let size = band.size.min(values.len());
            let start = band.rank_start.min(values.len() - size);
            start..start + size
        }
        BandRule::EnergyWindow => {
            let (lo, hi) = band.window;
            let start = values.partition_point(|&v| v < lo);
            let end = values.partition_point(|&v| v <= hi);
            start..end.max(start)
        }
    };
    BandSelection {
        n_up: band.n_up,
        members,
        center: band.center,
    }
}

/// Nearest-neighbour spacings in units of their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingSample {
    pub spacings: Vec<f64>,
    /// Mean raw spacing `Δ` used for unfolding.
    pub mean_spacing: f64,
}

/// Unfolds an ascending run of levels with a single mean spacing.
pub fn unfolded_spacings(levels: &[f64]) -> Result<SpacingSample> {
    if levels.len() < 2 {
        return Err(Error::arg("at least two levels are needed for a spacing"));
    }
    let raw: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    if raw.iter().any(|&d| d < 0.0) {
        return Err(Error::arg("levels must be sorted ascending"));
    }
    let mean_spacing = raw.iter().sum::<f64>() / raw.len() as f64;
    if !(mean_spacing > 0.0) {
        return Err(Error::arg("levels are fully degenerate"));
    }
    Ok(SpacingSample {
        spacings: raw.into_iter().map(|d| d / mean_spacing).collect(),
        mean_spacing,
    })
}

/// How raw band levels are mapped to unit mean spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Unfolding {
    /// Divide every spacing by the single band-wide mean spacing.
    Global,
    /// Fit the level staircase `N(E)` with a Legendre polynomial and use the
    /// fitted `N(Eᵢ)` as unfolded levels. The degree is capped at
    /// `max(1, n / 18)` for a band of `n` levels.
    Polynomial { degree: usize },
}

impl Default for Unfolding {
    fn default() -> Self {
        Unfolding::Polynomial { degree: 7 }
    }
}

/// Legendre polynomials `P₀..P_d` at `x ∈ [−1, 1]`.
fn legendre_row(x: f64, degree: usize, out: &mut [f64]) {
    out[0] = 1.0;
    if degree >= 1 {
        out[1] = x;
    }
    for k in 1..degree {
        out[k + 1] = ((2 * k + 1) as f64 * x * out[k] - k as f64 * out[k - 1]) / (k + 1) as f64;
    }
}

/// Unfolds an ascending run of levels; spacings are rescaled to unit mean.
pub fn unfold(levels: &[f64], method: Unfolding) -> Result<SpacingSample> {
    let global = unfolded_spacings(levels)?;
    let degree = match method {
        Unfolding::Global => return Ok(global),
        Unfolding::Polynomial { degree } => degree.min((levels.len() / 18).max(1)),
    };
    let n = levels.len();
    let (lo, hi) = (levels[0], levels[n - 1]);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut design = Mat::<f64>::zeros(n, degree + 1);
    let mut row = vec![0.0; degree + 1];
    for (i, &e) in levels.iter().enumerate() {
        legendre_row((e - mid) / half, degree, &mut row);
        for (k, &v) in row.iter().enumerate() {
            design[(i, k)] = v;
        }
    }
    let target = Mat::<f64>::from_fn(n, 1, |i, _| i as f64);
    let coef = design.qr().solve_lstsq(&target);
    let staircase: Vec<f64> = (0..n)
        .map(|i| (0..=degree).map(|k| design[(i, k)] * coef[(k, 0)]).sum())
        .collect();
    let raw: Vec<f64> = staircase.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
    let mean = raw.iter().sum::<f64>() / raw.len() as f64;
    if !(mean > 0.0) {
        return Ok(global);
    }
    Ok(SpacingSample {
        spacings: raw.into_iter().map(|d| d / mean).collect(),
        mean_spacing: global.mean_spacing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    pub gamma: f64,
    pub s0: f64,
}

/// `γ = ∫₀^{s₀}(P − P_WD) / ∫₀^{s₀}(P_P − P_WD)`: 1 for Poisson, 0 for
/// Wigner. The empirical integral is the fraction of spacings `≤ s₀`, so no
/// binning enters.
pub fn gamma(spacings: &[f64]) -> Result<GammaValue> {
    if spacings.is_empty() {
        return Err(Error::arg("gamma of an empty spacing sample"));
    }
    let s0 = crossing_point();
    let below = spacings.iter().filter(|&&s| s <= s0).count() as f64 / spacings.len() as f64;
    let wd = wigner_cdf(s0);
    Ok(GammaValue {
        gamma: (below - wd) / (poisson_cdf(s0) - wd),
        s0,
    })
}

/// Histogram of unfolded spacings on `[0, 4]`.
pub fn spacing_histogram(spacings: &[f64], bin_width: f64) -> Histogram {
    Histogram::new(spacings, 0.0, 4.0, bin_width)
}

/// Participation number `ξ = 1 / Σ|cᵢ|⁴` of a normalized vector.
pub fn participation_number(amplitudes: &[c64]) -> Result<f64> {
    let (norm, quartic) = amplitudes.iter().fold((0.0, 0.0), |(n, q), c| {
        let p = c.norm_sqr();
        (n + p, q + p * p)
    });
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "participation number needs a normalized vector (norm² = {norm})"
        )));
    }
    Ok(1.0 / quartic)
}
