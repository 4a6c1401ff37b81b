//! Reduced density matrices and entanglement measures.
//!
//! Reduced states follow the basis convention of [`crate::basis`]: the kept
//! qubits `keep[0], keep[1], …` become bits `0, 1, …` of the reduced index.
//! For a two-qubit reduction the local basis is therefore ordered
//! `|00⟩, |10⟩, |01⟩, |11⟩` with the first kept qubit written first; the
//! spin-flip `σʸ ⊗ σʸ` is symmetric under exchanging the two qubits, so
//! concurrence does not depend on this choice.

use faer::{c64, Mat, Side};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::stats::Histogram;

/// Eigenvalues above `-CLIP_TOL` are treated as rounding and clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;

/// Trace-one Hermitian positive semidefinite matrix over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Mat<c64>,
}

impl DensityMatrix {
    /// Validates trace and Hermiticity.
    pub fn new(data: Mat<c64>) -> Result<Self> {
        let dim = data.nrows();
        if dim != data.ncols() || !dim.is_power_of_two() {
            return Err(Error::arg(format!(
                "density matrix must be square with power-of-two dimension, got {}x{}",
                dim,
                data.ncols()
            )));
        }
        let trace: c64 = (0..dim).map(|i| data[(i, i)]).sum();
        if (trace - c64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::Validation(format!("trace {trace} differs from 1")));
        }
        for j in 0..dim {
            for i in 0..=j {
                if (data[(i, j)] - data[(j, i)].conj()).norm() > 1e-12 {
                    return Err(Error::Validation("density matrix is not Hermitian".into()));
                }
            }
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            data,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state.
    pub fn pure(state: &[c64]) -> Result<Self> {
        let n = state.len();
        Self::new(Mat::from_fn(n, n, |i, j| state[i] * state[j].conj()))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        self.data[(row, col)]
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.data
    }

    /// Eigenvalues, ascending, with rounding-level negatives clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let vals = self
            .data
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::Solver("density matrix eigenvalues did not converge".into()))?;
        vals.into_iter()
            .map(|p| {
                if p < -CLIP_TOL {
                    Err(Error::Validation(format!("negative eigenvalue {p:e}")))
                } else {
                    Ok(p.max(0.0))
                }
            })
            .collect()
    }
}

/// Precomputed index maps for tracing out the complement of `keep`.
///
/// Build once per qubit subset and apply to many states.
#[derive(Debug, Clone)]
pub struct PartialTrace {
    n_qubits: usize,
    kept: Vec<usize>,
    traced: Vec<usize>,
}

fn scatter(local: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .filter(|&(t, _)| local >> t & 1 == 1)
        .fold(0, |acc, (_, &q)| acc | 1 << q)
}

impl PartialTrace {
    pub fn new(n_qubits: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() || keep.len() >= n_qubits {
            return Err(Error::arg(format!(
                "kept set must be a nonempty proper subset of {n_qubits} qubits"
            )));
        }
        let mut seen = vec![false; n_qubits];
        for &q in keep {
            if q >= n_qubits || std::mem::replace(&mut seen[q], true) {
                return Err(Error::arg(format!("invalid or repeated qubit {q} in kept set")));
            }
        }
        let rest: Vec<usize> = (0..n_qubits).filter(|&q| !seen[q]).collect();
        Ok(Self {
            n_qubits,
            kept: (0..1usize << keep.len()).map(|a| scatter(a, keep)).collect(),
            traced: (0..1usize << rest.len()).map(|b| scatter(b, &rest)).collect(),
        })
    }

    /// `ρ_A[a, a'] = Σ_b ψ[a ⊕ b] ψ*[a' ⊕ b]`.
    pub fn apply(&self, state: &[c64]) -> Result<DensityMatrix> {
        if state.len() != 1 << self.n_qubits {
            return Err(Error::arg(format!(
                "state has {} amplitudes, expected {}",
                state.len(),
                1usize << self.n_qubits
            )));
        }
        let da = self.kept.len();
        let mut rho = Mat::<c64>::zeros(da, da);
        for (i, &oi) in self.kept.iter().enumerate() {
            for (j, &oj) in self.kept.iter().enumerate().take(i + 1) {
                let mut acc = c64::new(0.0, 0.0);
                for &ob in &self.traced {
                    acc += state[oi | ob] * state[oj | ob].conj();
                }
                rho[(i, j)] = acc;
                rho[(j, i)] = acc.conj();
            }
        }
        DensityMatrix::new(rho)
    }
}

/// Reduced density matrix of `keep` for a pure state of `n_qubits` qubits.
pub fn partial_trace(state: &[c64], n_qubits: usize, keep: &[usize]) -> Result<DensityMatrix> {
    PartialTrace::new(n_qubits, keep)?.apply(state)
}

/// `−Σ p log₂ p` over the eigenvalues of `ρ`, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho
        .spectrum()?
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Binary entropy `h(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::arg(format!(
            "two-qubit density matrix required, got dimension {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// Eigenvalues of `ρ` below this are treated as rounding noise.
const RANK_TOL: f64 = 1e-14;

/// Square roots `λᵢ` of the spectrum of `ρ ρ̃`, `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`.
///
/// With `ρ = A A†` they are the singular values of `τ = Aᵀ (σʸ⊗σʸ) A`, which
/// keeps zero `λᵢ` at rounding level instead of at its square root.
fn flip_spectrum(rho: &Mat<c64>) -> Result<[f64; 4]> {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    let evd = rho
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Solver("density matrix spectrum did not converge".into()))?;
    let (u, s) = (evd.U(), evd.S());
    let kept: Vec<usize> = (0..4).filter(|&k| s[k].re > RANK_TOL).collect();
    let a = Mat::from_fn(4, kept.len(), |i, c| u[(i, kept[c])] * s[kept[c]].re.sqrt());
    let tau = Mat::from_fn(kept.len(), kept.len(), |k, l| {
        (0..4).map(|i| a[(i, k)] * a[(3 - i, l)] * SIGN[i]).sum::<c64>()
    });
    let mut out = [0.0; 4];
    if !kept.is_empty() {
        let sv = tau
            .singular_values()
            .map_err(|_| Error::Solver("spin-flip spectrum did not converge".into()))?;
        out[..sv.len()].copy_from_slice(&sv);
    }
    Ok(out)
}

/// `c_λ = λ₁ − λ₂ − λ₃ − λ₄` with `λᵢ` the descending square roots of the
/// spectrum of `ρ ρ̃`. Lies in `[−1/2, 1]`.
pub fn c_lambda(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let mut lambda = flip_spectrum(rho.as_mat())?;
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok(lambda[0] - lambda[1] - lambda[2] - lambda[3])
}

/// Wootters concurrence `max(0, c_λ)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(c_lambda(rho)?.max(0.0))
}

/// `E_F = h(½[1 + √(1 − C²)])`.
pub fn formation_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Entanglement of formation of a two-qubit state.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    Ok(formation_from_concurrence(concurrence(rho)?))
}

/// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_B}`, the
/// partial transpose on the second kept qubit (local bit 1).
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let m = rho.as_mat();
    let pt = Mat::from_fn(4, 4, |i, j| {
        let (a1, b1) = (i & 1, i >> 1);
        let (a2, b2) = (j & 1, j >> 1);
        m[(a1 | b2 << 1, a2 | b1 << 1)]
    });
    let vals = pt
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::Solver("partial transpose spectrum did not converge".into()))?;
    Ok(vals.into_iter().filter(|&v| v < 0.0).fold(0.0, |acc, v| acc - v))
}

/// Distribution of `c_λ` values over an ensemble of states and pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ClambdaSample {
    pub mean: f64,
    pub count: usize,
    /// Unit-integral histogram on `[−1/2, 1]`.
    pub histogram: Histogram,
}

/// Histogram bin width used for `c_λ` distributions.
pub const CLAMBDA_BIN: f64 = 0.05;

pub fn clambda_statistics(values: &[f64]) -> Result<ClambdaSample> {
    if values.is_empty() {
        return Err(Error::arg("no c_lambda values"));
    }
    // rounding can push a value a hair past the physical range
    let clamped: Vec<f64> = values.iter().map(|v| v.clamp(-0.5, 1.0)).collect();
    Ok(ClambdaSample {
        mean: values.iter().sum::<f64>() / values.len() as f64,
        count: values.len(),
        histogram: Histogram::new(&clamped, -0.5, 1.0, CLAMBDA_BIN),
    })
}

/// Haar-random pure state of `n_qubits` qubits.
pub fn haar_random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Vec<c64> {
    let dim = 1usize << n_qubits;
    let mut v: Vec<c64> = (0..dim)
        .map(|_| c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    v
}
