//! Dense Hamiltonians of the two disordered spin models.
//!
//! * The 2D model: `H = Σᵢ Γᵢ σᶻᵢ + Σ_⟨ij⟩ Jᵢⱼ σˣᵢ σˣⱼ` on a periodic square
//!   lattice, with `Γᵢ ~ U[Δ₀ − δ/2, Δ₀ + δ/2]` and `Jᵢⱼ ~ U[−J, J]`.
//! * The 1D family in its effective-field representation:
//!   `H = H₀ + V_diag + V_band + V_off` on an open chain, every pair within
//!   the interaction range `l_c` coupled by `J_jk = J ξ`, `ξ ~ U[−1, 1]`.
//!
//! Matrices are stored densely in the computational basis described in
//! [`crate::basis`].

mod disorder;
mod matrix;

pub use disorder::{realization_seed, sample_realization, DisorderRealization, PairDraw};
pub use matrix::HermitianMatrix;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::basis::{self, Geometry, MAX_QUBITS};
use crate::error::{Error, Result};

/// Parameters of the 2D random-Ising lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model2d {
    pub lx: usize,
    pub ly: usize,
    /// Mean single-qubit splitting `Δ₀`.
    pub mean_splitting: f64,
    /// Width `δ` of the splitting distribution.
    pub splitting_spread: f64,
    /// Coupling scale `J`.
    pub coupling: f64,
}

impl Default for Model2d {
    fn default() -> Self {
        Self {
            lx: 3,
            ly: 3,
            mean_splitting: 1.0,
            splitting_spread: 0.09,
            coupling: 0.0,
        }
    }
}

impl Model2d {
    pub fn geometry(&self) -> Geometry {
        Geometry::Torus {
            lx: self.lx,
            ly: self.ly,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.lx * self.ly
    }

    /// The natural coupling unit `δ / L`.
    pub fn coupling_unit(&self) -> f64 {
        self.splitting_spread / self.n_qubits() as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.lx == 0 || self.ly == 0 {
            return Err(Error::arg("lattice dimensions must be positive"));
        }
        if self.n_qubits() > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{} qubits exceeds the supported maximum of {MAX_QUBITS}",
                self.n_qubits()
            )));
        }
        if !(self.splitting_spread >= 0.0) || !(self.coupling >= 0.0) {
            return Err(Error::arg("splitting spread and coupling must be non-negative"));
        }
        if !self.mean_splitting.is_finite() {
            return Err(Error::arg("mean splitting must be finite"));
        }
        Ok(())
    }
}

/// Parameters of the 1D chain in the effective-field representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model1d {
    /// Chain length `L`.
    pub len: usize,
    /// Field gradient `a`; detuning of site `k` (1-based) is `δ_k = a k`.
    pub gradient: f64,
    /// Rabi frequency `Ω`.
    pub rabi: f64,
    /// Coupling scale `J`.
    pub coupling: f64,
    /// Interaction range `l_c`: pairs with `|j − k| ≤ l_c` interact.
    pub range: usize,
}

impl Default for Model1d {
    fn default() -> Self {
        Self {
            len: 12,
            gradient: 1.0,
            rabi: 100.0,
            coupling: 0.0,
            range: 11,
        }
    }
}

impl Model1d {
    pub fn geometry(&self) -> Geometry {
        Geometry::Chain { len: self.len }
    }

    /// Delocalization border `J_c = 4 a² / Ω`.
    pub fn critical_coupling(&self) -> f64 {
        4.0 * self.gradient * self.gradient / self.rabi
    }

    /// Detuning `δ_k` of qubit `q` (site `k = q + 1`).
    pub fn detuning(&self, q: usize) -> f64 {
        self.gradient * (q + 1) as f64
    }

    /// Effective-field splitting `√(δ_k² + Ω²)`.
    pub fn effective_field(&self, q: usize) -> f64 {
        self.detuning(q).hypot(self.rabi)
    }

    /// Rotation coefficients `(a_k, b_k) = (Ω, −δ_k) / √(δ_k² + Ω²)`.
    pub fn rotation(&self, q: usize) -> (f64, f64) {
        let norm = self.effective_field(q);
        (self.rabi / norm, -self.detuning(q) / norm)
    }

    /// Coupled pairs `(j, k)`, `j < k ≤ j + l_c`, in lexicographic order.
    pub fn coupled_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len)
            .flat_map(|j| (j + 1..self.len.min(j + self.range + 1)).map(move |k| (j, k)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.len == 0 {
            return Err(Error::arg("chain length must be positive"));
        }
        if self.len > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{} qubits exceeds the supported maximum of {MAX_QUBITS}",
                self.len
            )));
        }
        if !(self.rabi > 0.0) || !self.gradient.is_finite() || !(self.coupling >= 0.0) {
            return Err(Error::arg(
                "rabi frequency must be positive, gradient finite and coupling non-negative",
            ));
        }
        self.check_range()
    }

    fn check_range(&self) -> Result<()> {
        if self.range < 1 || self.range + 1 > self.len {
            return Err(Error::arg(format!(
                "interaction range l_c = {} outside [1, L - 1] for L = {}",
                self.range, self.len
            )));
        }
        Ok(())
    }
}

/// Either lattice model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    TwoD(Model2d),
    OneD(Model1d),
}

impl ModelSpec {
    pub fn n_qubits(&self) -> usize {
        match self {
            ModelSpec::TwoD(m) => m.n_qubits(),
            ModelSpec::OneD(m) => m.len,
        }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            ModelSpec::TwoD(m) => m.geometry(),
            ModelSpec::OneD(m) => m.geometry(),
        }
    }

    pub fn coupling(&self) -> f64 {
        match self {
            ModelSpec::TwoD(m) => m.coupling,
            ModelSpec::OneD(m) => m.coupling,
        }
    }

    pub fn with_coupling(mut self, j: f64) -> Self {
        match &mut self {
            ModelSpec::TwoD(m) => m.coupling = j,
            ModelSpec::OneD(m) => m.coupling = j,
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::TwoD(m) => m.validate(),
            ModelSpec::OneD(m) => m.validate(),
        }
    }

    /// Interaction range for the 1D family, `None` for the lattice.
    pub fn range(&self) -> Option<usize> {
        match self {
            ModelSpec::TwoD(_) => None,
            ModelSpec::OneD(m) => Some(m.range),
        }
    }

    /// Energies of the computational basis states under `H₀` (the `J = 0`
    /// Hamiltonian), indexed by basis state.
    pub fn unperturbed_energies(&self, real: &DisorderRealization) -> Vec<f64> {
        match self {
            ModelSpec::TwoD(m) => {
                let dim = 1usize << m.n_qubits();
                (0..dim)
                    .map(|b| {
                        real.splittings
                            .iter()
                            .enumerate()
                            .map(|(q, g)| g * basis::sigma_z(b, q))
                            .sum()
                    })
                    .collect()
            }
            ModelSpec::OneD(m) => h0_1d_diagonal(m),
        }
    }

    /// Full Hamiltonian for one disorder realization.
    pub fn build(&self, real: &DisorderRealization) -> Result<HermitianMatrix> {
        match self {
            ModelSpec::TwoD(m) => build_h_2d(m, real),
            ModelSpec::OneD(m) => build_h_1d(m, real),
        }
    }
}

fn ensure_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits exceeds the supported maximum of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// 2D lattice Hamiltonian. Purely real.
pub fn build_h_2d(spec: &Model2d, real: &DisorderRealization) -> Result<HermitianMatrix> {
    let n = spec.n_qubits();
    ensure_capacity(n)?;
    if real.splittings.len() != n {
        return Err(Error::arg(format!(
            "realization has {} splittings, lattice has {n} qubits",
            real.splittings.len()
        )));
    }
    let dim = 1usize << n;
    let mut h = HermitianMatrix::zeros(dim);
    for b in 0..dim {
        let diag: f64 = real
            .splittings
            .iter()
            .enumerate()
            .map(|(q, g)| g * basis::sigma_z(b, q))
            .sum();
        h.add(b, b, c64::new(diag, 0.0));
        for draw in &real.couplings {
            let (i, j) = draw.pair;
            let t = b ^ (1 << i) ^ (1 << j);
            h.add(t, b, c64::new(spec.coupling * draw.unit, 0.0));
        }
    }
    Ok(h)
}

fn h0_1d_diagonal(spec: &Model1d) -> Vec<f64> {
    let fields: Vec<f64> = (0..spec.len).map(|q| spec.effective_field(q)).collect();
    (0..1usize << spec.len)
        .map(|b| {
            0.5 * fields
                .iter()
                .enumerate()
                .map(|(q, e)| e * basis::sigma_z(b, q))
                .sum::<f64>()
        })
        .collect()
}

/// Unperturbed 1D Hamiltonian `H₀ = ½ Σ_k √(δ_k² + Ω²) σᶻ_k` (diagonal).
pub fn build_h0_1d(spec: &Model1d) -> Result<HermitianMatrix> {
    ensure_capacity(spec.len)?;
    let diag = h0_1d_diagonal(spec);
    let mut h = HermitianMatrix::zeros(diag.len());
    for (b, e) in diag.into_iter().enumerate() {
        h.add(b, b, c64::new(e, 0.0));
    }
    Ok(h)
}

fn accumulate_v_1d(
    spec: &Model1d,
    real: &DisorderRealization,
    h: &mut HermitianMatrix,
) -> Result<()> {
    spec.check_range()?;
    let rot: Vec<(f64, f64)> = (0..spec.len).map(|q| spec.rotation(q)).collect();
    let terms: Vec<(usize, usize, f64)> = real
        .couplings
        .iter()
        .map(|d| (d.pair.0, d.pair.1, spec.coupling * d.unit))
        .collect();
    if terms.iter().any(|&(j, k, _)| k <= j || k - j > spec.range || k >= spec.len) {
        return Err(Error::arg("realization pairs do not match the model's interaction range"));
    }
    for b in 0..h.dim() {
        for &(j, k, jjk) in &terms {
            let (aj, bj) = rot[j];
            let (ak, bk) = rot[k];
            let zz = basis::sigma_z(b, j) * basis::sigma_z(b, k);
            // V_diag: -½ J b_j b_k σᶻσᶻ
            h.add(b, b, c64::new(-0.5 * jjk * bj * bk * zz, 0.0));
            // V_band: -½ J a_j a_k σʸσʸ, with σʸ_j σʸ_k |b⟩ = -z_j z_k |b ⊕ j ⊕ k⟩
            let t = b ^ (1 << j) ^ (1 << k);
            h.add(t, b, c64::new(0.5 * jjk * aj * ak * zz, 0.0));
            // V_off: ½ J (a_j b_k σʸ_j σᶻ_k + a_k b_j σᶻ_j σʸ_k), σʸσᶻ|b⟩ = i z_j z_k |b ⊕ j⟩
            h.add(b ^ (1 << j), b, c64::new(0.0, 0.5 * jjk * aj * bk * zz));
            h.add(b ^ (1 << k), b, c64::new(0.0, 0.5 * jjk * ak * bj * zz));
        }
    }
    Ok(())
}

/// Interaction `V = V_diag + V_band + V_off` of the 1D family.
pub fn build_v_1d(spec: &Model1d, real: &DisorderRealization) -> Result<HermitianMatrix> {
    ensure_capacity(spec.len)?;
    let mut h = HermitianMatrix::zeros(1 << spec.len);
    accumulate_v_1d(spec, real, &mut h)?;
    Ok(h)
}

/// `H₀ + V` assembled in a single buffer.
pub fn build_h_1d(spec: &Model1d, real: &DisorderRealization) -> Result<HermitianMatrix> {
    let mut h = build_h0_1d(spec)?;
    accumulate_v_1d(spec, real, &mut h)?;
    Ok(h)
}

/// Diagonal phases `d_b = i^popcount(b)`.
///
/// Conjugating by `D = diag(d)` maps every `σʸ` to `σˣ` and leaves `σᶻ`
/// alone, so `D† H D` is real symmetric for the 1D family. Eigenvectors of
/// `H` are `D` times those of the real matrix.
pub fn quarter_turn_gauge(n_qubits: usize) -> Vec<c64> {
    const TURNS: [c64; 4] = [
        c64 { re: 1.0, im: 0.0 },
        c64 { re: 0.0, im: 1.0 },
        c64 { re: -1.0, im: 0.0 },
        c64 { re: 0.0, im: -1.0 },
    ];
    (0..1usize << n_qubits)
        .map(|b| TURNS[b.count_ones() as usize % 4])
        .collect()
}

#[cfg(test)]
mod tests;
