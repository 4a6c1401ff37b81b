//! Reproducible disorder draws.
//!
//! Every realization is generated by a `ChaCha8Rng` seeded from a single
//! 64-bit value. Realization `r` of a run with base seed `s` uses
//! `s ⊕ splitmix64(r)`, so its draws do not depend on which worker builds it
//! or in which order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ModelSpec;
use crate::basis;

/// One coupled pair and its dimensionless draw `ξ ∈ [−1, 1]`; the physical
/// coupling is `J ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDraw {
    pub pair: (usize, usize),
    pub unit: f64,
}

/// Quenched disorder of one realization.
///
/// Couplings are stored in units of `J`, so one realization can be reused
/// along a whole coupling sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub seed: u64,
    /// Single-qubit splittings `Γᵢ` (2D model only; empty for the chain).
    pub splittings: Vec<f64>,
    pub couplings: Vec<PairDraw>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of realization `index` in a run with the given base seed.
pub fn realization_seed(base_seed: u64, index: u64) -> u64 {
    base_seed ^ splitmix64(index)
}

/// Draws the disorder of `spec` from `seed`.
///
/// 2D: `Γᵢ ~ U[Δ₀ − δ/2, Δ₀ + δ/2]` for each site (row-major), then one
/// `ξ ~ U[−1, 1]` per lattice bond in sorted pair order. 1D: one `ξ` per
/// coupled pair `(j, k)`, `j < k ≤ j + l_c`, in lexicographic order.
pub fn sample_realization(spec: &ModelSpec, seed: u64) -> DisorderRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec {
        ModelSpec::TwoD(m) => {
            let half = 0.5 * m.splitting_spread;
            let splittings = (0..m.n_qubits())
                .map(|_| m.mean_splitting + half * (2.0 * rng.random::<f64>() - 1.0))
                .collect();
            let bonds = basis::pairs_at_distance(m.geometry(), 1)
                .map(|c| c.pairs)
                .unwrap_or_default();
            let couplings = bonds
                .into_iter()
                .map(|pair| PairDraw {
                    pair,
                    unit: rng.random_range(-1.0..=1.0),
                })
                .collect();
            DisorderRealization {
                seed,
                splittings,
                couplings,
            }
        }
        ModelSpec::OneD(m) => {
            let couplings = m
                .coupled_pairs()
                .into_iter()
                .map(|pair| PairDraw {
                    pair,
                    unit: rng.random_range(-1.0..=1.0),
                })
                .collect();
            DisorderRealization {
                seed,
                splittings: Vec::new(),
                couplings,
            }
        }
    }
}
