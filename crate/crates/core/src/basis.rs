//! Computational-basis bookkeeping.
//!
//! A basis state of `L` qubits is identified by an integer in `[0, 2^L)`.
//! Qubit `q` (0-based) is stored in bit `q`:
//!
//! * bit `q` clear: qubit in `|0⟩`, the `σᶻ = +1` ("up") state;
//! * bit `q` set: qubit in `|1⟩`, the `σᶻ = -1` ("down") state.
//!
//! The popcount of an index is therefore the number of down spins. Every
//! module in the crate uses this convention; physical site `k = q + 1` when
//! a formula numbers sites from one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported qubit count (dense `2^L × 2^L` storage).
pub const MAX_QUBITS: usize = 16;

/// `σᶻ` eigenvalue (`+1` or `-1`) of qubit `q` in basis state `index`.
#[inline]
pub fn sigma_z(index: usize, q: usize) -> f64 {
    if index >> q & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Number of up spins (`σᶻ = +1`) in a basis state of `n_qubits` qubits.
#[inline]
pub fn up_count(index: usize, n_qubits: usize) -> usize {
    n_qubits - index.count_ones() as usize
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All basis indices of `n_qubits` qubits with exactly `n_up` up spins, ascending.
pub fn enumerate_sector(n_qubits: usize, n_up: usize) -> Result<Vec<usize>> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits exceeds the supported maximum of {MAX_QUBITS}"
        )));
    }
    if n_up > n_qubits {
        return Err(Error::arg(format!(
            "n_up = {n_up} outside [0, {n_qubits}]"
        )));
    }
    let downs = (n_qubits - n_up) as u32;
    Ok((0..1usize << n_qubits)
        .filter(|i| i.count_ones() == downs)
        .collect())
}

/// Lattice shape of the qubit register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// Open chain of `len` qubits.
    Chain { len: usize },
    /// `lx × ly` square lattice with periodic boundaries, qubits numbered
    /// row-major: site `(x, y)` is qubit `y * lx + x`.
    Torus { lx: usize, ly: usize },
}

impl Geometry {
    pub fn n_qubits(&self) -> usize {
        match *self {
            Geometry::Chain { len } => len,
            Geometry::Torus { lx, ly } => lx * ly,
        }
    }

    /// Short label used in result tables.
    pub fn label(&self) -> String {
        match *self {
            Geometry::Chain { len } => format!("chain{len}"),
            Geometry::Torus { lx, ly } => format!("torus{lx}x{ly}"),
        }
    }
}

/// Unordered qubit pairs sharing one distance class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub distance: usize,
    /// Pairs `(i, j)` with `i < j`, each listed once, sorted.
    pub pairs: Vec<(usize, usize)>,
}

impl PairClass {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Pairs at lattice distance `n`.
///
/// On a chain this is `|i - j| = n`. On the torus only two classes exist:
/// `n = 1` are the periodic lattice bonds and `n = 2` the diagonal neighbours.
pub fn pairs_at_distance(geometry: Geometry, n: usize) -> Result<PairClass> {
    if n == 0 {
        return Err(Error::arg("pair distance must be at least 1"));
    }
    let pairs = match geometry {
        Geometry::Chain { len } => {
            if n >= len {
                return Err(Error::arg(format!(
                    "distance {n} not available on a chain of {len} qubits"
                )));
            }
            (0..len - n).map(|k| (k, k + n)).collect()
        }
        Geometry::Torus { lx, ly } => {
            let site = |x: usize, y: usize| (y % ly) * lx + (x % lx);
            let mut set = BTreeSet::new();
            for y in 0..ly {
                for x in 0..lx {
                    let here = site(x, y);
                    let partners: [usize; 2] = match n {
                        1 => [site(x + 1, y), site(x, y + 1)],
                        2 => [site(x + 1, y + 1), site(x + lx - 1, y + 1)],
                        _ => {
                            return Err(Error::arg(format!(
                                "distance {n} unsupported on the torus (only 1 and 2)"
                            )))
                        }
                    };
                    for p in partners {
                        if p != here {
                            set.insert(ordered(here, p));
                        }
                    }
                }
            }
            set.into_iter().collect()
        }
    };
    Ok(PairClass { distance: n, pairs })
}

/// Every unordered pair of `n_qubits` qubits. `distance` is reported as 0.
pub fn all_pairs(n_qubits: usize) -> PairClass {
    let pairs = (0..n_qubits)
        .flat_map(|i| (i + 1..n_qubits).map(move |j| (i, j)))
        .collect();
    PairClass { distance: 0, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_examples() {
        assert_eq!(enumerate_sector(2, 1).unwrap(), vec![0b01, 0b10]);
        assert_eq!(enumerate_sector(12, 6).unwrap().len(), 924);
        // independent count: C(9,4) = 9·8·7·6 / 4!
        assert_eq!(enumerate_sector(9, 4).unwrap().len(), 9 * 8 * 7 * 6 / 24);
    }

    #[test]
    fn sector_popcount_is_down_spins() {
        for idx in enumerate_sector(7, 3).unwrap() {
            assert_eq!(idx.count_ones(), 4);
            assert_eq!(up_count(idx, 7), 3);
        }
    }

    #[test]
    fn sector_errors() {
        assert!(matches!(enumerate_sector(4, 5), Err(Error::Argument(_))));
        assert!(matches!(enumerate_sector(17, 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn sectors_partition_the_space() {
        for l in 0..=10 {
            let total: usize = (0..=l).map(|u| enumerate_sector(l, u).unwrap().len()).sum();
            assert_eq!(total, 1 << l);
            for u in 0..=l {
                assert_eq!(enumerate_sector(l, u).unwrap().len(), binomial(l, u));
            }
        }
    }

    #[test]
    fn sigma_z_convention() {
        assert_eq!(sigma_z(0b10, 0), 1.0);
        assert_eq!(sigma_z(0b10, 1), -1.0);
    }

    #[test]
    fn chain_pairs() {
        let c = pairs_at_distance(Geometry::Chain { len: 10 }, 3).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.pairs[0], (0, 3));
        assert!(pairs_at_distance(Geometry::Chain { len: 10 }, 10).is_err());
        assert!(pairs_at_distance(Geometry::Chain { len: 10 }, 0).is_err());
    }

    /// Brute-force count of torus pairs from the minimum-image displacement.
    fn torus_brute(lx: usize, ly: usize, diag: bool) -> usize {
        let wrap = |d: isize, m: usize| {
            let d = d.rem_euclid(m as isize) as usize;
            d.min(m - d)
        };
        let mut count = 0;
        for a in 0..lx * ly {
            for b in a + 1..lx * ly {
                let dx = wrap((a % lx) as isize - (b % lx) as isize, lx);
                let dy = wrap((a / lx) as isize - (b / lx) as isize, ly);
                let hit = if diag { dx == 1 && dy == 1 } else { dx + dy == 1 };
                count += hit as usize;
            }
        }
        count
    }

    #[test]
    fn torus_pairs() {
        let g = Geometry::Torus { lx: 3, ly: 3 };
        let bonds = pairs_at_distance(g, 1).unwrap();
        let diags = pairs_at_distance(g, 2).unwrap();
        assert_eq!(bonds.len(), 18);
        assert_eq!(diags.len(), 18);
        assert_eq!(torus_brute(3, 3, false), 18);
        assert_eq!(torus_brute(3, 3, true), 18);
        assert_eq!(pairs_at_distance(Geometry::Torus { lx: 4, ly: 3 }, 1).unwrap().len(), torus_brute(4, 3, false));
        assert_eq!(pairs_at_distance(Geometry::Torus { lx: 4, ly: 3 }, 2).unwrap().len(), torus_brute(4, 3, true));
        assert!(pairs_at_distance(g, 3).is_err());
        let overlap: Vec<_> = bonds.pairs.iter().filter(|p| diags.pairs.contains(p)).collect();
        assert!(overlap.is_empty());
    }

    #[test]
    fn all_pairs_counts() {
        assert_eq!(all_pairs(2).len(), 1);
        assert_eq!(all_pairs(12).len(), 66);
        assert_eq!(all_pairs(6).len(), 15);
    }

    #[test]
    fn chain_classes_partition_all_pairs() {
        for l in 2..=12 {
            let mut union: Vec<_> = (1..l)
                .flat_map(|n| pairs_at_distance(Geometry::Chain { len: l }, n).unwrap().pairs)
                .collect();
            union.sort();
            let before = union.len();
            union.dedup();
            assert_eq!(before, union.len());
            assert_eq!(union, all_pairs(l).pairs);
        }
    }
}
