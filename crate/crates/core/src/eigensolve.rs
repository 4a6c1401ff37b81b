//! Full eigendecomposition of dense Hermitian matrices.
//!
//! The backend is faer's self-adjoint divide-and-conquer solver. Real input
//! is routed to the real solver, which is several times faster than the
//! complex one. Two optional hints let callers expose more structure:
//!
//! * a diagonal phase gauge `D` such that `D† H D` is real;
//! * a partition of the basis into invariant subspaces, each solved alone.
//!
//! Either way the result is expressed in the original basis, sorted ascending.

use faer::{c64, Mat, Side};

use crate::error::{Error, Result};
use crate::hamiltonian::HermitianMatrix;

/// Relative Hermiticity tolerance accepted on input.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (column `k` belongs to `values[k]`).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Mat<c64>,
}

/// Accuracy figures of a decomposition against the matrix it came from.
#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    /// `max_k ‖H v_k − λ_k v_k‖₂`.
    pub max_residual: f64,
    /// `max |V†V − I|`.
    pub orthogonality: f64,
    /// `|Σλ − tr H|`.
    pub trace_error: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvector `k` as a contiguous slice of basis amplitudes.
    pub fn vector(&self, k: usize) -> &[c64] {
        self.vectors.col_as_slice(k)
    }

    pub fn diagnostics(&self, h: &HermitianMatrix) -> Diagnostics {
        let n = self.dim();
        let hv = h.as_mat() * self.vectors.as_ref();
        let mut max_residual = 0.0f64;
        for k in 0..n {
            let r: f64 = (0..n)
                .map(|i| (hv[(i, k)] - self.vectors[(i, k)] * self.values[k]).norm_sqr())
                .sum();
            max_residual = max_residual.max(r.sqrt());
        }
        let gram = self.vectors.adjoint() * self.vectors.as_ref();
        let mut orthogonality = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                orthogonality = orthogonality.max((gram[(i, j)] - target).norm());
            }
        }
        let trace_error = (self.values.iter().sum::<f64>() - h.trace().re).abs();
        Diagnostics {
            max_residual,
            orthogonality,
            trace_error,
        }
    }
}

/// Structure a caller knows about `H`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveHints<'a> {
    /// Phases `d` with `D† H D` real, `D = diag(d)`.
    pub gauge: Option<&'a [c64]>,
    /// Disjoint basis-index sets, each invariant under `H`, covering the space.
    pub blocks: Option<&'a [Vec<usize>]>,
}

fn check_hermitian(h: &HermitianMatrix) -> Result<()> {
    let scale = h.max_abs();
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: max |H - H†| = {defect:e} (max |H| = {scale:e})"
        )));
    }
    if !scale.is_finite() {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    Ok(())
}

fn solver_error(dim: usize, h: &HermitianMatrix) -> Error {
    Error::Solver(format!(
        "no convergence for {dim}x{dim} matrix (max |H| = {:e}, trace = {:e})",
        h.max_abs(),
        h.trace().re
    ))
}

/// Decomposes one dense block. Returns ascending values and complex vectors.
fn solve_dense(h: &HermitianMatrix) -> Result<(Vec<f64>, Mat<c64>)> {
    let n = h.dim();
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    if h.max_imag() == 0.0 {
        let evd = h
            .real_part()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| solver_error(n, h))?;
        let values = (0..n).map(|k| evd.S()[k]).collect();
        let u = evd.U();
        Ok((values, Mat::from_fn(n, n, |i, j| c64::new(u[(i, j)], 0.0))))
    } else {
        let evd = h
            .as_mat()
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| solver_error(n, h))?;
        let values = (0..n).map(|k| evd.S()[k].re).collect();
        Ok((values, evd.U().to_owned()))
    }
}

/// Full decomposition of a Hermitian matrix.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<EigenSystem> {
    eig_hermitian_with(h, SolveHints::default())
}

/// Full decomposition using structural hints; the result is identical in
/// meaning to [`eig_hermitian`].
pub fn eig_hermitian_with(h: &HermitianMatrix, hints: SolveHints<'_>) -> Result<EigenSystem> {
    check_hermitian(h)?;
    let n = h.dim();

    let gauged;
    let (work, phases) = match hints.gauge {
        Some(phases) => {
            if phases.len() != n {
                return Err(Error::arg("gauge length does not match matrix dimension"));
            }
            let g = h.conjugate_by_phases(phases);
            let tol = 1e-14 * g.max_abs();
            if g.max_imag() <= tol {
                gauged = HermitianMatrix::from_fn(n, |i, j| c64::new(g.get(i, j).re, 0.0));
                (&gauged, Some(phases))
            } else {
                (h, None)
            }
        }
        None => (h, None),
    };

    let (values, mut vectors) = match hints.blocks {
        None => solve_dense(work)?,
        Some(blocks) => solve_blocked(work, blocks)?,
    };

    if let Some(phases) = phases {
        for j in 0..n {
            for (i, d) in phases.iter().enumerate() {
                vectors[(i, j)] = *d * vectors[(i, j)];
            }
        }
    }

    if values.iter().any(|v| !v.is_finite()) {
        return Err(solver_error(n, h));
    }
    Ok(EigenSystem { values, vectors })
}

fn solve_blocked(h: &HermitianMatrix, blocks: &[Vec<usize>]) -> Result<(Vec<f64>, Mat<c64>)> {
    let n = h.dim();
    let mut owner = vec![usize::MAX; n];
    for (bi, block) in blocks.iter().enumerate() {
        for &i in block {
            if i >= n || owner[i] != usize::MAX {
                return Err(Error::arg("blocks must partition the basis"));
            }
            owner[i] = bi;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::arg("blocks must cover the basis"));
    }
    let scale = h.max_abs();
    for j in 0..n {
        for i in 0..n {
            if owner[i] != owner[j] && h.get(i, j).norm() > 1e-14 * scale {
                return Err(Error::arg(format!(
                    "entry ({i}, {j}) couples different blocks"
                )));
            }
        }
    }

    let mut parts = Vec::with_capacity(blocks.len());
    for block in blocks {
        let sub = HermitianMatrix::from_fn(block.len(), |a, b| h.get(block[a], block[b]));
        parts.push(solve_dense(&sub)?);
    }

    let mut order: Vec<(f64, usize, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(bi, (vals, _))| vals.iter().enumerate().map(move |(k, &v)| (v, bi, k)))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut vectors = Mat::<c64>::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &(v, bi, k)) in order.iter().enumerate() {
        values.push(v);
        let local = &parts[bi].1;
        for (a, &i) in blocks[bi].iter().enumerate() {
            vectors[(i, col)] = local[(a, k)];
        }
    }
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{self, Model1d, Model2d, ModelSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Mat::<c64>::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let re = rng.random::<f64>() - 0.5;
                let im = if i == j { 0.0 } else { rng.random::<f64>() - 0.5 };
                m[(i, j)] = c64::new(re, im);
                m[(j, i)] = c64::new(re, -im);
            }
        }
        HermitianMatrix::from_mat(m)
    }

    fn spectral_norm_bound(h: &HermitianMatrix) -> f64 {
        // Frobenius norm bounds the 2-norm from above.
        let n = h.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| h.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check_invariants(h: &HermitianMatrix, es: &EigenSystem) {
        let d = es.diagnostics(h);
        let norm = spectral_norm_bound(h);
        assert!(d.max_residual <= 1e-10 * norm, "residual {}", d.max_residual);
        assert!(d.orthogonality <= 1e-10, "orthogonality {}", d.orthogonality);
        assert!(d.trace_error <= 1e-8 * h.dim() as f64 * h.max_abs());
        assert!(es.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn pauli_x() {
        let h = HermitianMatrix::from_fn(2, |i, j| c64::new((i != j) as u8 as f64, 0.0));
        let es = eig_hermitian(&h).unwrap();
        assert!((es.values[0] + 1.0).abs() < 1e-15);
        assert!((es.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sorts_diagonal() {
        let d = [3.0, 1.0, 2.0];
        let h = HermitianMatrix::from_fn(3, |i, j| c64::new(if i == j { d[i] } else { 0.0 }, 0.0));
        let es = eig_hermitian(&h).unwrap();
        assert_eq!(es.values, vec![1.0, 2.0, 3.0]);
        // eigenvector of value 1 is e_1, up to phase
        assert!((es.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((es.vectors[(2, 1)].norm() - 1.0).abs() < 1e-15);
        assert!((es.vectors[(0, 2)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        let h = random_hermitian(6, 1);
        let es = eig_hermitian(&h).unwrap();
        let lambda = Mat::<c64>::from_fn(6, 6, |i, j| {
            if i == j { c64::new(es.values[i], 0.0) } else { c64::new(0.0, 0.0) }
        });
        let rebuilt = &es.vectors * &lambda * es.vectors.adjoint();
        let scale = h.max_abs();
        for i in 0..6 {
            for j in 0..6 {
                assert!((rebuilt[(i, j)] - h.get(i, j)).norm() <= 1e-10 * scale);
            }
        }
        check_invariants(&h, &es);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = HermitianMatrix::from_fn(2, |i, j| c64::new((i + 2 * j) as f64, 0.0));
        assert!(matches!(eig_hermitian(&h), Err(Error::Validation(_))));
    }

    #[test]
    fn gauge_and_blocks_agree_with_plain_solve() {
        let spec = Model1d {
            len: 6,
            range: 5,
            coupling: 0.5,
            ..Model1d::default()
        };
        let real = hamiltonian::sample_realization(&ModelSpec::OneD(spec), 3);
        let h = hamiltonian::build_h_1d(&spec, &real).unwrap();
        let plain = eig_hermitian(&h).unwrap();
        let phases = hamiltonian::quarter_turn_gauge(6);
        let gauged = eig_hermitian_with(&h, SolveHints { gauge: Some(&phases), blocks: None }).unwrap();
        check_invariants(&h, &plain);
        check_invariants(&h, &gauged);
        for (a, b) in plain.values.iter().zip(&gauged.values) {
            assert!((a - b).abs() < 1e-10);
        }

        let lattice = Model2d { coupling: 0.02, ..Model2d::default() };
        let real = hamiltonian::sample_realization(&ModelSpec::TwoD(lattice), 3);
        let h = hamiltonian::build_h_2d(&lattice, &real).unwrap();
        let parity: Vec<Vec<usize>> = (0..2)
            .map(|p| (0..512).filter(|b: &usize| b.count_ones() as usize % 2 == p).collect())
            .collect();
        let plain = eig_hermitian(&h).unwrap();
        let blocked = eig_hermitian_with(&h, SolveHints { gauge: None, blocks: Some(&parity) }).unwrap();
        check_invariants(&h, &blocked);
        for (a, b) in plain.values.iter().zip(&blocked.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_blocks_rejected() {
        let h = random_hermitian(4, 2);
        let blocks = vec![vec![0, 1], vec![2, 3]];
        assert!(eig_hermitian_with(&h, SolveHints { gauge: None, blocks: Some(&blocks) }).is_err());
        let overlapping = vec![vec![0, 1, 2], vec![2, 3]];
        assert!(eig_hermitian_with(&h, SolveHints { gauge: None, blocks: Some(&overlapping) }).is_err());
    }

    #[test]
    fn lattice_at_zero_coupling_gives_sorted_diagonal() {
        let spec = Model2d::default();
        let real = hamiltonian::sample_realization(&ModelSpec::TwoD(spec), 8);
        let h = hamiltonian::build_h_2d(&spec, &real).unwrap();
        let mut diag: Vec<f64> = (0..512).map(|i| h.get(i, i).re).collect();
        diag.sort_by(f64::total_cmp);
        let es = eig_hermitian(&h).unwrap();
        for (a, b) in es.values.iter().zip(&diag) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn weyl_bound_under_small_coupling_change() {
        let base = Model1d { len: 5, range: 2, coupling: 0.3, ..Model1d::default() };
        let real = hamiltonian::sample_realization(&ModelSpec::OneD(base), 4);
        let nudged = Model1d { coupling: 0.3 + 1e-3, ..base };
        let h1 = hamiltonian::build_h_1d(&base, &real).unwrap();
        let h2 = hamiltonian::build_h_1d(&nudged, &real).unwrap();
        let dv = spectral_norm_bound(&(&h2 - &h1));
        let e1 = eig_hermitian(&h1).unwrap();
        let e2 = eig_hermitian(&h2).unwrap();
        for (a, b) in e1.values.iter().zip(&e2.values) {
            assert!((a - b).abs() <= dv + 1e-12);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn invariants_hold_for_random_hermitian(n in 1usize..24, seed in 0u64..1000) {
            let h = random_hermitian(n, seed);
            let es = eig_hermitian(&h).unwrap();
            check_invariants(&h, &es);
        }
    }
}
