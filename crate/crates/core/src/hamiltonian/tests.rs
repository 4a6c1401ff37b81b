use super::*;
use crate::eigensolve::eig_hermitian;

type Dense = Vec<Vec<c64>>;

fn c(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

fn pauli(name: char) -> Dense {
    match name {
        'i' => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]],
        'x' => vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]],
        'y' => vec![vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]],
        'z' => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]],
        _ => unreachable!(),
    }
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (na, nb) = (a.len(), b.len());
    let mut out = vec![vec![c(0., 0.); na * nb]; na * nb];
    for i in 0..na {
        for j in 0..na {
            for k in 0..nb {
                for l in 0..nb {
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Pauli string with `ops[q]` on qubit `q`; qubit 0 is the least significant
/// factor, matching the basis convention.
fn pauli_string(n: usize, ops: &[(usize, char)]) -> Dense {
    let mut m = vec![vec![c(1., 0.)]];
    for q in (0..n).rev() {
        let name = ops.iter().find(|(p, _)| *p == q).map_or('i', |(_, o)| *o);
        m = kron(&m, &pauli(name));
    }
    m
}

fn axpy(acc: &mut Dense, alpha: f64, x: &Dense) {
    for (row, xrow) in acc.iter_mut().zip(x) {
        for (a, b) in row.iter_mut().zip(xrow) {
            *a += b * alpha;
        }
    }
}

fn assert_close(h: &HermitianMatrix, oracle: &Dense, tol: f64) {
    assert_eq!(h.dim(), oracle.len());
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let d = (h.get(i, j) - oracle[i][j]).norm();
            assert!(d <= tol, "entry ({i},{j}): {} vs {}", h.get(i, j), oracle[i][j]);
        }
    }
}

fn oracle_v_1d(spec: &Model1d, real: &DisorderRealization) -> Dense {
    let n = spec.len;
    let mut v = vec![vec![c(0., 0.); 1 << n]; 1 << n];
    for d in &real.couplings {
        let (j, k) = d.pair;
        let jjk = spec.coupling * d.unit;
        let (aj, bj) = spec.rotation(j);
        let (ak, bk) = spec.rotation(k);
        axpy(&mut v, -0.5 * jjk * bj * bk, &pauli_string(n, &[(j, 'z'), (k, 'z')]));
        axpy(&mut v, -0.5 * jjk * aj * ak, &pauli_string(n, &[(j, 'y'), (k, 'y')]));
        axpy(&mut v, 0.5 * jjk * aj * bk, &pauli_string(n, &[(j, 'y'), (k, 'z')]));
        axpy(&mut v, 0.5 * jjk * ak * bj, &pauli_string(n, &[(j, 'z'), (k, 'y')]));
    }
    v
}

fn chain(len: usize, range: usize, coupling: f64) -> Model1d {
    Model1d {
        len,
        gradient: 1.0,
        rabi: 100.0,
        coupling,
        range,
    }
}

#[test]
fn lattice_without_coupling_is_diagonal() {
    let spec = Model2d::default();
    let real = sample_realization(&ModelSpec::TwoD(spec), 3);
    let h = build_h_2d(&spec, &real).unwrap();
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            if i != j {
                assert_eq!(h.get(i, j), c(0., 0.));
            }
        }
        let expect: f64 = (0..9).map(|q| real.splittings[q] * crate::basis::sigma_z(i, q)).sum();
        assert!((h.get(i, i).re - expect).abs() < 1e-14);
    }
}

#[test]
fn two_site_lattice_spectrum() {
    // 2×1 torus: one bond. Oracle: blocks [[2, g], [g, -2]] and [[0, g], [g, 0]].
    let g = 0.37;
    let spec = Model2d {
        lx: 2,
        ly: 1,
        coupling: 1.0,
        ..Model2d::default()
    };
    let real = DisorderRealization {
        seed: 0,
        splittings: vec![1.0, 1.0],
        couplings: vec![PairDraw { pair: (0, 1), unit: g }],
    };
    let h = build_h_2d(&spec, &real).unwrap();
    let es = eig_hermitian(&h).unwrap();
    let r = (4.0f64 + g * g).sqrt();
    let expect = [-r, -g, g, r];
    for (a, b) in es.values.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn lattice_matches_pauli_oracle() {
    for (lx, ly) in [(2, 2), (3, 1), (2, 3)] {
        let spec = Model2d {
            lx,
            ly,
            coupling: 0.05,
            ..Model2d::default()
        };
        let real = sample_realization(&ModelSpec::TwoD(spec), 42);
        let n = spec.n_qubits();
        let mut oracle = vec![vec![c(0., 0.); 1 << n]; 1 << n];
        for (q, g) in real.splittings.iter().enumerate() {
            axpy(&mut oracle, *g, &pauli_string(n, &[(q, 'z')]));
        }
        for d in &real.couplings {
            axpy(&mut oracle, spec.coupling * d.unit, &pauli_string(n, &[(d.pair.0, 'x'), (d.pair.1, 'x')]));
        }
        let h = build_h_2d(&spec, &real).unwrap();
        assert_close(&h, &oracle, 1e-14);
        assert_eq!(h.max_imag(), 0.0);
        assert!(h.trace().norm() < 1e-12);
    }
}

#[test]
fn capacity_error() {
    let spec = Model2d {
        lx: 5,
        ly: 4,
        ..Model2d::default()
    };
    let real = DisorderRealization {
        seed: 0,
        splittings: vec![1.0; 20],
        couplings: vec![],
    };
    assert!(matches!(build_h_2d(&spec, &real), Err(Error::Capacity(_))));
}

#[test]
fn single_spin_h0() {
    let spec = Model1d {
        len: 1,
        ..chain(2, 1, 0.0)
    };
    let h = build_h0_1d(&spec).unwrap();
    let e = 0.5 * 10001f64.sqrt();
    assert!((h.get(0, 0).re - e).abs() < 1e-12);
    assert!((h.get(1, 1).re + e).abs() < 1e-12);
}

#[test]
fn two_spin_h0() {
    let spec = chain(2, 1, 0.0);
    let h = build_h0_1d(&spec).unwrap();
    let e1 = (1.0f64 + 1e4).sqrt();
    let e2 = (4.0f64 + 1e4).sqrt();
    let expect = [0.5 * (e1 + e2), 0.5 * (-e1 + e2), 0.5 * (e1 - e2), -0.5 * (e1 + e2)];
    for (b, e) in expect.iter().enumerate() {
        assert!((h.get(b, b).re - e).abs() < 1e-12);
    }
}

#[test]
fn central_band_is_isolated() {
    let spec = chain(12, 11, 0.0);
    let diag = h0_1d_diagonal(&spec);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut outside_gap = f64::INFINITY;
    for (b, e) in diag.iter().enumerate() {
        if crate::basis::up_count(b, 12) == 6 {
            lo = lo.min(*e);
            hi = hi.max(*e);
        }
    }
    for (b, e) in diag.iter().enumerate() {
        if crate::basis::up_count(b, 12) != 6 {
            outside_gap = outside_gap.min((e - lo).abs().min((e - hi).abs()));
        }
    }
    let width = hi - lo;
    // adjacent bands sit roughly Ω = 100 away
    assert!(width < 10.0, "band width {width}");
    assert!(outside_gap > 80.0, "gap {outside_gap}");
}

#[test]
fn rotation_is_normalized() {
    let spec = chain(12, 11, 1.0);
    for q in 0..12 {
        let (a, b) = spec.rotation(q);
        assert!((a * a + b * b - 1.0).abs() < 1e-15);
    }
}

#[test]
fn chain_matches_pauli_oracle() {
    for (len, range) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        let spec = chain(len, range, 0.3);
        let real = sample_realization(&ModelSpec::OneD(spec), 9);
        let v = build_v_1d(&spec, &real).unwrap();
        assert_close(&v, &oracle_v_1d(&spec, &real), 1e-14);
    }
}

#[test]
fn two_spin_interaction_by_hand() {
    // L = 2, one pair with J₁₂ = g. Basis order |00⟩,|10⟩ (b=1: qubit 0 down),
    // |01⟩ (b=2), |11⟩ (b=3).
    let g = 0.8;
    let spec = chain(2, 1, 1.0);
    let real = DisorderRealization {
        seed: 0,
        splittings: vec![],
        couplings: vec![PairDraw { pair: (0, 1), unit: g }],
    };
    let (a1, b1) = spec.rotation(0);
    let (a2, b2) = spec.rotation(1);
    let v = build_v_1d(&spec, &real).unwrap();
    let d = -0.5 * g * b1 * b2;
    // diagonal: z₁z₂ = +1, -1, -1, +1
    for (b, s) in [1.0, -1.0, -1.0, 1.0].iter().enumerate() {
        assert!((v.get(b, b).re - d * s).abs() < 1e-15);
    }
    // σʸσʸ: ⟨11|σʸσʸ|00⟩ = -1, ⟨10|σʸσʸ|01⟩ = +1
    assert!((v.get(3, 0).re - 0.5 * g * a1 * a2).abs() < 1e-15);
    assert!((v.get(1, 2).re + 0.5 * g * a1 * a2).abs() < 1e-15);
    // σʸ₁σᶻ₂ |00⟩ = i |10⟩ and σᶻ₁σʸ₂ |00⟩ = i |01⟩
    assert!((v.get(1, 0) - c(0., 0.5 * g * a1 * b2)).norm() < 1e-15);
    assert!((v.get(2, 0) - c(0., 0.5 * g * a2 * b1)).norm() < 1e-15);
    assert!(v.hermiticity_defect() == 0.0);
}

#[test]
fn band_selection_rule() {
    let spec = chain(6, 5, 1.0);
    let real = sample_realization(&ModelSpec::OneD(spec), 4);
    let v = build_v_1d(&spec, &real).unwrap();
    for m in 0..v.dim() {
        for n in 0..v.dim() {
            let x = v.get(m, n);
            if m == n || x.norm() == 0.0 {
                continue;
            }
            let flips = (m ^ n).count_ones();
            let du = crate::basis::up_count(m, 6) as i64 - crate::basis::up_count(n, 6) as i64;
            match flips {
                2 => {
                    assert_eq!(x.im, 0.0);
                    assert!(du == 0 || du.abs() == 2);
                }
                1 => {
                    assert_eq!(x.re, 0.0);
                    assert_eq!(du.abs(), 1);
                }
                _ => panic!("coupling across {flips} flipped spins"),
            }
        }
    }
}

#[test]
fn range_errors() {
    let real = DisorderRealization {
        seed: 0,
        splittings: vec![],
        couplings: vec![],
    };
    assert!(build_v_1d(&chain(6, 6, 1.0), &real).is_err());
    assert!(build_v_1d(&chain(6, 0, 1.0), &real).is_err());
}

#[test]
fn chain_invariants() {
    let spec = chain(7, 3, 0.1);
    let real = sample_realization(&ModelSpec::OneD(spec), 12);
    let h0 = build_h0_1d(&spec).unwrap();
    let v = build_v_1d(&spec, &real).unwrap();
    let h = build_h_1d(&spec, &real).unwrap();
    assert!(h.hermiticity_defect() <= 1e-12 * h.max_abs());
    assert!(h.trace().norm() < 1e-10);
    assert!(v.trace().norm() < 1e-12);
    assert!((&h - &(&h0 + &v)).max_abs() < 1e-12);

    let zero = Model1d { coupling: 0.0, ..spec };
    let h_zero = build_h_1d(&zero, &real).unwrap();
    assert_eq!(h_zero, h0);

    let double = Model1d { coupling: 0.2, ..spec };
    let v2 = build_v_1d(&double, &real).unwrap();
    for i in 0..v.dim() {
        for j in 0..v.dim() {
            assert_eq!(v2.get(i, j), v.get(i, j) * 2.0);
        }
    }
}

#[test]
fn quarter_turn_gauge_makes_chain_real() {
    let spec = chain(6, 5, 0.7);
    let real = sample_realization(&ModelSpec::OneD(spec), 2);
    let h = build_h_1d(&spec, &real).unwrap();
    assert!(h.max_imag() > 0.0);
    let g = h.conjugate_by_phases(&quarter_turn_gauge(6));
    assert!(g.max_imag() < 1e-15);
}
