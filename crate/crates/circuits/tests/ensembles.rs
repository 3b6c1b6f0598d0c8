use hent_circuits::gates::{haar_unitary, sample_haar_u2, SingleSiteDraw};
use hent_circuits::{
    heisenberg_state, sample_haar_gate, sample_u1_gate, u1_initial_state_from_signs,
    CircuitRealization, EnsembleId, GateOp, Layer,
};
use hent_core::gates::{cz, hadamard, Gate4, Pauli};
use hent_core::rng::derive_stream;
use hent_core::{PureState, C64};

/// Columns `U|b⟩` of the circuit unitary on all basis states.
fn dense_unitary(c: &CircuitRealization, t: usize) -> Vec<Vec<C64>> {
    let d = 1usize << c.n_qubits;
    (0..d)
        .map(|b| {
            let mut s = PureState::basis(c.n_qubits, b);
            c.apply_forward(&mut s, t).unwrap();
            s.into_amplitudes()
        })
        .collect()
}

/// Dense matrix of a Pauli string given as one Pauli per site.
fn pauli_string(paulis: &[Pauli]) -> Vec<Vec<C64>> {
    let n = paulis.len();
    let d = 1usize << n;
    (0..d)
        .map(|b| {
            let mut s = PureState::basis(n, b);
            for (site, p) in paulis.iter().enumerate() {
                s.apply_pauli(*p, site).unwrap();
            }
            s.into_amplitudes()
        })
        .collect()
}

/// `U P U†` from column lists (`cols[b] = M|b⟩`).
fn conjugate(u: &[Vec<C64>], p: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let d = u.len();
    // entries (i, j) = Σ_{k,l} U_ik P_kl conj(U_jl)
    let mut out = vec![vec![C64::new(0.0, 0.0); d]; d];
    for (j, out_col) in out.iter_mut().enumerate() {
        for k in 0..d {
            for l in 0..d {
                let coef = p[l][k] * u[l][j].conj();
                if coef == C64::new(0.0, 0.0) {
                    continue;
                }
                for i in 0..d {
                    out_col[i] += u[k][i] * coef;
                }
            }
        }
    }
    out
}

fn all_pauli_strings(n: usize) -> Vec<Vec<Pauli>> {
    let ps = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (0..4usize.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let p = ps[code % 4];
                    code /= 4;
                    p
                })
                .collect()
        })
        .collect()
}

#[test]
fn haar_second_and_fourth_moments() {
    let mut rng = derive_stream(17, &[0]);
    let n = 10_000;
    let (mut m2, mut m4) = (0.0, 0.0);
    for _ in 0..n {
        let u = sample_haar_gate(&mut rng);
        let p = u[0][0].norm_sqr();
        m2 += p;
        m4 += p * p;
    }
    m2 /= n as f64;
    m4 /= n as f64;
    assert!((m2 - 0.25).abs() <= 0.006, "E|U00|^2 = {m2}");
    // Var|U00|^4 = E|U00|^8 - 0.01 = 144/5040 - 0.01
    let sigma = ((144.0 / 5040.0 - 0.01) / n as f64).sqrt();
    assert!((m4 - 0.1).abs() <= 3.0 * sigma, "E|U00|^4 = {m4}");
}

#[test]
fn u1_block_moments_and_structure() {
    let mut rng = derive_stream(18, &[0]);
    let n = 10_000;
    let mut m2 = 0.0;
    for _ in 0..n {
        let g = sample_u1_gate(&mut rng);
        m2 += g[1][1].norm_sqr();
        // commutes with Z⊗I + I⊗Z = diag(2, 0, 0, -2)
        let q = [2.0, 0.0, 0.0, -2.0];
        for i in 0..4 {
            for j in 0..4 {
                assert!((g[i][j] * (q[j] - q[i])).norm() <= 1e-12);
            }
        }
        assert!((g[0][0].norm() - 1.0).abs() <= 1e-12);
    }
    m2 /= n as f64;
    // Var|V00|^2 = 1/3 - 1/4
    let sigma = ((1.0 / 12.0) / n as f64).sqrt();
    assert!((m2 - 0.5).abs() <= 3.0 * sigma, "E|V00|^2 = {m2}");
}

#[test]
fn haar_u2_is_unitary() {
    let mut rng = derive_stream(19, &[0]);
    let v = sample_haar_u2(&mut rng);
    let g = hent_core::gates::unitarity_residual2(&v);
    assert!(g < 1e-12);
    let big = haar_unitary(8, &mut rng);
    assert!(hent_core::linalg::orthonormality_residual(big.as_ref()) < 1e-12);
}

#[test]
fn t_gate_frequency_at_half() {
    let mut rng = derive_stream(20, &[0]);
    let n = 10_000;
    let hits = (0..n)
        .filter(|_| SingleSiteDraw::sample(0.5, &mut rng).t.is_some())
        .count();
    let f = hits as f64 / n as f64;
    assert!((f - 0.5).abs() <= 0.015, "T frequency {f}");
}

#[test]
fn cz_on_plus_plus() {
    let mut s = PureState::zero(2);
    s.apply_single_site_gate(&hadamard(), 0).unwrap();
    s.apply_single_site_gate(&hadamard(), 1).unwrap();
    let layer = Layer {
        ops: vec![GateOp::Pair {
            sites: (0, 1),
            gate: cz(),
        }],
    };
    layer.apply(&mut s).unwrap();
    let expect = [0.5, 0.5, 0.5, -0.5];
    for (a, e) in s.amplitudes().iter().zip(expect) {
        assert!((a - C64::new(e, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn clifford_circuit_maps_paulis_to_paulis() {
    let c = CircuitRealization::sample(EnsembleId::CliffordT, 4, 3, 5, 0.0).unwrap();
    let u = dense_unitary(&c, 3);
    let strings = all_pauli_strings(4);
    let mats: Vec<_> = strings.iter().map(|p| pauli_string(p)).collect();
    for p in &mats {
        let conj = conjugate(&u, p);
        // exactly one Pauli string has |tr(Q† U P U†)|/16 = 1
        let coefs: Vec<f64> = mats
            .iter()
            .map(|q| {
                let mut tr = C64::new(0.0, 0.0);
                for (qc, cc) in q.iter().zip(&conj) {
                    for (qe, ce) in qc.iter().zip(cc) {
                        tr += qe.conj() * ce;
                    }
                }
                tr.norm() / 16.0
            })
            .collect();
        let ones = coefs.iter().filter(|c| (*c - 1.0).abs() < 1e-12).count();
        let zeros = coefs.iter().filter(|c| c.abs() < 1e-12).count();
        assert_eq!((ones, zeros), (1, 255));
    }
}

#[test]
fn t_gates_break_pauli_mapping() {
    let c = CircuitRealization::sample(EnsembleId::CliffordT, 4, 3, 5, 1.0).unwrap();
    let u = dense_unitary(&c, 3);
    let strings = all_pauli_strings(4);
    let mats: Vec<_> = strings.iter().map(|p| pauli_string(p)).collect();
    let spread = (0..4).any(|site| {
        let mut z = vec![Pauli::I; 4];
        z[site] = Pauli::Z;
        let conj = conjugate(&u, &pauli_string(&z));
        mats.iter().all(|q| {
            let mut tr = C64::new(0.0, 0.0);
            for (qc, cc) in q.iter().zip(&conj) {
                for (qe, ce) in qc.iter().zip(cc) {
                    tr += qe.conj() * ce;
                }
            }
            tr.norm() / 16.0 < 1.0 - 1e-6
        })
    });
    assert!(spread);
}

#[test]
fn two_qubit_heisenberg_matches_dense_conjugation() {
    let c = CircuitRealization::sample(EnsembleId::Haar, 2, 1, 9, 0.0).unwrap();
    let gate: Gate4 = match &c.layers[0].ops[0] {
        GateOp::Pair { gate, .. } => *gate,
        _ => unreachable!(),
    };
    assert!(c.layers[1].ops.is_empty());
    // gate acts on (0, 1): local index 2·q0 + q1, global index q0 + 2·q1
    let local = |g: usize| ((g & 1) << 1) | (g >> 1);
    let u = |i: usize, j: usize| gate[local(i)][local(j)];
    let z = [1.0, -1.0, 1.0, -1.0]; // Z on site 0
    let base = PureState::basis(2, 0);
    let got = heisenberg_state(&c, 0, &base, 1).unwrap();
    for i in 0..4 {
        let mut expect = C64::new(0.0, 0.0);
        for k in 0..4 {
            expect += u(i, k) * z[k] * u(0, k).conj();
        }
        assert!((got.amplitudes()[i] - expect).norm() < 1e-12);
    }
}

#[test]
fn operator_state_stays_normalized() {
    for e in [EnsembleId::Haar, EnsembleId::CliffordT, EnsembleId::U1] {
        let c = CircuitRealization::sample(e, 10, 20, 3, 0.5).unwrap();
        let base = PureState::zero(10);
        for t in [0, 1, 5, 20] {
            let s = heisenberg_state(&c, 4, &base, t).unwrap();
            assert!((s.norm() - 1.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn identical_keys_give_identical_circuits() {
    for e in [EnsembleId::Haar, EnsembleId::CliffordT, EnsembleId::U1] {
        let a = CircuitRealization::sample(e, 8, 6, 42, 0.5).unwrap();
        let b = CircuitRealization::sample(e, 8, 6, 42, 0.5).unwrap();
        assert_eq!(a, b);
        let c = CircuitRealization::sample(e, 8, 6, 43, 0.5).unwrap();
        assert_ne!(a, c);
        // a shallower circuit is a prefix of a deeper one
        let short = CircuitRealization::sample(e, 8, 3, 42, 0.5).unwrap();
        assert_eq!(&a.layers[..short.layers.len()], &short.layers[..]);
    }
}

fn total_z(s: &PureState) -> f64 {
    s.amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let ones = i.count_ones() as f64;
            a.norm_sqr() * (s.n_qubits() as f64 - 2.0 * ones)
        })
        .sum()
}

#[test]
fn u1_circuits_conserve_total_z() {
    let c = CircuitRealization::sample(EnsembleId::U1, 8, 10, 4, 0.0).unwrap();
    let mut rng = derive_stream(4, &[1]);
    for _ in 0..5 {
        use rand::Rng;
        let b: usize = rng.random_range(0..256);
        let s0 = PureState::basis(8, b);
        let z0 = total_z(&s0);
        for t in 1..=10 {
            let mut s = s0.clone();
            c.apply_forward(&mut s, t).unwrap();
            assert!((total_z(&s) - z0).abs() <= 1e-10);
        }
    }
}

/// Exact enumeration of `⟨Φ|Z_c(t)|Φ⟩` over all initial states against
/// `2^{-L} tr[Z_c Z_c(t)]`.
fn autocorrelator_residual(n: usize, t: usize, seed: u64) -> f64 {
    let c = CircuitRealization::sample(EnsembleId::U1, n, t, seed, 0.0).unwrap();
    let center = hent_circuits::center_site(n);
    let count = 1u64 << (n - 1);
    let mut mean = 0.0;
    for signs in 0..count {
        let phi = u1_initial_state_from_signs(n, center, signs).to_pure();
        let zt = heisenberg_state(&c, center, &phi, t).unwrap();
        mean += phi.inner(&zt).unwrap().re;
    }
    mean /= count as f64;
    let mut trace = 0.0;
    for b in 0..1usize << n {
        let basis = PureState::basis(n, b);
        let zt = heisenberg_state(&c, center, &basis, t).unwrap();
        let sign = if (b >> center) & 1 == 0 { 1.0 } else { -1.0 };
        trace += sign * zt.amplitudes()[b].re;
    }
    (mean - trace / (1u64 << n) as f64).abs()
}

#[test]
fn u1_autocorrelator_identity_l6() {
    for t in [1, 3, 6] {
        assert!(autocorrelator_residual(6, t, 7) <= 1e-12);
    }
}

#[test]
fn u1_autocorrelator_identity_l8() {
    assert!(autocorrelator_residual(8, 4, 8) <= 1e-12);
}
