use crate::{CircuitError, Result};
use hent_core::{ProductState, PureState, C64};
use rand::Rng;

/// `(|base⟩ + ε|φ⟩)/√N` with `N = 1 + ε² + 2ε Re a`, `a = ⟨base|φ⟩`.
#[derive(Debug, Clone)]
pub struct PerturbedState {
    pub state: PureState,
    pub a_t: C64,
    pub n_t: f64,
}

pub fn perturbed_state(phi_t: &PureState, epsilon: f64, base: &PureState) -> Result<PerturbedState> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(CircuitError::InvalidParameter(format!(
            "epsilon = {epsilon} outside (0, 1)"
        )));
    }
    phi_t.require_normalized()?;
    base.require_normalized()?;
    let a_t = base.inner(phi_t)?;
    let n_t = 1.0 + epsilon * epsilon + 2.0 * epsilon * a_t.re;
    if !(n_t > 0.0) {
        return Err(CircuitError::Normalization(n_t));
    }
    if epsilon == 0.0 {
        return Ok(PerturbedState {
            state: base.clone(),
            a_t,
            n_t,
        });
    }
    let scale = 1.0 / n_t.sqrt();
    let amps = base
        .amplitudes()
        .iter()
        .zip(phi_t.amplitudes())
        .map(|(b, p)| (b + p * epsilon) * scale)
        .collect();
    let state = PureState::from_amplitudes(base.n_qubits(), amps)?;
    Ok(PerturbedState { state, a_t, n_t })
}

/// Initial state of the U(1) ensemble: `|0⟩` on the centre site and `|±⟩`
/// elsewhere, with sign bit `k` of `signs` used for the `k`-th non-centre
/// site (set = `|−⟩`).
pub fn u1_initial_state_from_signs(n_qubits: usize, center: usize, signs: u64) -> ProductState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = 0;
    let sites = (0..n_qubits)
        .map(|site| {
            if site == center {
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
            } else {
                let minus = (signs >> k) & 1 == 1;
                k += 1;
                [C64::new(h, 0.0), C64::new(if minus { -h } else { h }, 0.0)]
            }
        })
        .collect();
    ProductState::new(sites).expect("unit-norm site vectors")
}

pub fn sample_u1_initial_state(n_qubits: usize, center: usize, rng: &mut impl Rng) -> Result<ProductState> {
    if !n_qubits.is_multiple_of(2) || n_qubits == 0 || n_qubits > 64 {
        return Err(CircuitError::InvalidParameter(format!(
            "U(1) initial state needs even L ≤ 64, got {n_qubits}"
        )));
    }
    let signs: u64 = rng.random::<u64>() & ((1u64 << (n_qubits - 1)) - 1);
    Ok(u1_initial_state_from_signs(n_qubits, center, signs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hent_core::gates::Pauli;

    #[test]
    fn collinear_case() {
        let base = PureState::zero(3);
        let p = perturbed_state(&base, 0.4, &base).unwrap();
        assert!((p.n_t - 1.96).abs() < 1e-15);
        for (a, b) in p.state.amplitudes().iter().zip(base.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_case() {
        let base = PureState::zero(3);
        let mut phi = base.clone();
        phi.apply_pauli(Pauli::X, 2).unwrap();
        let p = perturbed_state(&phi, 0.4, &base).unwrap();
        assert_eq!(p.a_t, C64::new(0.0, 0.0));
        assert!((p.n_t - 1.16).abs() < 1e-15);
        assert!((p.state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_epsilon_returns_base() {
        let base = PureState::zero(2);
        let mut phi = base.clone();
        phi.apply_pauli(Pauli::X, 0).unwrap();
        let p = perturbed_state(&phi, 0.0, &base).unwrap();
        assert_eq!(p.state.amplitudes(), base.amplitudes());
        assert!(perturbed_state(&phi, 1.0, &base).is_err());
    }

    #[test]
    fn u1_state_marginals() {
        let s = u1_initial_state_from_signs(6, 2, 0b10110).to_pure();
        // ⟨Z_2⟩ = +1
        let mut z = s.clone();
        z.apply_pauli(Pauli::Z, 2).unwrap();
        assert!((s.inner(&z).unwrap().re - 1.0).abs() < 1e-15);
        for (site, expect) in [(0, 1.0), (1, -1.0), (3, -1.0), (4, 1.0), (5, -1.0)] {
            let mut x = s.clone();
            x.apply_pauli(Pauli::X, site).unwrap();
            assert!((s.inner(&x).unwrap().re - expect).abs() < 1e-15);
        }
    }
}
