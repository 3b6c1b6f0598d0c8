//! Exact enumeration of the U(1) sign-averaged centre expectation and the
//! infinite-temperature autocorrelator it equals.

use crate::circuit::{center_site, heisenberg_state, CircuitRealization};
use crate::perturbed::u1_initial_state_from_signs;
use crate::{CircuitError, Result};
use hent_core::PureState;

/// Enumeration is limited to chains of at most this many sites.
pub const MAX_ENUMERATION_SITES: usize = 16;

fn check_size(n: usize) -> Result<()> {
    if !(2..=MAX_ENUMERATION_SITES).contains(&n) {
        return Err(CircuitError::InvalidParameter(format!(
            "enumeration needs 2 ≤ L ≤ {MAX_ENUMERATION_SITES}, got {n}"
        )));
    }
    Ok(())
}

/// Mean of `⟨Φ|Z_c(t)|Φ⟩` over all `2^{L−1}` sign choices of the U(1)
/// initial state, `c` the centre site.
pub fn sign_averaged_center_expectation(circuit: &CircuitRealization, t: usize) -> Result<f64> {
    let n = circuit.n_qubits;
    check_size(n)?;
    let center = center_site(n);
    let count = 1u64 << (n - 1);
    let mut total = 0.0;
    for signs in 0..count {
        let phi = u1_initial_state_from_signs(n, center, signs).to_pure();
        let zt = heisenberg_state(circuit, center, &phi, t)?;
        total += phi.inner(&zt)?.re;
    }
    Ok(total / count as f64)
}

/// `2^{−L} tr[Z_site Z_site(t)]`.
pub fn infinite_temperature_autocorrelator(
    circuit: &CircuitRealization,
    site: usize,
    t: usize,
) -> Result<f64> {
    let n = circuit.n_qubits;
    check_size(n)?;
    let mut trace = 0.0;
    for b in 0..1usize << n {
        let zt = heisenberg_state(circuit, site, &PureState::basis(n, b), t)?;
        let sign = if (b >> site) & 1 == 0 { 1.0 } else { -1.0 };
        trace += sign * zt.amplitudes()[b].re;
    }
    Ok(trace / (1u64 << n) as f64)
}
