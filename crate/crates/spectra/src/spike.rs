use crate::{Result, SpectraError};
use faer::Mat;
use hent_core::density::reduced_gram;
use hent_core::linalg::max_abs;
use hent_core::{DensityMatrix, ProductState, PureState, Region, C64};

/// Below this `⟨y|y⟩` the state is treated as a pure spike.
pub const CLOUD_WEIGHT_FLOOR: f64 = 1e-14;

/// `ρ_A = (1 − μ)|v⟩⟨v| + μ ω` for `(|0⟩ + ε φ)/√N_t`, with
/// `φ = |x⟩_A ⊗ |0_B⟩ + |y⟩` and `⟨0_B|y⟩ = 0`.
#[derive(Debug, Clone)]
pub struct SpikeCloud {
    pub a_t: C64,
    pub n_t: f64,
    /// Unnormalized, on `cut`.
    pub x: PureState,
    pub y_norm_sq: f64,
    pub mu: f64,
    /// Unit norm, on `cut`.
    pub v: PureState,
    /// `None` for a pure spike (`⟨y|y⟩ ≤ CLOUD_WEIGHT_FLOOR`).
    pub omega: Option<DensityMatrix>,
    pub epsilon: f64,
    pub cut: Region,
}

pub fn spike_cloud_decompose(
    phi_t: &PureState,
    epsilon: f64,
    base: &ProductState,
    cut: &Region,
) -> Result<SpikeCloud> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SpectraError::InvalidArgument(format!(
            "epsilon = {epsilon} outside (0, 1)"
        )));
    }
    phi_t.require_normalized()?;
    if base.n_qubits() != phi_t.n_qubits() || cut.n_qubits() != phi_t.n_qubits() {
        return Err(SpectraError::InvalidArgument(
            "state, base and cut sizes differ".into(),
        ));
    }
    let b = cut
        .contiguous_complement()
        .ok_or(SpectraError::NonContiguousComplement(*cut))?;
    let base_pure = base.to_pure();
    let a_t = base_pure.inner(phi_t)?;
    let n_t = 1.0 + epsilon * epsilon + 2.0 * epsilon * a_t.re;

    let proj = phi_t.partial_project(&b, &base.vector_on(&b))?;
    let y_norm_sq = proj.y.norm_sqr();
    let mu = epsilon * epsilon * y_norm_sq / n_t;

    let base_a = base.vector_on(cut);
    let scale = 1.0 / (n_t * (1.0 - mu)).sqrt();
    let v_amps = base_a
        .iter()
        .zip(proj.x.amplitudes())
        .map(|(o, x)| (o + x * epsilon) * scale)
        .collect();
    let mut v = PureState::from_amplitudes(cut.len(), v_amps)?;
    let vn = v.norm();
    if (vn - 1.0).abs() > 1e-10 {
        return Err(SpectraError::InvalidArgument(format!("‖v‖ = {vn}")));
    }
    v.normalize()?;

    let (mu, omega) = if y_norm_sq > CLOUD_WEIGHT_FLOOR {
        let gram = reduced_gram(&proj.y, cut)?;
        let omega = Mat::from_fn(gram.nrows(), gram.ncols(), |i, j| gram[(i, j)] / y_norm_sq);
        (mu, Some(DensityMatrix::new(omega)?))
    } else {
        (0.0, None)
    };
    Ok(SpikeCloud {
        a_t,
        n_t,
        x: proj.x,
        y_norm_sq,
        mu,
        v,
        omega,
        epsilon,
        cut: *cut,
    })
}

impl SpikeCloud {
    /// `(1 − μ)|v⟩⟨v| + μ ω`.
    pub fn reconstruct(&self) -> Mat<C64> {
        let v = self.v.amplitudes();
        let d = v.len();
        Mat::from_fn(d, d, |i, j| {
            let spike = v[i] * v[j].conj() * (1.0 - self.mu);
            match &self.omega {
                Some(w) => spike + w.as_mat()[(i, j)] * self.mu,
                None => spike,
            }
        })
    }

    /// `max |(1 − μ)vv† + μω − ρ_A|`.
    pub fn reconstruction_residual(&self, rho_a: &DensityMatrix) -> f64 {
        let diff = self.reconstruct() - rho_a.as_mat();
        max_abs(diff.as_ref())
    }

    /// `ε²/(1 + ε²)`, the long-time cloud weight when `a_t, ‖x‖ → 0`.
    pub fn mu_infinity(epsilon: f64) -> f64 {
        epsilon * epsilon / (1.0 + epsilon * epsilon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hent_core::gates::Pauli;
    use hent_core::reduced_density;

    #[test]
    fn unscrambled_operator_gives_pure_spike() {
        let base = ProductState::zero(6);
        let phi = base.to_pure();
        let cut = Region::first_half(6).unwrap();
        let c = spike_cloud_decompose(&phi, 0.4, &base, &cut).unwrap();
        assert_eq!(c.mu, 0.0);
        assert!(c.omega.is_none());
        assert!((c.v.amplitudes()[0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flip_inside_b_is_all_cloud() {
        let base = ProductState::zero(6);
        let mut phi = base.to_pure();
        phi.apply_pauli(Pauli::X, 4).unwrap();
        let cut = Region::first_half(6).unwrap();
        let c = spike_cloud_decompose(&phi, 0.4, &base, &cut).unwrap();
        assert!(c.x.norm() < 1e-15);
        assert!((c.y_norm_sq - 1.0).abs() < 1e-15);
        assert!((c.mu - 0.16 / 1.16).abs() < 1e-15);
        assert!((c.mu - 0.13793).abs() < 1e-5);

        let psi = perturb(&phi, 0.4, &base.to_pure());
        let rho = reduced_density(&psi, &cut).unwrap();
        assert!(c.reconstruction_residual(&rho) < 1e-14);
    }

    fn perturb(phi: &PureState, eps: f64, base: &PureState) -> PureState {
        let mut s = base.add_scaled(C64::new(eps, 0.0), phi).unwrap();
        s.normalize().unwrap();
        s
    }

    #[test]
    fn rejects_middle_cut() {
        let base = ProductState::zero(6);
        let cut = Region::new(6, 2, 2).unwrap();
        assert!(matches!(
            spike_cloud_decompose(&base.to_pure(), 0.4, &base, &cut),
            Err(SpectraError::NonContiguousComplement(_))
        ));
    }
}
