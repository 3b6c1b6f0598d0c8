//! Numerical checks of the spike-cloud entropy inequalities and the
//! spike/eigenvector overlap estimate.

use crate::spike::SpikeCloud;
use crate::Result;
use hent_core::entropy::{binary_entropy, renyi_entropy};
use hent_core::schmidt::{top_eigen_psd, SubspaceOptions};
use hent_core::{DensityMatrix, C64};

/// An inequality `lhs ≤ rhs` counts as satisfied up to this slack.
pub const BOUND_SLACK: f64 = 1e-9;

/// Above this dimension `‖ω‖∞` comes from subspace iteration instead of a
/// dense eigensolve.
pub const DENSE_NORM_DIM: usize = 1 << 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub name: &'static str,
    pub alpha: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub applicable: bool,
    /// Always true when not applicable.
    pub satisfied: bool,
}

impl BoundRecord {
    pub fn check(name: &'static str, alpha: Option<f64>, lhs: f64, rhs: f64) -> Self {
        Self {
            name,
            alpha,
            lhs,
            rhs,
            margin: rhs - lhs,
            applicable: true,
            satisfied: lhs <= rhs + BOUND_SLACK,
        }
    }

    pub fn not_applicable(name: &'static str, alpha: Option<f64>) -> Self {
        Self {
            name,
            alpha,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            applicable: false,
            satisfied: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundsReport {
    pub records: Vec<BoundRecord>,
}

impl BoundsReport {
    pub fn all_satisfied(&self) -> bool {
        self.records.iter().all(|r| r.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRecord> {
        self.records.iter().filter(|r| !r.satisfied)
    }

    pub fn applicable_count(&self) -> usize {
        self.records.iter().filter(|r| r.applicable).count()
    }

    pub fn extend(&mut self, other: BoundsReport) {
        self.records.extend(other.records);
    }
}

/// Checks the entropy bounds implied by `ρ_A = (1 − μ)|v⟩⟨v| + μω`:
///
/// - `μ ≤ ε²` and `λ_max(ρ_A) ≥ 1 − μ`;
/// - for `α > 1`, `S_α ≤ α/(α−1) ln(1/(1−ε²))` and the same with `μ`;
/// - `μ S(ω) ≤ S(ρ_A) ≤ h₂(μ) + μ S(ω)`;
/// - for `α < 1`, `S_α(ω) + α/(1−α) ln μ ≤ S_α(ρ_A)` and
///   `S_α(ρ_A) ≤ ln[(1−μ)^α + μ^α e^{(1−α)S_α(ω)}]/(1−α)`.
///
/// When the cloud is empty (`μ = 0`) the lower bound of the last family is
/// reported as not applicable.
pub fn check_renyi_bounds(
    rho_a: &DensityMatrix,
    cloud: &SpikeCloud,
    alphas: &[f64],
) -> Result<BoundsReport> {
    let rho = rho_a.spectrum()?;
    let omega = match &cloud.omega {
        Some(w) => Some(w.spectrum()?),
        None => None,
    };
    let mu = cloud.mu;
    let eps2 = cloud.epsilon * cloud.epsilon;
    let s_omega = |alpha: f64| -> Result<f64> {
        Ok(match &omega {
            Some(w) => renyi_entropy(w, alpha)?,
            None => 0.0,
        })
    };

    let mut out = BoundsReport::default();
    out.records.push(BoundRecord::check("cloud_weight_le_eps2", None, mu, eps2));
    out.records
        .push(BoundRecord::check("spike_weight_le_lambda_max", None, 1.0 - mu, rho[0]));

    let s1 = renyi_entropy(&rho, 1.0)?;
    let s1_omega = s_omega(1.0)?;
    out.records
        .push(BoundRecord::check("von_neumann_lower", Some(1.0), mu * s1_omega, s1));
    out.records.push(BoundRecord::check(
        "von_neumann_upper",
        Some(1.0),
        s1,
        binary_entropy(mu) + mu * s1_omega,
    ));

    for &alpha in alphas {
        let s = renyi_entropy(&rho, alpha)?;
        if alpha > 1.0 {
            let c = alpha / (alpha - 1.0);
            out.records.push(BoundRecord::check(
                "renyi_eps_ceiling",
                Some(alpha),
                s,
                -c * (-eps2).ln_1p(),
            ));
            out.records.push(BoundRecord::check(
                "renyi_mu_ceiling",
                Some(alpha),
                s,
                -c * (-mu).ln_1p(),
            ));
        } else if alpha < 1.0 {
            let sw = s_omega(alpha)?;
            if mu > 0.0 {
                out.records.push(BoundRecord::check(
                    "renyi_small_alpha_lower",
                    Some(alpha),
                    sw + alpha / (1.0 - alpha) * mu.ln(),
                    s,
                ));
            } else {
                out.records
                    .push(BoundRecord::not_applicable("renyi_small_alpha_lower", Some(alpha)));
            }
            let upper = ((1.0 - mu).powf(alpha) + mu.powf(alpha) * ((1.0 - alpha) * sw).exp())
                .ln()
                / (1.0 - alpha);
            out.records
                .push(BoundRecord::check("renyi_small_alpha_upper", Some(alpha), s, upper));
        }
    }
    Ok(out)
}

/// Quantities of the spike/top-eigenvector overlap estimate.
#[derive(Debug, Clone)]
pub struct OverlapCheck {
    /// `⟨v|ω|v⟩`.
    pub a: f64,
    /// `⟨v|ω²|v⟩`.
    pub a2: f64,
    pub omega_norm: f64,
    /// `1 − μ + μa − μ‖ω‖∞`.
    pub delta: f64,
    /// `1 − |⟨λ₁|v⟩|²`.
    pub defect: f64,
    /// Top eigenvalue of `ρ_A` is simple (gap above `1e-12`).
    pub lambda1_simple: bool,
    pub report: BoundsReport,
}

/// `1 − |⟨λ₁|v⟩|² ≤ μ²(⟨v|ω²|v⟩ − a²)/Δ² ≤ μ² a/Δ²` when `Δ > 0`, plus
/// `a ≤ exp(−S₂(ω)/2)`.
pub fn check_overlap_bound(rho_a: &DensityMatrix, cloud: &SpikeCloud) -> Result<OverlapCheck> {
    let eig = rho_a.eigen()?;
    let d = eig.values.len();
    let top = d - 1;
    let lambda1_simple = d == 1 || eig.values[top] - eig.values[top - 1] > 1e-12;
    let v = cloud.v.amplitudes();
    let ov: C64 = (0..d).map(|i| eig.vectors[(i, top)].conj() * v[i]).sum();
    let defect = (1.0 - ov.norm_sqr()).max(0.0);
    let mu = cloud.mu;

    let (a, a2, omega_norm, s2_omega) = match &cloud.omega {
        Some(w) => {
            let wv = w.apply(v)?;
            let a = dot(v, &wv).re;
            let a2 = wv.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let spec = w.spectrum()?;
            let norm = if w.dim() <= DENSE_NORM_DIM {
                spec[0]
            } else {
                operator_norm_iterative(w)?
            };
            (a, a2, norm, Some(renyi_entropy(&spec, 2.0)?))
        }
        None => (0.0, 0.0, 0.0, None),
    };
    let delta = 1.0 - mu + mu * a - mu * omega_norm;

    let mut report = BoundsReport::default();
    if delta > 0.0 {
        let variance = mu * mu * (a2 - a * a).max(0.0) / (delta * delta);
        let crude = mu * mu * a / (delta * delta);
        report
            .records
            .push(BoundRecord::check("overlap_variance_bound", None, defect, variance));
        report
            .records
            .push(BoundRecord::check("overlap_crude_bound", None, variance, crude));
    } else {
        report
            .records
            .push(BoundRecord::not_applicable("overlap_variance_bound", None));
        report
            .records
            .push(BoundRecord::not_applicable("overlap_crude_bound", None));
    }
    match s2_omega {
        Some(s2) => report.records.push(BoundRecord::check(
            "concentration_alpha2",
            Some(2.0),
            a,
            (-s2 / 2.0).exp(),
        )),
        None => report
            .records
            .push(BoundRecord::not_applicable("concentration_alpha2", Some(2.0))),
    }
    Ok(OverlapCheck {
        a,
        a2,
        omega_norm,
        delta,
        defect,
        lambda1_simple,
        report,
    })
}

/// `S_{1/2}(φ) − 2α/(α−1) ln|⟨φ|ψ⟩|`, the ceiling on `S_α(ψ)` for `α > 1`.
/// `alpha = ∞` gives coefficient 2.
pub fn overlap_lemma_ceiling(s_half_phi: f64, overlap_abs: f64, alpha: f64) -> f64 {
    let c = if alpha.is_infinite() {
        2.0
    } else {
        2.0 * alpha / (alpha - 1.0)
    };
    s_half_phi - c * overlap_abs.ln()
}

/// Checks `S_α(ψ) ≤ S_{1/2}(φ) − 2α/(α−1) ln|⟨φ|ψ⟩|` for every `α > 1` in
/// `alphas`, given the Schmidt weights of both states across the same cut.
pub fn check_overlap_lemma(
    psi_weights: &[f64],
    phi_weights: &[f64],
    overlap_abs: f64,
    alphas: &[f64],
) -> Result<BoundsReport> {
    let s_half = renyi_entropy(phi_weights, 0.5)?;
    let mut out = BoundsReport::default();
    for &alpha in alphas.iter().filter(|&&a| a > 1.0) {
        let lhs = if alpha.is_infinite() {
            -psi_weights.iter().cloned().fold(0.0, f64::max).ln()
        } else {
            renyi_entropy(psi_weights, alpha)?
        };
        if overlap_abs > 0.0 {
            out.records.push(BoundRecord::check(
                "overlap_lemma",
                Some(alpha),
                lhs,
                overlap_lemma_ceiling(s_half, overlap_abs, alpha),
            ));
        } else {
            out.records
                .push(BoundRecord::not_applicable("overlap_lemma", Some(alpha)));
        }
    }
    Ok(out)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn operator_norm_iterative(w: &DensityMatrix) -> Result<f64> {
    let m = w.as_mat();
    let top = top_eigen_psd(w.dim(), 1, SubspaceOptions::default(), |x| m * x)?;
    Ok(top.values[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spike::spike_cloud_decompose;
    use faer::Mat;
    use hent_core::gates::Pauli;
    use hent_core::{reduced_density, ProductState, PureState, Region};

    fn spike_from(phi: &PureState, eps: f64) -> (DensityMatrix, SpikeCloud) {
        let n = phi.n_qubits();
        let base = ProductState::zero(n);
        let cut = Region::first_half(n).unwrap();
        let mut psi = base.to_pure().add_scaled(C64::new(eps, 0.0), phi).unwrap();
        psi.normalize().unwrap();
        let rho = reduced_density(&psi, &cut).unwrap();
        let cloud = spike_cloud_decompose(phi, eps, &base, &cut).unwrap();
        (rho, cloud)
    }

    #[test]
    fn eps_ceiling_value_at_alpha_two() {
        let rhs = -2.0 * (-0.16f64).ln_1p();
        assert!((rhs - 2.0 * (100.0f64 / 84.0).ln()).abs() < 1e-15);
        assert!((rhs - 0.348_706_774).abs() < 1e-9);
    }

    #[test]
    fn orthogonal_cloud_saturates_von_neumann_upper() {
        let mut phi = PureState::zero(6);
        phi.apply_pauli(Pauli::X, 1).unwrap();
        phi.apply_pauli(Pauli::X, 4).unwrap();
        let (rho, cloud) = spike_from(&phi, 0.4);
        let report = check_renyi_bounds(&rho, &cloud, &[0.25, 0.5, 2.0, 3.0]).unwrap();
        assert!(report.all_satisfied(), "{:?}", report.violations().collect::<Vec<_>>());
        // ω pure and orthogonal to v: S(ρ) = h₂(μ)
        let upper = report
            .records
            .iter()
            .find(|r| r.name == "von_neumann_upper")
            .unwrap();
        assert!(upper.margin.abs() < 1e-12);
    }

    #[test]
    fn empty_cloud_reduces_to_zero_entropy() {
        let phi = PureState::zero(4);
        let (rho, cloud) = spike_from(&phi, 0.3);
        let report = check_renyi_bounds(&rho, &cloud, &[0.5, 2.0]).unwrap();
        assert!(report.all_satisfied());
        let lower = report
            .records
            .iter()
            .find(|r| r.name == "renyi_small_alpha_lower")
            .unwrap();
        assert!(!lower.applicable);
        let ov = check_overlap_bound(&rho, &cloud).unwrap();
        assert_eq!(ov.delta, 1.0);
        assert!(ov.defect < 1e-14);
    }

    #[test]
    fn delta_for_reference_numbers() {
        // μ = 0.2, a = 0.01, ‖ω‖∞ = 0.05
        let delta: f64 = 1.0 - 0.2 + 0.2 * 0.01 - 0.2 * 0.05;
        assert!((delta - 0.792).abs() < 1e-12);
    }

    #[test]
    fn overlap_chain_on_mixed_cloud() {
        // |φ⟩ = (|00 00⟩ + |01 10⟩ + |10 01⟩ + |11 11⟩)/2 on 4 qubits,
        // so the cloud is spread over three A-basis states.
        let h = 0.5;
        let mut amps = vec![C64::new(0.0, 0.0); 16];
        for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            amps[a | (b << 2)] = C64::new(h, 0.0);
        }
        let phi = PureState::from_amplitudes(4, amps).unwrap();
        let (rho, cloud) = spike_from(&phi, 0.4);
        assert!(cloud.reconstruction_residual(&rho) < 1e-14);
        let check = check_overlap_bound(&rho, &cloud).unwrap();
        assert!(check.delta > 0.0);
        assert!(check.report.all_satisfied(), "{:?}", check.report);
        assert!(check.lambda1_simple);
    }

    #[test]
    fn lemma_equality_for_identical_states() {
        let w = [0.5, 0.3, 0.2];
        let r = check_overlap_lemma(&w, &w, 1.0, &[1.5, 2.0, f64::INFINITY]).unwrap();
        assert_eq!(r.records.len(), 3);
        assert!(r.all_satisfied());
    }

    #[test]
    fn iterative_norm_matches_dense() {
        let d = 8;
        let m = Mat::from_fn(d, d, |i, j| {
            if i == j {
                C64::new((i + 1) as f64 / 36.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let w = DensityMatrix::new(m).unwrap();
        assert!((operator_norm_iterative(&w).unwrap() - 8.0 / 36.0).abs() < 1e-10);
    }
}
