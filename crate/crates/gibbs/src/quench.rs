//! Quenched Gibbs states and their canonical purification, built in the
//! Hamiltonian eigenbasis.

use crate::ising::{build_mixed_field_ising, IsingSpec};
use crate::{GibbsError, Result};
use faer::{Mat, Side};
use hent_core::linalg::hermiticity_residual;
use hent_core::C64;
use std::sync::Arc;

/// Default ceiling on the estimated peak memory of one run.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Rough peak bytes for diagonalizing and purifying an `l`-site chain:
/// four real and four complex `2^l × 2^l` matrices.
pub fn estimated_bytes(l: usize) -> u64 {
    let n = 1u64 << l;
    n * n * (4 * 8 + 4 * 16)
}

/// Eigendecomposition `H = V diag(E) Vᵀ`, shared by all runs on one chain.
#[derive(Debug, Clone)]
pub struct IsingEigen {
    pub spec: IsingSpec,
    /// Ascending.
    pub energies: Vec<f64>,
    pub vectors: Mat<f64>,
    /// `max |V diag(E) Vᵀ − H|`.
    pub reconstruction_residual: f64,
}

impl IsingEigen {
    pub fn compute(spec: &IsingSpec) -> Result<Self> {
        Self::compute_with_budget(spec, DEFAULT_MEMORY_BUDGET)
    }

    /// Rejects before allocating when [`estimated_bytes`] exceeds `budget`.
    pub fn compute_with_budget(spec: &IsingSpec, budget: u64) -> Result<Self> {
        let need = estimated_bytes(spec.l);
        if need > budget {
            return Err(GibbsError::Budget(format!(
                "L = {} needs about {:.1} GiB, budget is {:.1} GiB",
                spec.l,
                need as f64 / (1u64 << 30) as f64,
                budget as f64 / (1u64 << 30) as f64
            )));
        }
        let h = build_mixed_field_ising(spec)?;
        let eig = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| GibbsError::Eigen)?;
        let s = eig.S().column_vector();
        let n = h.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
        let energies: Vec<f64> = order.iter().map(|&i| s[i]).collect();
        let u = eig.U();
        let vectors = Mat::from_fn(n, n, |i, j| u[(i, order[j])]);

        let scaled = Mat::from_fn(n, n, |i, j| vectors[(i, j)] * energies[j]);
        let back = &scaled * vectors.transpose();
        let mut residual = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                residual = residual.max((back[(i, j)] - h[(i, j)]).abs());
            }
        }
        Ok(Self {
            spec: *spec,
            energies,
            vectors,
            reconstruction_residual: residual,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// `Vᵀ Z_site V`.
    pub fn z_in_eigenbasis(&self, site: usize) -> Mat<f64> {
        let n = self.dim();
        let v = &self.vectors;
        let zv = Mat::from_fn(n, n, |i, j| {
            if (i >> site) & 1 == 0 {
                v[(i, j)]
            } else {
                -v[(i, j)]
            }
        });
        v.transpose() * &zv
    }
}

/// `ρ_{β,θ}(t) = e^{iHt} U_θ† ρ_β U_θ e^{−iHt}` with `U_θ = e^{−iθ Z_site}`.
#[derive(Debug, Clone)]
pub struct QuenchRun {
    pub eig: Arc<IsingEigen>,
    pub beta: f64,
    pub theta: f64,
    pub site: usize,
    /// `e^{−β(E_n − E_0)/2}`.
    half_weights: Vec<f64>,
    /// `Σ_n e^{−β(E_n − E_0)}`.
    z_shifted: f64,
    /// `U_θ† e^{−βH/2} U_θ` in the eigenbasis, split into real and imaginary
    /// parts.
    kernel_re: Mat<f64>,
    kernel_im: Mat<f64>,
}

impl QuenchRun {
    pub fn new(eig: Arc<IsingEigen>, beta: f64, theta: f64) -> Result<Self> {
        let site = eig.spec.quench_site();
        Self::with_site(eig, beta, theta, site)
    }

    pub fn with_site(eig: Arc<IsingEigen>, beta: f64, theta: f64, site: usize) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(GibbsError::InvalidArgument(format!("β = {beta}")));
        }
        if !theta.is_finite() {
            return Err(GibbsError::InvalidArgument(format!("θ = {theta}")));
        }
        if site >= eig.spec.l {
            return Err(GibbsError::InvalidArgument(format!(
                "site {site} outside the {}-site chain",
                eig.spec.l
            )));
        }
        let e0 = eig.energies[0];
        let d: Vec<f64> = eig
            .energies
            .iter()
            .map(|e| (-0.5 * beta * (e - e0)).exp())
            .collect();
        let z_shifted: f64 = d.iter().map(|x| x * x).sum();
        if !(z_shifted > 0.0) {
            return Err(GibbsError::InvalidArgument("Z(β) is not positive".into()));
        }

        let n = eig.dim();
        let (s, c) = theta.sin_cos();
        let (kernel_re, kernel_im) = if s == 0.0 {
            (
                Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 }),
                Mat::zeros(n, n),
            )
        } else {
            let zv = eig.z_in_eigenbasis(site);
            let zd = Mat::from_fn(n, n, |i, j| zv[(i, j)] * d[j]);
            let zdz = &zd * &zv;
            let re = Mat::from_fn(n, n, |i, j| {
                let diag = if i == j { c * c * d[i] } else { 0.0 };
                diag + s * s * zdz[(i, j)]
            });
            let im = Mat::from_fn(n, n, |i, j| c * s * zv[(i, j)] * (d[j] - d[i]));
            (re, im)
        };
        Ok(Self {
            eig,
            beta,
            theta,
            site,
            half_weights: d,
            z_shifted,
            kernel_re,
            kernel_im,
        })
    }

    /// `‖ΔH‖ = ‖U_θ† H U_θ − H‖ = 2|g sin θ|`.
    pub fn delta_h_norm(&self) -> f64 {
        2.0 * (self.eig.spec.g * self.theta.sin()).abs()
    }

    /// `√ρ_{β,θ}(t)` in the computational basis, unit Frobenius norm.
    pub fn purification(&self, t: f64) -> PurificationState {
        let n = self.eig.dim();
        let e = &self.eig.energies;
        let mut re = Mat::<f64>::zeros(n, n);
        let mut im = Mat::<f64>::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let (sin, cos) = ((e[i] - e[j]) * t).sin_cos();
                let a = self.kernel_re[(i, j)];
                let b = self.kernel_im[(i, j)];
                re[(i, j)] = a * cos - b * sin;
                im[(i, j)] = a * sin + b * cos;
            }
        }
        let v = &self.eig.vectors;
        let m_re = v * (&re * v.transpose());
        let m_im = v * (&im * v.transpose());
        let scale = 1.0 / self.z_shifted.sqrt();
        PurificationState {
            l: self.eig.spec.l,
            m: Mat::from_fn(n, n, |i, j| C64::new(m_re[(i, j)], m_im[(i, j)]) * scale),
        }
    }

    /// `√ρ_β`, the unquenched purification.
    pub fn thermal_purification(&self) -> PurificationState {
        let n = self.eig.dim();
        let v = &self.eig.vectors;
        let scale = 1.0 / self.z_shifted.sqrt();
        let vd = Mat::from_fn(n, n, |i, j| v[(i, j)] * self.half_weights[j] * scale);
        let m = &vd * v.transpose();
        PurificationState {
            l: self.eig.spec.l,
            m: Mat::from_fn(n, n, |i, j| C64::new(m[(i, j)], 0.0)),
        }
    }
}

/// `M ∝ √ρ` with rows indexing the system and columns the ancilla.
#[derive(Debug, Clone)]
pub struct PurificationState {
    pub l: usize,
    pub m: Mat<C64>,
}

impl PurificationState {
    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm_l2()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(self.m.as_ref())
    }

    /// `⟨self|other⟩ = tr(M_self† M_other)`.
    pub fn inner(&self, other: &PurificationState) -> Result<C64> {
        if self.l != other.l {
            return Err(GibbsError::InvalidArgument("chain lengths differ".into()));
        }
        let n = self.m.nrows();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..n {
            for i in 0..n {
                acc += self.m[(i, j)].conj() * other.m[(i, j)];
            }
        }
        Ok(acc)
    }

    /// `max |M_self − M_other|`.
    pub fn max_abs_diff(&self, other: &PurificationState) -> f64 {
        let n = self.m.nrows();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((self.m[(i, j)] - other.m[(i, j)]).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(l: usize, beta: f64, theta: f64) -> QuenchRun {
        let eig = Arc::new(IsingEigen::compute(&IsingSpec::chaotic(l).unwrap()).unwrap());
        QuenchRun::new(eig, beta, theta).unwrap()
    }

    #[test]
    fn infinite_temperature_is_scaled_identity() {
        let p = run(4, 0.0, 0.0).purification(3.0);
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j { 0.25 } else { 0.0 };
                assert!((p.m[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_norm_and_unquenched_hermitian() {
        let r = run(6, 0.7, 0.4);
        assert!(r.eig.reconstruction_residual <= 1e-10);
        assert!((r.purification(2.5).frobenius_norm() - 1.0).abs() <= 1e-10);
        let still = run(6, 0.7, 0.0);
        let a = still.purification(0.0);
        let b = still.purification(17.0);
        assert!(a.hermiticity_residual() <= 1e-12);
        assert!(a.max_abs_diff(&b) <= 1e-12);
        assert!(a.max_abs_diff(&still.thermal_purification()) <= 1e-12);
    }

    #[test]
    fn square_reproduces_boltzmann_weight() {
        // M² Z = e^{−βH}, with both sides built independently
        let beta = 0.9;
        let r = run(4, beta, 0.0);
        let m = r.thermal_purification().m;
        let sq = &m * &m;
        let v = &r.eig.vectors;
        let e = &r.eig.energies;
        let z: f64 = e.iter().map(|x| (-beta * x).exp()).sum();
        for i in 0..16 {
            for j in 0..16 {
                let exact: f64 = (0..16)
                    .map(|k| v[(i, k)] * (-beta * e[k]).exp() * v[(j, k)])
                    .sum();
                assert!((sq[(i, j)].re * z - exact).abs() <= 1e-10);
                assert!(sq[(i, j)].im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn budget_rejects_before_allocating() {
        let spec = IsingSpec::chaotic(12).unwrap();
        assert!(matches!(
            IsingEigen::compute_with_budget(&spec, 1 << 20),
            Err(GibbsError::Budget(_))
        ));
        assert!(estimated_bytes(14) > DEFAULT_MEMORY_BUDGET);
        assert!(estimated_bytes(12) < DEFAULT_MEMORY_BUDGET);
    }
}
