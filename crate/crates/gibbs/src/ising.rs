use crate::{GibbsError, Result};
use faer::Mat;

/// Largest chain handled by dense exact diagonalization.
pub const MAX_DENSE_SITES: usize = 14;

/// `H = Σ Z_i Z_{i+1} + Σ (g X_i + h Z_i) [+ Z_0/4 − Z_{L−1}/4]` on an open
/// chain of `l` sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingSpec {
    pub l: usize,
    pub g: f64,
    pub h: f64,
    pub boundary: bool,
}

impl IsingSpec {
    pub fn new(l: usize, g: f64, h: f64, boundary: bool) -> Result<Self> {
        let s = Self { l, g, h, boundary };
        s.validate()?;
        Ok(s)
    }

    /// `g = 1.1`, `h = 0.35` with boundary fields.
    pub fn chaotic(l: usize) -> Result<Self> {
        Self::new(l, 1.1, 0.35, true)
    }

    pub fn dim(&self) -> usize {
        1 << self.l
    }

    /// 0-based index of the quench site.
    pub fn quench_site(&self) -> usize {
        self.l / 2 - 1
    }

    fn validate(&self) -> Result<()> {
        if self.l < 2 || !self.l.is_multiple_of(2) {
            return Err(GibbsError::InvalidSpec(format!(
                "L = {} must be even and at least 2",
                self.l
            )));
        }
        if !self.g.is_finite() || !self.h.is_finite() {
            return Err(GibbsError::InvalidSpec("non-finite field".into()));
        }
        if self.l > MAX_DENSE_SITES {
            return Err(GibbsError::Budget(format!(
                "L = {} exceeds the dense diagonalization limit of {MAX_DENSE_SITES} sites",
                self.l
            )));
        }
        Ok(())
    }
}

/// `⟨b|H|b⟩` for basis index `b` (site `k` is bit `k`).
pub fn diagonal_energy(spec: &IsingSpec, b: usize) -> f64 {
    let z = |k: usize| if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
    let mut e = 0.0;
    for k in 0..spec.l - 1 {
        e += z(k) * z(k + 1);
    }
    for k in 0..spec.l {
        e += spec.h * z(k);
    }
    if spec.boundary {
        e += 0.25 * z(0) - 0.25 * z(spec.l - 1);
    }
    e
}

/// Dense real symmetric Hamiltonian.
pub fn build_mixed_field_ising(spec: &IsingSpec) -> Result<Mat<f64>> {
    spec.validate()?;
    let n = spec.dim();
    let mut h = Mat::<f64>::zeros(n, n);
    for b in 0..n {
        h[(b, b)] = diagonal_energy(spec, b);
        for k in 0..spec.l {
            h[(b ^ (1 << k), b)] += spec.g;
        }
    }
    Ok(h)
}
