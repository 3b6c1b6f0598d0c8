use crate::linalg::{self, hermiticity_residual, HermitianEigen};
use crate::{PureState, QStateError, Region, Result, C64};
use faer::{Mat, MatRef};

/// Validation tolerance for Hermiticity, trace and positivity.
pub const DENSITY_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, unit trace, positive
/// semidefinite (all within [`DENSITY_TOL`]).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: Mat<C64>,
}

impl DensityMatrix {
    pub fn new(entries: Mat<C64>) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim {
            return Err(QStateError::DimensionMismatch {
                expected: dim,
                got: entries.ncols(),
            });
        }
        if !dim.is_power_of_two() {
            return Err(QStateError::InvalidDensity(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        let asymmetry = hermiticity_residual(entries.as_ref());
        if asymmetry > DENSITY_TOL {
            return Err(QStateError::NonHermitian { asymmetry });
        }
        let tr: f64 = (0..dim).map(|i| entries[(i, i)].re).sum();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(QStateError::InvalidDensity(format!("trace {tr}")));
        }
        let m = Self { entries };
        let min = m
            .eigenvalues()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -DENSITY_TOL {
            return Err(QStateError::InvalidDensity(format!(
                "minimum eigenvalue {min:.3e}"
            )));
        }
        Ok(m)
    }

    /// Skips validation. For matrices that are density matrices by
    /// construction (e.g. `ΨΨ†` of a unit-norm `Ψ`).
    pub(crate) fn from_gram(entries: Mat<C64>) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.entries.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    /// `tr ρ²`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                acc += self.entries[(i, j)].norm_sqr();
            }
        }
        acc
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(self.entries.as_ref())
    }

    /// Descending eigenvalues with tiny negative round-off clipped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut ev = self.eigenvalues()?;
        ev.reverse();
        for v in &mut ev {
            *v = v.max(0.0);
        }
        Ok(ev)
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        linalg::eigendecompose_hermitian(self.entries.as_ref())
    }

    /// `⟨v|ρ|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> Result<C64> {
        let rv = self.apply(v)?;
        Ok(v.iter().zip(&rv).map(|(a, b)| a.conj() * b).sum())
    }

    /// `ρ v`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim() {
            return Err(QStateError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            let vj = v[j];
            if vj == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.entries[(i, j)] * vj;
            }
        }
        Ok(out)
    }
}

/// `tr_B |ψ⟩⟨ψ|` for the complement B of `keep`.
pub fn reduced_density(state: &PureState, keep: &Region) -> Result<DensityMatrix> {
    state.require_normalized()?;
    Ok(DensityMatrix::from_gram(reduced_gram(state, keep)?))
}

/// `tr_B |ψ⟩⟨ψ|` for an arbitrary (possibly unnormalized) vector.
pub fn reduced_gram(state: &PureState, keep: &Region) -> Result<Mat<C64>> {
    if keep.n_qubits() != state.n_qubits() {
        return Err(QStateError::DimensionMismatch {
            expected: state.n_qubits(),
            got: keep.n_qubits(),
        });
    }
    let psi = state.amplitude_matrix(keep);
    Ok(&psi * psi.adjoint())
}
