//! Dense Hermitian eigensolvers and matrix helpers on top of `faer`.

use crate::{QStateError, Result, C64};
use faer::{Mat, MatRef, Side};

/// Inputs whose max elementwise asymmetry exceeds this are rejected.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: Mat<C64>,
}

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

/// `max |M_ij - conj(M_ji)|`.
pub fn hermiticity_residual(m: MatRef<'_, C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn symmetry_residual(m: MatRef<'_, f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn check_square(rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(QStateError::DimensionMismatch {
            expected: rows,
            got: cols,
        });
    }
    Ok(())
}

pub fn eigendecompose_hermitian(m: MatRef<'_, C64>) -> Result<HermitianEigen> {
    check_square(m.nrows(), m.ncols())?;
    let asymmetry = hermiticity_residual(m);
    if asymmetry > HERMITICITY_TOL {
        return Err(QStateError::NonHermitian { asymmetry });
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| QStateError::EigenFailure)?;
    let values = (0..m.nrows()).map(|i| evd.S()[i].re).collect();
    Ok(HermitianEigen {
        values,
        vectors: evd.U().to_owned(),
    })
}

/// Eigenvalues only (ascending).
pub fn hermitian_eigenvalues(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    check_square(m.nrows(), m.ncols())?;
    let asymmetry = hermiticity_residual(m);
    if asymmetry > HERMITICITY_TOL {
        return Err(QStateError::NonHermitian { asymmetry });
    }
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| QStateError::EigenFailure)
}

pub fn eigendecompose_symmetric(m: MatRef<'_, f64>) -> Result<SymmetricEigen> {
    check_square(m.nrows(), m.ncols())?;
    let asymmetry = symmetry_residual(m);
    if asymmetry > HERMITICITY_TOL {
        return Err(QStateError::NonHermitian { asymmetry });
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| QStateError::EigenFailure)?;
    let values = (0..m.nrows()).map(|i| evd.S()[i]).collect();
    Ok(SymmetricEigen {
        values,
        vectors: evd.U().to_owned(),
    })
}

/// Squared singular values, descending.
pub fn squared_singular_values(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    let s = m.singular_values().map_err(|_| QStateError::EigenFailure)?;
    Ok(s.into_iter().map(|x| x * x).collect())
}

/// `max |M_ij|`.
pub fn max_abs(m: MatRef<'_, C64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// `‖V†V - I‖_max`.
pub fn orthonormality_residual(v: MatRef<'_, C64>) -> f64 {
    let g = v.adjoint() * v;
    let mut worst = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `V diag(values) V†`.
pub fn reconstruct(values: &[f64], vectors: MatRef<'_, C64>) -> Mat<C64> {
    let scaled = Mat::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * values[j]
    });
    &scaled * vectors.adjoint()
}

pub fn to_complex(m: MatRef<'_, f64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_trivial() {
        let m = Mat::from_fn(3, 3, |i, j| {
            if i == j {
                C64::new(i as f64 + 1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let e = eigendecompose_hermitian(m.as_ref()).unwrap();
        assert_eq!(e.values.len(), 3);
        for (k, v) in e.values.iter().enumerate() {
            assert!((v - (k as f64 + 1.0)).abs() < 1e-14);
            assert!((e.vectors[(k, k)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let x = Mat::from_fn(2, 2, |i, j| if i != j { one } else { zero });
        let e = eigendecompose_hermitian(x.as_ref()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, 0.0));
        match eigendecompose_hermitian(m.as_ref()) {
            Err(QStateError::NonHermitian { asymmetry }) => assert!((asymmetry - 1.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }
}
