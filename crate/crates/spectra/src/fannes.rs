use crate::{Result, SpectraError};
use hent_core::entropy::binary_entropy;
use hent_core::linalg::hermitian_eigenvalues;
use hent_core::DensityMatrix;

/// `T ln(d − 1) + h₂(T)` for trace distance `T ∈ [0, 1]` in dimension
/// `d ≥ 2`.
pub fn fannes_audenaert_bound(trace_distance: f64, dim: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&trace_distance) {
        return Err(SpectraError::InvalidArgument(format!(
            "trace distance {trace_distance} outside [0, 1]"
        )));
    }
    if dim < 2 {
        return Err(SpectraError::InvalidArgument(format!("dimension {dim} < 2")));
    }
    Ok(trace_distance * ((dim - 1) as f64).ln() + binary_entropy(trace_distance))
}

/// `½ ‖ρ − σ‖₁`, clipped to `[0, 1]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(SpectraError::InvalidArgument(format!(
            "dimensions {} and {} differ",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff = rho.as_mat() - sigma.as_mat();
    let eig = hermitian_eigenvalues(diff.as_ref())?;
    Ok((0.5 * eig.iter().map(|x| x.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::Mat;
    use hent_core::C64;

    fn diag(p: &[f64]) -> DensityMatrix {
        let d = p.len();
        DensityMatrix::new(Mat::from_fn(d, d, |i, j| {
            C64::new(if i == j { p[i] } else { 0.0 }, 0.0)
        }))
        .unwrap()
    }

    #[test]
    fn orthogonal_pure_states_saturate() {
        // T = 1, d = 2: bound ln 1 + h₂(1) = 0 and ΔS = 0
        assert_eq!(fannes_audenaert_bound(1.0, 2).unwrap(), 0.0);
        let t = trace_distance(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap();
        assert!((t - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(fannes_audenaert_bound(-0.1, 4).is_err());
        assert!(fannes_audenaert_bound(1.1, 4).is_err());
        assert!(fannes_audenaert_bound(0.5, 1).is_err());
    }

    #[test]
    fn known_value() {
        let b = fannes_audenaert_bound(0.5, 4).unwrap();
        assert!((b - (0.5 * 3f64.ln() + std::f64::consts::LN_2)).abs() < 1e-15);
    }
}
