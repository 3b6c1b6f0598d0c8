//! Schmidt spectra across a cut, dense and matrix-free.

use crate::linalg;
use crate::rng::derive_stream;
use crate::{PureState, QStateError, Region, Result, C64};
use faer::{Mat, MatRef};
use rand_distr::{Distribution, StandardNormal};

/// Largest A-side dimension handled by dense SVD in [`leading_schmidt`].
pub const DENSE_CUT_DIM: usize = 1 << 12;

/// Adjacent Ritz values closer than this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Weights below this never count towards a degeneracy.
const ZERO_WEIGHT: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct SchmidtSpectrum {
    /// Descending.
    pub weights: Vec<f64>,
    /// Columns are orthonormal states on `cut`, matching `weights`.
    pub left_vectors: Option<Mat<C64>>,
    pub cut: Region,
    /// `Some(k)` when only the leading `k` weights were computed.
    pub truncated_rank: Option<usize>,
    pub degenerate: bool,
    /// Sweeps used by the iterative solver (0 for dense).
    pub iterations: usize,
    /// Eigenpair residuals `‖ρx − λx‖` for the iterative solver.
    pub residuals: Vec<f64>,
}

impl SchmidtSpectrum {
    pub fn leading_weight(&self) -> f64 {
        self.weights[0]
    }

    /// Column `i` of `left_vectors` as a state on the cut.
    pub fn vector(&self, i: usize) -> Option<PureState> {
        let v = self.left_vectors.as_ref()?;
        if i >= v.ncols() {
            return None;
        }
        let amps = (0..v.nrows()).map(|r| v[(r, i)]).collect();
        PureState::from_amplitudes(self.cut.len(), amps).ok()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Full Schmidt spectrum (weights only) across `cut`.
pub fn schmidt_decompose(state: &PureState, cut: &Region) -> Result<SchmidtSpectrum> {
    state.require_normalized()?;
    check_cut(state, cut)?;
    let psi = state.amplitude_matrix(cut);
    let mut weights = linalg::squared_singular_values(psi.as_ref())?;
    weights.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum {
        degenerate: has_degeneracy(&weights),
        weights,
        left_vectors: None,
        cut: *cut,
        truncated_rank: None,
        iterations: 0,
        residuals: Vec::new(),
    })
}

/// Full Schmidt spectrum together with all left Schmidt vectors.
pub fn schmidt_decompose_with_vectors(
    state: &PureState,
    cut: &Region,
) -> Result<SchmidtSpectrum> {
    state.require_normalized()?;
    check_cut(state, cut)?;
    let psi = state.amplitude_matrix(cut);
    let (weights, u) = dense_left_singular(psi.as_ref())?;
    Ok(SchmidtSpectrum {
        degenerate: has_degeneracy(&weights),
        weights,
        left_vectors: Some(u),
        cut: *cut,
        truncated_rank: None,
        iterations: 0,
        residuals: Vec::new(),
    })
}

/// Options for the subspace iteration.
#[derive(Debug, Clone, Copy)]
pub struct SubspaceOptions {
    pub residual_tol: f64,
    pub max_sweeps: usize,
    /// Seed for the random start block.
    pub seed: u64,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            max_sweeps: 10_000,
            seed: 0,
        }
    }
}

/// Leading eigenpairs of a positive semidefinite operator.
#[derive(Debug, Clone)]
pub struct TopEigen {
    /// Descending.
    pub values: Vec<f64>,
    pub vectors: Mat<C64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub degenerate: bool,
}

/// Leading `k` Schmidt pairs across `cut` through the action
/// `x ↦ Ψ(Ψ†x)`, never forming `ρ_cut`.
pub fn top_schmidt_matrix_free(
    state: &PureState,
    cut: &Region,
    k: usize,
    residual_tol: f64,
) -> Result<SchmidtSpectrum> {
    let opts = SubspaceOptions {
        residual_tol,
        ..SubspaceOptions::default()
    };
    top_schmidt_with(state, cut, k, opts)
}

pub fn top_schmidt_with(
    state: &PureState,
    cut: &Region,
    k: usize,
    opts: SubspaceOptions,
) -> Result<SchmidtSpectrum> {
    state.require_normalized()?;
    check_cut(state, cut)?;
    let psi = state.amplitude_matrix(cut);
    let top = top_gram_eigen(psi.as_ref(), k, opts)?;
    Ok(SchmidtSpectrum {
        weights: top.values,
        left_vectors: Some(top.vectors),
        cut: *cut,
        truncated_rank: Some(k),
        degenerate: top.degenerate,
        iterations: top.iterations,
        residuals: top.residuals,
    })
}

/// Leading `k` Schmidt pairs, by dense SVD when the cut side has dimension
/// at most [`DENSE_CUT_DIM`] and by subspace iteration above that.
pub fn leading_schmidt(state: &PureState, cut: &Region, k: usize) -> Result<SchmidtSpectrum> {
    if cut.dim() > DENSE_CUT_DIM {
        return top_schmidt_matrix_free(state, cut, k, SubspaceOptions::default().residual_tol);
    }
    let mut full = schmidt_decompose_with_vectors(state, cut)?;
    let k = k.min(full.weights.len());
    // degeneracy only matters at the truncation edge and inside the kept block
    let edge = (k + 1).min(full.weights.len());
    full.degenerate = has_degeneracy(&full.weights[..edge]);
    full.weights.truncate(k);
    if let Some(u) = full.left_vectors.as_mut() {
        *u = u.subcols(0, k).to_owned();
    }
    full.truncated_rank = Some(k);
    Ok(full)
}

/// Leading `k` eigenpairs of `ΨΨ†` by block subspace iteration with
/// Rayleigh–Ritz, block size `k + 2`.
pub fn top_gram_eigen(psi: MatRef<'_, C64>, k: usize, opts: SubspaceOptions) -> Result<TopEigen> {
    top_eigen_psd(
        psi.nrows(),
        k,
        opts,
        |x: MatRef<'_, C64>| {
            let t = psi.adjoint() * x;
            psi * &t
        },
    )
}

/// Leading `k` eigenpairs of a Hermitian positive semidefinite operator of
/// dimension `dim` given only its block action.
pub fn top_eigen_psd<F>(dim: usize, k: usize, opts: SubspaceOptions, apply: F) -> Result<TopEigen>
where
    F: Fn(MatRef<'_, C64>) -> Mat<C64>,
{
    if k == 0 || k > dim {
        return Err(QStateError::InvalidArgument(format!(
            "k = {k} outside 1..={dim}"
        )));
    }
    if !(opts.residual_tol > 0.0) {
        return Err(QStateError::InvalidArgument(format!(
            "residual_tol = {}",
            opts.residual_tol
        )));
    }
    let b = (k + 2).min(dim);
    let mut rng = derive_stream(opts.seed, &[dim as u64, k as u64]);
    let mut gaussian = move || {
        C64::new(
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        )
    };
    let mut q = Mat::from_fn(dim, b, |_, _| gaussian());
    orthonormalize(&mut q, &mut gaussian);
    let mut y = apply(q.as_ref());

    let mut last_residual = f64::INFINITY;
    for sweep in 1..=opts.max_sweeps {
        q = y;
        orthonormalize(&mut q, &mut gaussian);
        y = apply(q.as_ref());

        let h = q.adjoint() * &y;
        let h = Mat::from_fn(b, b, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
        let eig = linalg::eigendecompose_hermitian(h.as_ref())?;
        // descending order
        let w = Mat::from_fn(b, b, |i, j| eig.vectors[(i, b - 1 - j)]);
        let theta: Vec<f64> = (0..b).map(|j| eig.values[b - 1 - j]).collect();
        q = &q * &w;
        y = &y * &w;

        let residuals: Vec<f64> = (0..k)
            .map(|j| {
                (0..dim)
                    .map(|i| (y[(i, j)] - q[(i, j)] * theta[j]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        last_residual = residuals.iter().copied().fold(0.0, f64::max);
        if last_residual <= opts.residual_tol {
            let values: Vec<f64> = theta.iter().map(|t| t.max(0.0)).collect();
            let edge = (k + 1).min(b);
            return Ok(TopEigen {
                degenerate: has_degeneracy(&values[..edge]),
                values: values[..k].to_vec(),
                vectors: q.subcols(0, k).to_owned(),
                residuals,
                iterations: sweep,
            });
        }
    }
    Err(QStateError::NotConverged {
        iterations: opts.max_sweeps,
        residual: last_residual,
    })
}

/// Modified Gram–Schmidt, applied twice. Columns that collapse are replaced
/// by fresh random directions.
fn orthonormalize(q: &mut Mat<C64>, fresh: &mut impl FnMut() -> C64) {
    let (n, b) = (q.nrows(), q.ncols());
    for j in 0..b {
        let mut attempts = 0;
        loop {
            let before: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            for _ in 0..2 {
                for p in 0..j {
                    let mut dot = C64::new(0.0, 0.0);
                    for i in 0..n {
                        dot += q[(i, p)].conj() * q[(i, j)];
                    }
                    for i in 0..n {
                        let qp = q[(i, p)];
                        q[(i, j)] -= qp * dot;
                    }
                }
            }
            let after: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            if after > 1e-8 * before.max(f64::MIN_POSITIVE) && after > 1e-300 {
                for i in 0..n {
                    q[(i, j)] /= after;
                }
                break;
            }
            attempts += 1;
            assert!(attempts < 100, "cannot extend orthonormal block");
            for i in 0..n {
                q[(i, j)] = fresh();
            }
        }
    }
}

/// Dense SVD of `Ψ`; returns descending squared singular values and the
/// left singular vectors.
pub fn dense_left_singular(psi: MatRef<'_, C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let svd = psi.thin_svd().map_err(|_| QStateError::EigenFailure)?;
    let s = svd.S().column_vector();
    let r = s.nrows();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
    let weights = order.iter().map(|&i| s[i].re * s[i].re).collect();
    let u = svd.U();
    let u = Mat::from_fn(u.nrows(), r, |i, j| u[(i, order[j])]);
    Ok((weights, u))
}

fn has_degeneracy(descending: &[f64]) -> bool {
    descending
        .windows(2)
        .any(|w| w[1] > ZERO_WEIGHT && w[0] - w[1] < DEGENERACY_GAP)
}

fn check_cut(state: &PureState, cut: &Region) -> Result<()> {
    if cut.n_qubits() != state.n_qubits() {
        return Err(QStateError::DimensionMismatch {
            expected: state.n_qubits(),
            got: cut.n_qubits(),
        });
    }
    Ok(())
}

/// `1 − Σ_{i<k} w_i`, clipped to `[0, 1]`.
pub fn truncation_error(weights: &[f64], k: usize) -> f64 {
    let kept: f64 = weights.iter().take(k).sum();
    (1.0 - kept).clamp(0.0, 1.0)
}
