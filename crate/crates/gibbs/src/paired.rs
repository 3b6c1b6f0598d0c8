//! Schmidt structure of the purification across `A_s A_a | B_s B_a`.

use crate::quench::PurificationState;
use crate::{GibbsError, Result};
use faer::Mat;
use hent_core::gates::Pauli;
use hent_core::linalg::{eigendecompose_hermitian, hermitian_eigenvalues};
use hent_core::schmidt::{top_gram_eigen, SubspaceOptions};
use hent_core::{PureState, Region, C64};

/// Gram matrices up to this dimension are diagonalized densely when
/// vectors are requested.
pub const DENSE_PAIRED_DIM: usize = 1 << 10;

/// A product of single-site Paulis on the system, sites absolute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    pub ops: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn single(site: usize, p: Pauli) -> Self {
        Self {
            ops: vec![(site, p)],
        }
    }

    /// `Z_start Z_{start+1} ⋯ Z_{start+len−1}`.
    pub fn z_string(start: usize, len: usize) -> Self {
        Self {
            ops: (start..start + len).map(|s| (s, Pauli::Z)).collect(),
        }
    }

    pub fn identity() -> Self {
        Self { ops: Vec::new() }
    }

    /// Parses whitespace-separated terms like `Z0 X3`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for term in s.split_whitespace() {
            let mut chars = term.chars();
            let p = chars
                .next()
                .and_then(Pauli::from_char)
                .ok_or_else(|| GibbsError::InvalidArgument(format!("bad Pauli term {term:?}")))?;
            let site = chars
                .as_str()
                .parse()
                .map_err(|_| GibbsError::InvalidArgument(format!("bad site in {term:?}")))?;
            ops.push((site, p));
        }
        Ok(Self { ops })
    }

    pub fn supported_in(&self, region: &Region) -> bool {
        self.ops.iter().all(|&(s, _)| region.contains(s))
    }

    /// Applies to a vector on `n` qubits whose bit `k` is site `k + offset`.
    fn apply(&self, amps: &mut [C64], offset: usize) {
        for &(site, p) in &self.ops {
            let bit = 1usize << (site - offset);
            match p {
                Pauli::I => {}
                Pauli::Z => {
                    for (i, a) in amps.iter_mut().enumerate() {
                        if i & bit != 0 {
                            *a = -*a;
                        }
                    }
                }
                Pauli::X | Pauli::Y => {
                    for i in 0..amps.len() {
                        if i & bit == 0 {
                            let (lo, hi) = (amps[i], amps[i | bit]);
                            if p == Pauli::X {
                                amps[i] = hi;
                                amps[i | bit] = lo;
                            } else {
                                // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
                                amps[i] = C64::new(hi.im, -hi.re);
                                amps[i | bit] = C64::new(-lo.im, lo.re);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// `R[(a_r, a_c), (b_r, b_c)] = M[(a_r, b_r), (a_c, b_c)]`, with row index
/// `a_r + d_A a_c` and column index `b_r + d_B b_c`.
pub fn paired_matrix(p: &PurificationState, a: &Region) -> Result<Mat<C64>> {
    if a.n_qubits() != p.l {
        return Err(GibbsError::InvalidArgument(format!(
            "region on {} qubits for an {}-site chain",
            a.n_qubits(),
            p.l
        )));
    }
    let da = a.dim();
    let db = a.complement_dim();
    let n = p.m.nrows();
    let split: Vec<(usize, usize)> = (0..n).map(|i| a.split_index(i)).collect();
    let mut r = Mat::<C64>::zeros(da * da, db * db);
    for j in 0..n {
        let (ac, bc) = split[j];
        for i in 0..n {
            let (ar, br) = split[i];
            r[(ar + da * ac, br + db * bc)] = p.m[(i, j)];
        }
    }
    Ok(r)
}

/// Schmidt data of a purification across a paired cut.
#[derive(Debug, Clone)]
pub struct PairedSpectrum {
    /// Descending.
    pub weights: Vec<f64>,
    /// Columns are unit vectors on `A_s A_a` indexed `a_r + d_A a_c`.
    pub vectors: Option<Mat<C64>>,
    pub region: Region,
    pub truncated_rank: Option<usize>,
    pub residuals: Vec<f64>,
}

impl PairedSpectrum {
    pub fn leading_weight(&self) -> f64 {
        self.weights[0]
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Full Schmidt spectrum across `A_s A_a | B_s B_a`.
pub fn purification_schmidt(p: &PurificationState, a: &Region) -> Result<PairedSpectrum> {
    let r = paired_matrix(p, a)?;
    let gram = if r.nrows() <= r.ncols() {
        &r * r.adjoint()
    } else {
        r.adjoint() * &r
    };
    let mut w = hermitian_eigenvalues(gram.as_ref())?;
    w.sort_by(|x, y| y.total_cmp(x));
    for x in &mut w {
        *x = x.max(0.0);
    }
    Ok(PairedSpectrum {
        weights: w,
        vectors: None,
        region: *a,
        truncated_rank: None,
        residuals: Vec::new(),
    })
}

/// Leading `k` Schmidt weights and `A_s A_a` vectors.
pub fn purification_schmidt_top(
    p: &PurificationState,
    a: &Region,
    k: usize,
) -> Result<PairedSpectrum> {
    let r = paired_matrix(p, a)?;
    let d = r.nrows();
    if k == 0 || k > d {
        return Err(GibbsError::InvalidArgument(format!(
            "k = {k} outside 1..={d}"
        )));
    }
    if d <= DENSE_PAIRED_DIM {
        let gram = &r * r.adjoint();
        let eig = eigendecompose_hermitian(gram.as_ref())?;
        let top: Vec<usize> = (0..k).map(|i| d - 1 - i).collect();
        return Ok(PairedSpectrum {
            weights: top.iter().map(|&i| eig.values[i].max(0.0)).collect(),
            vectors: Some(Mat::from_fn(d, k, |row, c| eig.vectors[(row, top[c])])),
            region: *a,
            truncated_rank: Some(k),
            residuals: vec![0.0; k],
        });
    }
    let top = top_gram_eigen(r.as_ref(), k, SubspaceOptions::default())?;
    Ok(PairedSpectrum {
        weights: top.values.iter().map(|x| x.max(0.0)).collect(),
        vectors: Some(top.vectors),
        region: *a,
        truncated_rank: Some(k),
        residuals: top.residuals,
    })
}

/// `Σ_{i≤k} λ̃_i ⟨u_i|O ⊗ 1_{A_a}|u_i⟩` with `λ̃` the leading weights
/// renormalized to sum to one.
pub fn truncated_expectation(
    p: &PurificationState,
    a: &Region,
    k: usize,
    op: &PauliString,
) -> Result<C64> {
    if !op.supported_in(a) {
        return Err(GibbsError::InvalidArgument(format!(
            "operator {op:?} not supported in {a:?}"
        )));
    }
    truncated_expectation_with(&purification_schmidt_top(p, a, k)?, k, op)
}

/// As [`truncated_expectation`], from a spectrum already holding at least
/// `k` vectors.
pub fn truncated_expectation_with(
    spec: &PairedSpectrum,
    k: usize,
    op: &PauliString,
) -> Result<C64> {
    let a = &spec.region;
    if !op.supported_in(a) {
        return Err(GibbsError::InvalidArgument(format!(
            "operator {op:?} not supported in {a:?}"
        )));
    }
    let Some(u) = spec.vectors.as_ref() else {
        return Err(GibbsError::InvalidArgument(
            "spectrum carries no vectors".into(),
        ));
    };
    if k == 0 || k > u.ncols() {
        return Err(GibbsError::InvalidArgument(format!(
            "k = {k} with {} vectors",
            u.ncols()
        )));
    }
    let total: f64 = spec.weights[..k].iter().sum();
    let da = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for (i, &w) in spec.weights[..k].iter().enumerate() {
        let mut term = C64::new(0.0, 0.0);
        for ac in 0..da {
            let col: Vec<C64> = (0..da).map(|ar| u[(ar + da * ac, i)]).collect();
            let mut ocol = col.clone();
            op.apply(&mut ocol, a.start());
            term += col
                .iter()
                .zip(&ocol)
                .map(|(x, y)| x.conj() * y)
                .sum::<C64>();
        }
        acc += term * (w / total);
    }
    Ok(acc)
}

/// `tr(ρ O) = tr(M M† O)`.
pub fn exact_expectation(p: &PurificationState, op: &PauliString) -> Result<C64> {
    if op.ops.iter().any(|&(s, _)| s >= p.l) {
        return Err(GibbsError::InvalidArgument(format!(
            "operator {op:?} off the chain"
        )));
    }
    let n = p.m.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        let col: Vec<C64> = (0..n).map(|i| p.m[(i, j)]).collect();
        let mut ocol = col.clone();
        op.apply(&mut ocol, 0);
        acc += col
            .iter()
            .zip(&ocol)
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>();
    }
    Ok(acc)
}

/// Column `i` of `spec.vectors` as a state on `2m` qubits ordered
/// `(s_0..s_{q−1}, a_0..a_{q−1}, s_q..s_{m−1}, a_q..a_{m−1})` with
/// `q = ⌊m/2⌋`, together with the cut on its first `2q` qubits: the first
/// half of `A` taken on system and ancilla together.
pub fn paired_vector_state(spec: &PairedSpectrum, i: usize) -> Result<(PureState, Region)> {
    let Some(u) = spec.vectors.as_ref() else {
        return Err(GibbsError::InvalidArgument(
            "spectrum carries no vectors".into(),
        ));
    };
    if i >= u.ncols() {
        return Err(GibbsError::InvalidArgument(format!(
            "vector {i} of {} requested",
            u.ncols()
        )));
    }
    let m = spec.region.len();
    if m < 2 {
        return Err(GibbsError::InvalidArgument(format!(
            "|A| = {m} cannot be cut further"
        )));
    }
    let q = m / 2;
    let low = (1usize << q) - 1;
    let mut amps = vec![C64::new(0.0, 0.0); u.nrows()];
    for row in 0..u.nrows() {
        let (ar, ac) = (row & ((1 << m) - 1), row >> m);
        let idx = (ar & low) | ((ac & low) << q) | ((ar >> q) << (2 * q)) | ((ac >> q) << (m + q));
        amps[idx] = u[(row, i)];
    }
    let mut state = PureState::from_amplitudes(2 * m, amps)?;
    state.normalize()?;
    Ok((state, Region::new(2 * m, 0, 2 * q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::IsingSpec;
    use crate::quench::{IsingEigen, QuenchRun};
    use std::sync::Arc;

    fn purif(spec: IsingSpec, beta: f64, theta: f64, t: f64) -> PurificationState {
        let eig = Arc::new(IsingEigen::compute(&spec).unwrap());
        QuenchRun::new(eig, beta, theta).unwrap().purification(t)
    }

    #[test]
    fn infinite_temperature_has_no_paired_entanglement() {
        let p = purif(IsingSpec::chaotic(6).unwrap(), 0.0, 0.0, 1.0);
        for a in [
            Region::first_half(6).unwrap(),
            Region::new(6, 2, 2).unwrap(),
        ] {
            let s = purification_schmidt(&p, &a).unwrap();
            assert!((s.weights[0] - 1.0).abs() < 1e-12);
            assert!(s.weights[1..].iter().all(|&w| w < 1e-12));
        }
    }

    #[test]
    fn classical_chain_has_one_bond_of_paired_entanglement() {
        // with no single-site fields e^{−βH/2} factorizes over bonds; the
        // bond across the cut is
        // cosh(β/2) 1 − sinh(β/2) ZZ, so the paired weights are
        // cosh²(β/2)/cosh β and sinh²(β/2)/cosh β
        let beta: f64 = 1.3;
        let spec = IsingSpec::new(6, 0.0, 0.0, false).unwrap();
        let p = purif(spec, beta, 0.0, 2.0);
        let s = purification_schmidt(&p, &Region::first_half(6).unwrap()).unwrap();
        let c2 = (beta / 2.0).cosh().powi(2) / beta.cosh();
        assert!((s.weights[0] - c2).abs() < 1e-12);
        assert!((s.weights[1] - (1.0 - c2)).abs() < 1e-12);
        assert!(s.weights[2..].iter().all(|&w| w < 1e-12));
    }

    #[test]
    fn full_rank_truncation_is_exact() {
        let p = purif(IsingSpec::chaotic(6).unwrap(), 0.8, 0.5, 3.0);
        let a = Region::first_half(6).unwrap();
        for op in [
            PauliString::single(0, Pauli::Z),
            PauliString::z_string(0, 3),
            PauliString::parse("X1 Y2").unwrap(),
        ] {
            let exact = exact_expectation(&p, &op).unwrap();
            let trunc = truncated_expectation(&p, &a, 64, &op).unwrap();
            assert!((exact - trunc).norm() <= 1e-10, "{op:?}");
        }
        let one = truncated_expectation(&p, &a, 1, &PauliString::identity()).unwrap();
        assert!((one - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn top_weights_match_full_spectrum() {
        let p = purif(IsingSpec::chaotic(6).unwrap(), 0.6, 0.5, 4.0);
        let a = Region::first_half(6).unwrap();
        let full = purification_schmidt(&p, &a).unwrap();
        let top = purification_schmidt_top(&p, &a, 3).unwrap();
        for i in 0..3 {
            assert!((full.weights[i] - top.weights[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn operator_outside_a_is_rejected() {
        let p = purif(IsingSpec::chaotic(4).unwrap(), 0.5, 0.5, 1.0);
        let a = Region::first_half(4).unwrap();
        assert!(truncated_expectation(&p, &a, 1, &PauliString::single(3, Pauli::Z)).is_err());
        assert!(PauliString::parse("Q1").is_err());
    }

    #[test]
    fn pauli_y_action() {
        let mut v = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        PauliString::single(0, Pauli::Y).apply(&mut v, 0);
        assert_eq!(v, vec![C64::new(0.0, 0.0), C64::new(0.0, 1.0)]);
    }

    #[test]
    fn paired_vector_sub_cut_matches_explicit_partial_trace() {
        let p = purif(IsingSpec::chaotic(4).unwrap(), 0.7, 0.5, 3.0);
        let a = Region::first_half(4).unwrap();
        let spec = purification_schmidt_top(&p, &a, 1).unwrap();
        let u = spec.vectors.as_ref().unwrap();
        // A = sites {0, 1}; keep (s0, a0), trace (s1, a1)
        let mut rho = Mat::<C64>::zeros(4, 4);
        for (r, c) in (0..4).flat_map(|r| (0..4).map(move |c| (r, c))) {
            let (s0, a0, s0p, a0p) = (r & 1, r >> 1, c & 1, c >> 1);
            for (s1, a1) in (0..2).flat_map(|x| (0..2).map(move |y| (x, y))) {
                let i = s0 + 2 * s1 + 4 * (a0 + 2 * a1);
                let j = s0p + 2 * s1 + 4 * (a0p + 2 * a1);
                rho[(r, c)] += u[(i, 0)] * u[(j, 0)].conj();
            }
        }
        let mut oracle = hermitian_eigenvalues(rho.as_ref()).unwrap();
        oracle.sort_by(|x, y| y.total_cmp(x));
        let (state, cut) = paired_vector_state(&spec, 0).unwrap();
        assert_eq!((cut.start(), cut.len(), state.n_qubits()), (0, 2, 4));
        let got = hent_core::schmidt_decompose(&state, &cut).unwrap().weights;
        for (x, y) in got.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-10, "{got:?} vs {oracle:?}");
        }
        assert!(oracle[1] > 1e-6);
        assert!(paired_vector_state(&spec, 1).is_err());
    }
}
