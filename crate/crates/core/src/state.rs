//! Pure states on qubit chains.
//!
//! Site `k` (zero-based) is bit `k` of the basis index, so site 0 is the
//! least significant bit. Every routine in the workspace uses this ordering.

use crate::gates::{unitarity_residual2, unitarity_residual4, Gate2, Gate4, Pauli};
use crate::{QStateError, Region, Result, C64};

/// Tolerance on `|‖ψ‖ - 1|` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Gates whose unitarity residual exceeds this are rejected.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
    normalized: bool,
}

impl PureState {
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_qubits {
            return Err(QStateError::LengthMismatch {
                n_qubits,
                len: amplitudes.len(),
            });
        }
        let mut s = Self {
            n_qubits,
            amplitudes,
            normalized: false,
        };
        s.normalized = (s.norm() - 1.0).abs() <= NORM_TOL;
        Ok(s)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        assert!(index < 1 << n_qubits, "basis index out of range");
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
            normalized: true,
        }
    }

    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Mutable access; clears the normalized flag.
    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        self.normalized = false;
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QStateError::NotNormalized { norm });
        }
        let inv = 1.0 / norm;
        for a in &mut self.amplitudes {
            *a *= inv;
        }
        self.normalized = true;
        Ok(norm)
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(QStateError::NotNormalized { norm: self.norm() })
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(QStateError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self + scale * other`, without renormalizing.
    pub fn add_scaled(&self, scale: C64, other: &PureState) -> Result<PureState> {
        if self.dim() != other.dim() {
            return Err(QStateError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a + scale * b)
            .collect();
        PureState::from_amplitudes(self.n_qubits, amplitudes)
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_qubits {
            Err(QStateError::SiteOutOfRange {
                site,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    pub fn apply_single_site_gate(&mut self, gate: &Gate2, site: usize) -> Result<()> {
        self.check_site(site)?;
        let residual = unitarity_residual2(gate);
        if residual > UNITARITY_TOL {
            return Err(QStateError::NonUnitary { residual });
        }
        self.apply_single_site_unchecked(gate, site);
        Ok(())
    }

    /// Applies an arbitrary 2×2 matrix at `site` with no unitarity check.
    /// The normalized flag is left untouched, so callers must only pass
    /// unitaries here.
    pub(crate) fn apply_single_site_unchecked(&mut self, gate: &Gate2, site: usize) {
        let mask = 1usize << site;
        let half = self.amplitudes.len() >> 1;
        for k in 0..half {
            let i0 = insert_zero_bit(k, site);
            let i1 = i0 | mask;
            let a0 = self.amplitudes[i0];
            let a1 = self.amplitudes[i1];
            self.amplitudes[i0] = gate[0][0] * a0 + gate[0][1] * a1;
            self.amplitudes[i1] = gate[1][0] * a0 + gate[1][1] * a1;
        }
    }

    pub fn apply_pauli(&mut self, pauli: Pauli, site: usize) -> Result<()> {
        self.check_site(site)?;
        match pauli {
            Pauli::I => {}
            Pauli::Z => {
                let mask = 1usize << site;
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
            p => self.apply_single_site_unchecked(&p.matrix(), site),
        }
        Ok(())
    }

    /// Applies a 4×4 unitary to the ordered pair `sites = (a, b)`; the gate's
    /// local basis is `|q_a q_b⟩`.
    pub fn apply_two_site_gate(&mut self, gate: &Gate4, sites: (usize, usize)) -> Result<()> {
        let (a, b) = sites;
        self.check_site(a)?;
        self.check_site(b)?;
        if a == b {
            return Err(QStateError::RepeatedSite(a));
        }
        let residual = unitarity_residual4(gate);
        if residual > UNITARITY_TOL {
            return Err(QStateError::NonUnitary { residual });
        }
        let ma = 1usize << a;
        let mb = 1usize << b;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let quarter = self.amplitudes.len() >> 2;
        for k in 0..quarter {
            let base = insert_zero_bit(insert_zero_bit(k, lo), hi);
            let idx = [base, base | mb, base | ma, base | ma | mb];
            let v = idx.map(|i| self.amplitudes[i]);
            for (r, &i) in idx.iter().enumerate() {
                let row = &gate[r];
                self.amplitudes[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            }
        }
        Ok(())
    }

    /// Splits `self = |x⟩ ⊗ |bra⟩_B + |y⟩` with `⟨bra_B|y⟩ = 0`.
    ///
    /// `bra` is the amplitude vector of the B-side state in the region's own
    /// bit order. The returned `x` lives on the complement of `region_b`
    /// (complement sites keep their relative order); `y` is a full-size
    /// state. Neither is renormalized.
    pub fn partial_project(&self, region_b: &Region, bra: &[C64]) -> Result<Projection> {
        if region_b.n_qubits() != self.n_qubits {
            return Err(QStateError::DimensionMismatch {
                expected: self.n_qubits,
                got: region_b.n_qubits(),
            });
        }
        if bra.len() != region_b.dim() {
            return Err(QStateError::DimensionMismatch {
                expected: region_b.dim(),
                got: bra.len(),
            });
        }
        let bra_norm: f64 = bra.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (bra_norm - 1.0).abs() > NORM_TOL {
            return Err(QStateError::NotNormalized { norm: bra_norm });
        }
        let mut x = vec![C64::new(0.0, 0.0); region_b.complement_dim()];
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let (inner, outer) = region_b.split_index(idx);
            x[outer] += bra[inner].conj() * amp;
        }
        let mut y = self.amplitudes.clone();
        for (idx, amp) in y.iter_mut().enumerate() {
            let (inner, outer) = region_b.split_index(idx);
            *amp -= x[outer] * bra[inner];
        }
        Ok(Projection {
            x: PureState::from_amplitudes(self.n_qubits - region_b.len(), x)?,
            y: PureState::from_amplitudes(self.n_qubits, y)?,
        })
    }

    /// Reshapes into the `dim(region) × dim(complement)` amplitude matrix,
    /// returned column-major.
    pub fn amplitude_matrix(&self, region: &Region) -> faer::Mat<C64> {
        let rows = region.dim();
        let cols = region.complement_dim();
        if region.start() == 0 {
            // already column-major with the region in the low bits
            return faer::Mat::from_fn(rows, cols, |i, j| self.amplitudes[i + rows * j]);
        }
        let mut m = faer::Mat::<C64>::zeros(rows, cols);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let (a, b) = region.split_index(idx);
            m[(a, b)] = *amp;
        }
        m
    }
}

/// Result of [`PureState::partial_project`].
#[derive(Debug, Clone)]
pub struct Projection {
    pub x: PureState,
    pub y: PureState,
}

/// `k` with a zero bit inserted at position `bit`.
#[inline]
fn insert_zero_bit(k: usize, bit: usize) -> usize {
    let low = k & ((1usize << bit) - 1);
    ((k >> bit) << (bit + 1)) | low
}

/// A product state given by one normalized qubit vector per site.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    sites: Vec<[C64; 2]>,
}

impl ProductState {
    pub fn new(sites: Vec<[C64; 2]>) -> Result<Self> {
        for s in &sites {
            let n = (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
            if (n - 1.0).abs() > NORM_TOL {
                return Err(QStateError::NotNormalized { norm: n });
            }
        }
        Ok(Self { sites })
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self {
            sites: vec![[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]; n_qubits],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    pub fn site(&self, k: usize) -> [C64; 2] {
        self.sites[k]
    }

    /// Amplitudes of the sub-product on `region`, in the region's bit order.
    pub fn vector_on(&self, region: &Region) -> Vec<C64> {
        kron_sites(&self.sites[region.sites()])
    }

    /// The factor living on `region`, as a product state of `region.len()`
    /// qubits.
    pub fn restrict(&self, region: &Region) -> ProductState {
        ProductState {
            sites: self.sites[region.sites()].to_vec(),
        }
    }

    pub fn to_pure(&self) -> PureState {
        let amplitudes = kron_sites(&self.sites);
        PureState {
            n_qubits: self.sites.len(),
            amplitudes,
            normalized: true,
        }
    }
}

fn kron_sites(sites: &[[C64; 2]]) -> Vec<C64> {
    let mut v = vec![C64::new(1.0, 0.0)];
    for s in sites {
        let mut next = vec![C64::new(0.0, 0.0); v.len() * 2];
        // each new site becomes the next higher bit
        let half = v.len();
        for (i, a) in v.iter().enumerate() {
            next[i] = a * s[0];
            next[i + half] = a * s[1];
        }
        v = next;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{identity4, swap};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn site_k_is_bit_k() {
        let mut s = PureState::zero(5);
        s.apply_pauli(Pauli::X, 3).unwrap();
        assert_eq!(s.amplitudes()[1 << 3], c(1.0));
        let mut p = vec![[c(1.0), c(0.0)]; 5];
        p[1] = [c(0.0), c(1.0)];
        let prod = ProductState::new(p).unwrap().to_pure();
        assert_eq!(prod.amplitudes()[0b00010], c(1.0));
    }

    #[test]
    fn identity_gate_is_bit_exact() {
        let amps: Vec<C64> = (0..8).map(|i| C64::new(i as f64 * 0.1, -0.05 * i as f64)).collect();
        let mut s = PureState::from_amplitudes(3, amps.clone()).unwrap();
        s.apply_two_site_gate(&identity4(), (0, 2)).unwrap();
        assert_eq!(s.amplitudes(), &amps[..]);
    }

    #[test]
    fn swap_moves_excitation() {
        // site 0 in |0>, site 1 in |1>
        let mut s = PureState::basis(2, 0b10);
        s.apply_two_site_gate(&swap(), (0, 1)).unwrap();
        assert_eq!(s.amplitudes()[0b01], c(1.0));
        assert_eq!(s.amplitudes()[0b10], c(0.0));
    }

    #[test]
    fn gate_errors() {
        let mut s = PureState::zero(3);
        let mut bad = identity4();
        bad[0][0] = c(1.1);
        match s.apply_two_site_gate(&bad, (0, 1)) {
            Err(QStateError::NonUnitary { residual }) => assert!((residual - 0.21).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            s.apply_two_site_gate(&identity4(), (0, 3)),
            Err(QStateError::SiteOutOfRange { site: 3, .. })
        ));
        assert_eq!(
            s.apply_two_site_gate(&identity4(), (1, 1)),
            Err(QStateError::RepeatedSite(1))
        );
    }

    #[test]
    fn project_zero_b_on_product() {
        let n = 4;
        let b = Region::second_half(n).unwrap();
        let zero_b = ProductState::zero(n).vector_on(&b);
        let p = PureState::zero(n).partial_project(&b, &zero_b).unwrap();
        assert_eq!(p.x.n_qubits(), 2);
        assert!((p.x.norm() - 1.0).abs() < 1e-15);
        assert!(p.y.norm() < 1e-15);

        // |x>_A ⊗ |1_B>: orthogonal to <0_B|
        let mut s = PureState::zero(n);
        s.apply_pauli(Pauli::X, 3).unwrap();
        s.apply_pauli(Pauli::X, 0).unwrap();
        let p = s.partial_project(&b, &zero_b).unwrap();
        assert!(p.x.norm() < 1e-15);
        assert!((p.y.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn project_rejects_wrong_bra() {
        let s = PureState::zero(4);
        let b = Region::second_half(4).unwrap();
        assert!(s.partial_project(&b, &[c(1.0)]).is_err());
        assert!(s.partial_project(&b, &[c(1.0), c(1.0), c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn normalized_flag_tracks_mutation() {
        let mut s = PureState::zero(2);
        assert!(s.is_normalized());
        s.amplitudes_mut()[1] = c(1.0);
        assert!(!s.is_normalized());
        s.normalize().unwrap();
        assert!(s.is_normalized());
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }
}
