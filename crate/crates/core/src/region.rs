use crate::{QStateError, Result};

/// A contiguous block of sites `start..start + len` inside a chain of
/// `n_qubits` sites. Sites are zero-based; site `k` is bit `k` of a basis
/// index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    n_qubits: usize,
    start: usize,
    len: usize,
}

impl Region {
    pub fn new(n_qubits: usize, start: usize, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(QStateError::EmptyRegion);
        }
        if start + len > n_qubits {
            return Err(QStateError::SiteOutOfRange {
                site: start + len - 1,
                n_qubits,
            });
        }
        if len == n_qubits {
            return Err(QStateError::RegionCoversAll { n_qubits });
        }
        Ok(Self {
            n_qubits,
            start,
            len,
        })
    }

    /// Builds a region from an explicit site list, which must be sorted and
    /// contiguous.
    pub fn from_sites(n_qubits: usize, sites: &[usize]) -> Result<Self> {
        let Some(&first) = sites.first() else {
            return Err(QStateError::EmptyRegion);
        };
        if sites.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(QStateError::NonContiguousRegion(sites.to_vec()));
        }
        Self::new(n_qubits, first, sites.len())
    }

    /// Sites `0..floor(n/2)`.
    pub fn first_half(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, n_qubits / 2)
    }

    /// Sites `n/2..n` (the complement of `first_half`).
    pub fn second_half(n_qubits: usize) -> Result<Self> {
        let half = n_qubits / 2;
        Self::new(n_qubits, half, n_qubits - half)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    pub fn sites(&self) -> std::ops::Range<usize> {
        self.start..self.end()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites().contains(&site)
    }

    /// Hilbert-space dimension of the region.
    pub fn dim(&self) -> usize {
        1 << self.len
    }

    /// Hilbert-space dimension of the complement.
    pub fn complement_dim(&self) -> usize {
        1 << (self.n_qubits - self.len)
    }

    /// The complement as a region, if it is contiguous (the region touches
    /// one end of the chain).
    pub fn contiguous_complement(&self) -> Option<Region> {
        if self.start == 0 {
            Some(Region {
                n_qubits: self.n_qubits,
                start: self.len,
                len: self.n_qubits - self.len,
            })
        } else if self.end() == self.n_qubits {
            Some(Region {
                n_qubits: self.n_qubits,
                start: 0,
                len: self.start,
            })
        } else {
            None
        }
    }

    /// Splits a full basis index into (index inside the region, index inside
    /// the complement). Complement bits keep their relative order.
    #[inline]
    pub fn split_index(&self, index: usize) -> (usize, usize) {
        let low_mask = (1usize << self.start) - 1;
        let inner = (index >> self.start) & ((1usize << self.len) - 1);
        let outer = (index & low_mask) | ((index >> self.end()) << self.start);
        (inner, outer)
    }

    /// Inverse of [`Region::split_index`].
    #[inline]
    pub fn join_index(&self, inner: usize, outer: usize) -> usize {
        let low_mask = (1usize << self.start) - 1;
        (outer & low_mask) | (inner << self.start) | ((outer >> self.start) << self.end())
    }

    /// The same block of sites re-expressed relative to a sub-chain that
    /// starts at `offset` and has `n_qubits` sites.
    pub fn relative_to(&self, offset: usize, n_qubits: usize) -> Result<Region> {
        if self.start < offset {
            return Err(QStateError::SiteOutOfRange {
                site: self.start,
                n_qubits,
            });
        }
        Region::new(n_qubits, self.start - offset, self.len)
    }
}
