//! Nested spike extraction: the top Schmidt vector of one level is cut in
//! half again to give the next.

use crate::{Result, SpectraError};
use hent_core::schmidt::{
    dense_left_singular, top_schmidt_with, SubspaceOptions, DEGENERACY_GAP, DENSE_CUT_DIM,
};
use hent_core::entropy::renyi_entropy;
use hent_core::linalg::squared_singular_values;
use hent_core::{ProductState, PureState, Region, C64};

#[derive(Debug, Clone)]
pub struct HierarchyLevel {
    /// 1 for the spectrum of `ρ_{A_{1/2}}`.
    pub j: usize,
    /// First site of this level's region in the original chain.
    pub offset: usize,
    /// `|λ₁⟩` of the cut that produced this level; lives on `region_size`
    /// qubits.
    pub state: PureState,
    /// `|λ₂⟩` of the same cut, when it has nonzero weight.
    pub second_state: Option<PureState>,
    /// Descending Schmidt weights of the producing cut.
    pub weights: Vec<f64>,
    /// `1 − weights[0]`.
    pub mu: f64,
    /// The leading weight was tied and resolved against `reference`.
    pub degenerate: bool,
    /// Product state on this level's region used to break ties.
    pub reference: ProductState,
}

impl HierarchyLevel {
    /// Level 1: spectrum and spike of `psi` across `cut`.
    pub fn top(psi: &PureState, cut: &Region, reference: &ProductState) -> Result<Self> {
        if reference.n_qubits() != psi.n_qubits() {
            return Err(SpectraError::InvalidArgument(
                "reference state size differs from psi".into(),
            ));
        }
        psi.require_normalized()?;
        level_from_cut(1, cut.start(), psi, cut, &reference.restrict(cut))
    }

    pub fn region_size(&self) -> usize {
        self.state.n_qubits()
    }

    /// Cut on this level's state used to produce the next level: its
    /// first `⌊m/2⌋` sites.
    pub fn sub_cut(&self) -> Result<Region> {
        let m = self.region_size();
        if m < 2 {
            return Err(SpectraError::InvalidArgument(format!(
                "a level on {m} qubit(s) cannot be cut further"
            )));
        }
        Ok(Region::new(m, 0, m / 2)?)
    }

    /// Level `j + 1`.
    pub fn descend(&self) -> Result<Self> {
        let cut = self.sub_cut()?;
        level_from_cut(
            self.j + 1,
            self.offset,
            &self.state,
            &cut,
            &self.reference.restrict(&cut),
        )
    }

    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        Ok(renyi_entropy(&self.weights, alpha)?)
    }

    /// `S_α` of the second Schmidt state across this level's sub-cut minus
    /// that of the first.
    pub fn second_state_contrast(&self, alpha: f64) -> Result<Option<f64>> {
        let Some(second) = &self.second_state else {
            return Ok(None);
        };
        let cut = self.sub_cut()?;
        let s2 = renyi_entropy(&cut_weights(second, &cut)?, alpha)?;
        let s1 = renyi_entropy(&cut_weights(&self.state, &cut)?, alpha)?;
        Ok(Some(s2 - s1))
    }
}

/// Levels `1..=depth` starting from `psi` across `cut`.
pub fn hierarchy(
    psi: &PureState,
    cut: &Region,
    reference: &ProductState,
    depth: usize,
) -> Result<Vec<HierarchyLevel>> {
    if depth == 0 {
        return Ok(Vec::new());
    }
    let mut levels = vec![HierarchyLevel::top(psi, cut, reference)?];
    while levels.len() < depth {
        let next = levels.last().unwrap().descend()?;
        levels.push(next);
    }
    Ok(levels)
}

/// Descending Schmidt weights of `state` across `cut`.
pub fn cut_weights(state: &PureState, cut: &Region) -> Result<Vec<f64>> {
    let mut w = squared_singular_values(state.amplitude_matrix(cut).as_ref())?;
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

fn level_from_cut(
    j: usize,
    offset: usize,
    state: &PureState,
    cut: &Region,
    reference: &ProductState,
) -> Result<HierarchyLevel> {
    let psi = state.amplitude_matrix(cut);
    let (weights, cols): (Vec<f64>, Vec<Vec<C64>>) = if cut.dim() <= DENSE_CUT_DIM {
        let (w, u) = dense_left_singular(psi.as_ref())?;
        // keep every column tied with the leading one, plus the next
        let tied = w.iter().take_while(|&&x| w[0] - x < DEGENERACY_GAP).count();
        let keep = (tied + 1).min(w.len());
        let cols = (0..keep)
            .map(|c| (0..u.nrows()).map(|r| u[(r, c)]).collect())
            .collect();
        (w, cols)
    } else {
        let mut w = squared_singular_values(psi.as_ref())?;
        w.sort_by(|a, b| b.total_cmp(a));
        let tied = w.iter().take_while(|&&x| w[0] - x < DEGENERACY_GAP).count();
        let keep = (tied + 1).min(w.len());
        let top = top_schmidt_with(state, cut, keep, SubspaceOptions::default())?;
        let u = top.left_vectors.expect("iterative solver returns vectors");
        let cols = (0..keep)
            .map(|c| (0..u.nrows()).map(|r| u[(r, c)]).collect())
            .collect();
        (w, cols)
    };

    let tied = weights
        .iter()
        .take_while(|&&x| weights[0] - x < DEGENERACY_GAP)
        .count()
        .min(cols.len());
    let degenerate = tied > 1;
    let first = if degenerate {
        resolve_tie(&cols[..tied], &reference.to_pure())
    } else {
        cols[0].clone()
    };
    let second = if degenerate {
        // another vector of the tied block, orthogonal to the chosen one
        Some(orthogonal_partner(&cols[..tied], &first))
    } else if cols.len() > 1 && weights[1] > 0.0 {
        Some(cols[1].clone())
    } else {
        None
    };
    let n = cut.len();
    Ok(HierarchyLevel {
        j,
        offset,
        state: normalized(n, first)?,
        second_state: second.map(|c| normalized(n, c)).transpose()?,
        mu: (1.0 - weights[0]).max(0.0),
        weights,
        degenerate,
        reference: reference.clone(),
    })
}

/// Normalized projection of `reference` onto the span of `block`; the first
/// column if the projection vanishes.
fn resolve_tie(block: &[Vec<C64>], reference: &PureState) -> Vec<C64> {
    let r = reference.amplitudes();
    let mut out = vec![C64::new(0.0, 0.0); r.len()];
    for col in block {
        let c: C64 = col.iter().zip(r).map(|(u, x)| u.conj() * x).sum();
        for (o, u) in out.iter_mut().zip(col) {
            *o += u * c;
        }
    }
    let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return block[0].clone();
    }
    out.iter().map(|z| z / norm).collect()
}

fn orthogonal_partner(block: &[Vec<C64>], chosen: &[C64]) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for col in block {
        let c: C64 = chosen.iter().zip(col).map(|(u, x)| u.conj() * x).sum();
        let rest: Vec<C64> = col.iter().zip(chosen).map(|(x, u)| x - u * c).collect();
        let norm = rest.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, rest.iter().map(|z| z / norm).collect()));
        }
    }
    best.expect("tied block has at least two columns").1
}

fn normalized(n: usize, amps: Vec<C64>) -> Result<PureState> {
    let mut s = PureState::from_amplitudes(n, amps)?;
    s.normalize()?;
    Ok(s)
}
