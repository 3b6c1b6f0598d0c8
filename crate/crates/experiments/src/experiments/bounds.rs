//! Randomized checks of the spike-cloud inequalities, the overlap chain and
//! the overlap lemma.

use super::circuits::{circuit_sample, depth_for};
use crate::config::{ExperimentConfig, ExperimentId};
use crate::records::{BoundsRow, ResultSet, SampleFailure};
use crate::runner::par_map;
use crate::Result;
use hent_core::rng::{derive_stream, derive_u64};
use hent_core::schmidt::schmidt_decompose;
use hent_core::{reduced_density, PureState, Region, C64};
use hent_spectra::{
    check_overlap_bound, check_overlap_lemma, check_renyi_bounds, spike_cloud_decompose, BoundRecord,
};
use rand::Rng;
use rand_distr::StandardNormal;

/// Ceiling on `‖ρ_A − reconstruction‖_max`.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;

/// Largest chain drawn for lemma instances.
pub const LEMMA_MAX_QUBITS: usize = 8;

fn row(instance_id: usize, r: &BoundRecord) -> BoundsRow {
    let inequality_name = match r.alpha {
        Some(a) => format!("{}[alpha={a}]", r.name),
        None => r.name.to_string(),
    };
    BoundsRow {
        instance_id,
        inequality_name,
        lhs: r.lhs,
        rhs: r.rhs,
        margin: r.margin,
        satisfied: r.satisfied,
    }
}

/// Parameters drawn for one circuit instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitDraw {
    pub l: usize,
    pub epsilon: f64,
    pub depth: usize,
    pub seed: u64,
}

pub fn draw_instance(cfg: &ExperimentConfig, instance_id: usize) -> CircuitDraw {
    let code = ExperimentId::BoundsSuite.stream_code();
    let mut rng = derive_stream(cfg.master_seed, &[code, instance_id as u64, 0]);
    let l = cfg.sizes[rng.random_range(0..cfg.sizes.len())];
    let epsilon = cfg.epsilon[rng.random_range(0..cfg.epsilon.len())];
    let r = cfg.depth_ratio[rng.random_range(0..cfg.depth_ratio.len())];
    CircuitDraw {
        l,
        epsilon,
        depth: depth_for(l, r),
        seed: derive_u64(cfg.master_seed, &[code, instance_id as u64, 1]),
    }
}

fn circuit_rows(cfg: &ExperimentConfig, id: usize, renyi: bool, overlap: bool) -> Result<Vec<BoundsRow>> {
    let d = draw_instance(cfg, id);
    let cs = circuit_sample(cfg.ensemble_id()?, d.l, id, d.seed, d.epsilon, d.depth, cfg.p_t)?;
    let cut = Region::first_half(d.l)?;
    let rho = reduced_density(&cs.state, &cut)?;
    let cloud = spike_cloud_decompose(&cs.operator_state, d.epsilon, &cs.base, &cut)?;
    let mut rows = Vec::new();
    if renyi {
        let residual = cloud.reconstruction_residual(&rho);
        rows.push(BoundsRow {
            instance_id: id,
            inequality_name: "spike_cloud_reconstruction".into(),
            lhs: residual,
            rhs: RECONSTRUCTION_TOLERANCE,
            margin: RECONSTRUCTION_TOLERANCE - residual,
            satisfied: residual <= RECONSTRUCTION_TOLERANCE,
        });
        let report = check_renyi_bounds(&rho, &cloud, &cfg.alpha_grid)?;
        rows.extend(report.records.iter().filter(|r| r.applicable).map(|r| row(id, r)));
    }
    if overlap {
        let ov = check_overlap_bound(&rho, &cloud)?;
        rows.extend(ov.report.records.iter().filter(|r| r.applicable).map(|r| row(id, r)));
    }
    Ok(rows)
}

fn gaussian_state(n: usize, rng: &mut impl Rng) -> Result<PureState> {
    let amps = (0..1usize << n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let mut s = PureState::from_amplitudes(n, amps)?;
    s.normalize()?;
    Ok(s)
}

/// A random pair `|φ⟩`, `|ψ⟩ ∝ |φ⟩ + s|χ⟩` on 2 to 8 qubits with `s`
/// log-uniform in `[10⁻², 10]`, so overlaps span the whole unit interval.
fn lemma_rows(cfg: &ExperimentConfig, id: usize) -> Result<Vec<BoundsRow>> {
    let code = ExperimentId::BoundsSuite.stream_code();
    let mut rng = derive_stream(cfg.master_seed, &[code, id as u64, 2]);
    let n = rng.random_range(2..=LEMMA_MAX_QUBITS);
    let len = rng.random_range(1..n);
    let cut = Region::new(n, 0, len)?;
    let phi = gaussian_state(n, &mut rng)?;
    let chi = gaussian_state(n, &mut rng)?;
    let s = 10f64.powf(rng.random_range(-2.0..1.0));
    let mut psi = phi.add_scaled(C64::new(s, 0.0), &chi)?;
    psi.normalize()?;
    let overlap = phi.inner(&psi)?.norm();
    let psi_w = schmidt_decompose(&psi, &cut)?.weights;
    let phi_w = schmidt_decompose(&phi, &cut)?.weights;
    let mut alphas: Vec<f64> = cfg.alpha_grid.clone();
    alphas.push(f64::INFINITY);
    let report = check_overlap_lemma(&psi_w, &phi_w, overlap, &alphas)?;
    Ok(report
        .records
        .iter()
        .filter(|r| r.applicable)
        .map(|r| row(id, r))
        .collect())
}

/// `samples` instances, each drawing its own size, `ε` and depth from the
/// configured lists.
pub fn run(cfg: &ExperimentConfig) -> Result<ResultSet> {
    let mut out = ResultSet::new(ExperimentId::BoundsSuite);
    let has = |f: &str| cfg.families.iter().any(|x| x == f);
    let (renyi, overlap, lemma) = (has("renyi"), has("overlap"), has("lemma"));
    let ids: Vec<usize> = (0..cfg.samples).collect();
    let rows = par_map(&ids, |&id| -> Result<Vec<BoundsRow>> {
        let mut rows = Vec::new();
        if renyi || overlap {
            rows.extend(circuit_rows(cfg, id, renyi, overlap)?);
        }
        if lemma {
            rows.extend(lemma_rows(cfg, id)?);
        }
        Ok(rows)
    });
    for (r, &id) in rows.into_iter().zip(&ids) {
        match r {
            Ok(rows) => out.bounds.extend(rows),
            Err(e) => out.failures.push(SampleFailure {
                sample_id: id,
                l: draw_instance(cfg, id).l,
                message: e.to_string(),
            }),
        }
    }
    out.notes
        .insert("violations".into(), out.bound_violations().to_string());
    Ok(out)
}
