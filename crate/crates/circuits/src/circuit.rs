use crate::gates::{sample_haar_gate, sample_u1_gate, SingleSiteDraw};
use crate::{CircuitError, Result};
use hent_core::gates::{adjoint2, adjoint4, cz, Gate2, Gate4, Pauli};
use hent_core::rng::derive_stream;
use hent_core::{PureState, QStateError};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnsembleId {
    Haar,
    CliffordT,
    U1,
}

impl EnsembleId {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleId::Haar => "haar",
            EnsembleId::CliffordT => "clifford_t",
            EnsembleId::U1 => "u1",
        }
    }

    pub fn timestep_layers(self) -> usize {
        match self {
            EnsembleId::Haar | EnsembleId::U1 => 2,
            EnsembleId::CliffordT => 4,
        }
    }
}

impl std::str::FromStr for EnsembleId {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" => Ok(EnsembleId::Haar),
            "clifford_t" => Ok(EnsembleId::CliffordT),
            "u1" => Ok(EnsembleId::U1),
            other => Err(CircuitError::InvalidParameter(format!(
                "unknown ensemble `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams {
    pub r: f64,
    pub epsilon: f64,
    pub p_t: f64,
    pub operator_site: usize,
}

impl EnsembleParams {
    pub fn new(r: f64, epsilon: f64, p_t: f64, operator_site: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(CircuitError::InvalidParameter(format!(
                "epsilon = {epsilon} outside (0, 1)"
            )));
        }
        if !(0.0..=1.0).contains(&p_t) {
            return Err(CircuitError::InvalidParameter(format!(
                "p_T = {p_t} outside [0, 1]"
            )));
        }
        if !(r > 0.0) {
            return Err(CircuitError::InvalidParameter(format!("r = {r}")));
        }
        Ok(Self {
            r,
            epsilon,
            p_t,
            operator_site,
        })
    }

    /// Depth `round(r·L)` in timesteps.
    pub fn depth(&self, n_qubits: usize) -> usize {
        (self.r * n_qubits as f64).round() as usize
    }
}

/// The centre operator site `L/2` of a one-based chain, as a zero-based
/// site index.
pub fn center_site(n_qubits: usize) -> usize {
    (n_qubits / 2).saturating_sub(1)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Single { site: usize, gate: Gate2 },
    Pair { sites: (usize, usize), gate: Gate4 },
}

impl GateOp {
    fn sites(&self) -> (usize, Option<usize>) {
        match self {
            GateOp::Single { site, .. } => (*site, None),
            GateOp::Pair { sites, .. } => (sites.0, Some(sites.1)),
        }
    }

    fn apply(&self, state: &mut PureState, adjoint: bool) -> std::result::Result<(), QStateError> {
        match self {
            GateOp::Single { site, gate } => {
                let g = if adjoint { adjoint2(gate) } else { *gate };
                state.apply_single_site_gate(&g, *site)
            }
            GateOp::Pair { sites, gate } => {
                let g = if adjoint { adjoint4(gate) } else { *gate };
                state.apply_two_site_gate(&g, *sites)
            }
        }
    }
}

/// Gates with pairwise disjoint supports.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layer {
    pub ops: Vec<GateOp>,
}

impl Layer {
    pub fn is_disjoint(&self) -> bool {
        let mut used = Vec::new();
        for op in &self.ops {
            let (a, b) = op.sites();
            for s in std::iter::once(a).chain(b) {
                if used.contains(&s) {
                    return false;
                }
                used.push(s);
            }
        }
        true
    }

    pub fn apply(&self, state: &mut PureState) -> Result<()> {
        for op in &self.ops {
            op.apply(state, false)?;
        }
        Ok(())
    }

    /// Applies the layer's adjoint. Gates in a layer commute, so order is
    /// irrelevant.
    pub fn apply_adjoint(&self, state: &mut PureState) -> Result<()> {
        for op in &self.ops {
            op.apply(state, true)?;
        }
        Ok(())
    }
}

/// Zero-based bond pairs `(0,1), (2,3), …` (`odd = true`, the one-based odd
/// bonds) or `(1,2), (3,4), …`.
pub fn bonds(n_qubits: usize, odd: bool) -> Vec<(usize, usize)> {
    let first = if odd { 0 } else { 1 };
    (first..n_qubits.saturating_sub(1))
        .step_by(2)
        .map(|i| (i, i + 1))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRealization {
    pub n_qubits: usize,
    pub layers: Vec<Layer>,
    pub ensemble: EnsembleId,
    pub seed: u64,
    pub timestep_layers: usize,
}

impl CircuitRealization {
    /// Samples `depth` timesteps. Every gate draws from its own stream keyed
    /// by `(layer, gate)` (Haar, U(1)) or by timestep (Clifford+T), so the
    /// result depends only on the arguments.
    pub fn sample(
        ensemble: EnsembleId,
        n_qubits: usize,
        depth: usize,
        seed: u64,
        p_t: f64,
    ) -> Result<Self> {
        if n_qubits < 2 {
            return Err(CircuitError::InvalidParameter(format!(
                "need at least 2 qubits, got {n_qubits}"
            )));
        }
        if !(0.0..=1.0).contains(&p_t) {
            return Err(CircuitError::InvalidParameter(format!("p_T = {p_t}")));
        }
        let mut layers = Vec::with_capacity(depth * ensemble.timestep_layers());
        for step in 0..depth {
            match ensemble {
                EnsembleId::Haar | EnsembleId::U1 => {
                    for (half, odd) in [(0, true), (1, false)] {
                        let layer_idx = (2 * step + half) as u64;
                        let ops = bonds(n_qubits, odd)
                            .into_iter()
                            .enumerate()
                            .map(|(g, sites)| {
                                let mut rng = derive_stream(seed, &[layer_idx, g as u64]);
                                let gate = if ensemble == EnsembleId::Haar {
                                    sample_haar_gate(&mut rng)
                                } else {
                                    sample_u1_gate(&mut rng)
                                };
                                GateOp::Pair { sites, gate }
                            })
                            .collect();
                        layers.push(Layer { ops });
                    }
                }
                EnsembleId::CliffordT => {
                    let mut rng = derive_stream(seed, &[step as u64]);
                    layers.extend(sample_clifford_t_timestep(n_qubits, p_t, &mut rng)?);
                }
            }
        }
        Ok(Self {
            n_qubits,
            layers,
            ensemble,
            seed,
            timestep_layers: ensemble.timestep_layers(),
        })
    }

    pub fn depth(&self) -> usize {
        self.layers.len() / self.timestep_layers
    }

    /// Applies the first `t` timesteps, `U(t)|ψ⟩`.
    pub fn apply_forward(&self, state: &mut PureState, t: usize) -> Result<()> {
        self.check_depth(t)?;
        for layer in &self.layers[..t * self.timestep_layers] {
            layer.apply(state)?;
        }
        Ok(())
    }

    /// `U(t)†|ψ⟩`.
    pub fn apply_inverse(&self, state: &mut PureState, t: usize) -> Result<()> {
        self.check_depth(t)?;
        for layer in self.layers[..t * self.timestep_layers].iter().rev() {
            layer.apply_adjoint(state)?;
        }
        Ok(())
    }

    fn check_depth(&self, t: usize) -> Result<()> {
        if t > self.depth() {
            return Err(CircuitError::DepthExceeded {
                t,
                depth: self.depth(),
            });
        }
        Ok(())
    }
}

/// One Clifford+T timestep `U_CZ^{σ̄} R² U_CZ^{σ} R¹`, as four layers in
/// application order.
pub fn sample_clifford_t_timestep(
    n_qubits: usize,
    p_t: f64,
    rng: &mut impl Rng,
) -> Result<Vec<Layer>> {
    if n_qubits < 2 {
        return Err(CircuitError::InvalidParameter(format!(
            "need at least 2 qubits, got {n_qubits}"
        )));
    }
    if !(0.0..=1.0).contains(&p_t) {
        return Err(CircuitError::InvalidParameter(format!("p_T = {p_t}")));
    }
    let odd_first = rng.random_bool(0.5);
    let single = |rng: &mut _| Layer {
        ops: (0..n_qubits)
            .map(|site| GateOp::Single {
                site,
                gate: SingleSiteDraw::sample(p_t, rng).matrix(),
            })
            .collect(),
    };
    let cz_layer = |odd: bool| Layer {
        ops: bonds(n_qubits, odd)
            .into_iter()
            .map(|sites| GateOp::Pair { sites, gate: cz() })
            .collect(),
    };
    let r1 = single(rng);
    let r2 = single(rng);
    Ok(vec![r1, cz_layer(odd_first), r2, cz_layer(!odd_first)])
}

/// `U(t) Z_site U(t)† |base⟩`.
pub fn heisenberg_state(
    circuit: &CircuitRealization,
    op_site: usize,
    base: &PureState,
    t: usize,
) -> Result<PureState> {
    heisenberg_state_with(circuit, Pauli::Z, op_site, base, t)
}

/// As [`heisenberg_state`] with an arbitrary Pauli.
pub fn heisenberg_state_with(
    circuit: &CircuitRealization,
    op: Pauli,
    op_site: usize,
    base: &PureState,
    t: usize,
) -> Result<PureState> {
    if base.n_qubits() != circuit.n_qubits {
        return Err(QStateError::DimensionMismatch {
            expected: circuit.n_qubits,
            got: base.n_qubits(),
        }
        .into());
    }
    base.require_normalized()?;
    let mut s = base.clone();
    circuit.apply_inverse(&mut s, t)?;
    s.apply_pauli(op, op_site)?;
    circuit.apply_forward(&mut s, t)?;
    Ok(s)
}
