//! Random gate samplers for the three ensembles.

use faer::Mat;
use hent_core::gates::{self, Gate2, Gate4};
use hent_core::C64;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian(rng: &mut impl Rng) -> C64 {
    // unit variance per complex entry does not matter for the QR route
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random `n × n` unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> Mat<C64> {
    let z = Mat::from_fn(n, n, |_, _| gaussian(rng));
    let qr = z.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    Mat::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

pub fn sample_haar_gate(rng: &mut impl Rng) -> Gate4 {
    let u = haar_unitary(4, rng);
    std::array::from_fn(|i| std::array::from_fn(|j| u[(i, j)]))
}

pub fn sample_haar_u2(rng: &mut impl Rng) -> Gate2 {
    let u = haar_unitary(2, rng);
    [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
}

/// U(1)-conserving gate: random phases on `|00⟩`, `|11⟩` and a Haar `U(2)`
/// block on `{|01⟩, |10⟩}`.
pub fn sample_u1_gate(rng: &mut impl Rng) -> Gate4 {
    let theta00: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let theta11: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let v = sample_haar_u2(rng);
    u1_gate(theta00, theta11, &v)
}

pub fn u1_gate(theta00: f64, theta11: f64, v: &Gate2) -> Gate4 {
    let o = C64::new(0.0, 0.0);
    [
        [C64::from_polar(1.0, theta00), o, o, o],
        [o, v[0][0], v[0][1], o],
        [o, v[1][0], v[1][1], o],
        [o, o, o, C64::from_polar(1.0, theta11)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    Identity,
    H,
    S,
    SDag,
    X,
    Z,
}

impl CliffordGate {
    pub const ALL: [CliffordGate; 6] = [
        CliffordGate::Identity,
        CliffordGate::H,
        CliffordGate::S,
        CliffordGate::SDag,
        CliffordGate::X,
        CliffordGate::Z,
    ];

    pub fn matrix(self) -> Gate2 {
        use hent_core::gates::Pauli;
        match self {
            CliffordGate::Identity => gates::identity2(),
            CliffordGate::H => gates::hadamard(),
            CliffordGate::S => gates::phase_s(),
            CliffordGate::SDag => gates::phase_s_dag(),
            CliffordGate::X => Pauli::X.matrix(),
            CliffordGate::Z => Pauli::Z.matrix(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TGate {
    T,
    TDag,
}

/// One single-site draw of the Clifford+T ensemble: a Clifford gate,
/// optionally followed by `T` or `T†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SingleSiteDraw {
    pub clifford: CliffordGate,
    pub t: Option<TGate>,
}

impl SingleSiteDraw {
    pub fn sample(p_t: f64, rng: &mut impl Rng) -> Self {
        let clifford = CliffordGate::ALL[rng.random_range(0..6)];
        let t = if rng.random_bool(p_t) {
            Some(if rng.random_bool(0.5) { TGate::T } else { TGate::TDag })
        } else {
            None
        };
        Self { clifford, t }
    }

    /// The applied 2×2 matrix (the `T` factor acts after the Clifford).
    pub fn matrix(&self) -> Gate2 {
        let c = self.clifford.matrix();
        match self.t {
            None => c,
            Some(TGate::T) => gates::mul2(&gates::t_gate(), &c),
            Some(TGate::TDag) => gates::mul2(&gates::t_dag(), &c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hent_core::gates::{unitarity_residual2, unitarity_residual4};
    use hent_core::rng::derive_stream;

    #[test]
    fn haar_gates_are_unitary() {
        let mut rng = derive_stream(1, &[]);
        for _ in 0..200 {
            assert!(unitarity_residual4(&sample_haar_gate(&mut rng)) <= 1e-12);
            assert!(unitarity_residual4(&sample_u1_gate(&mut rng)) <= 1e-12);
        }
    }

    #[test]
    fn clifford_draws_are_unitary() {
        let mut rng = derive_stream(2, &[]);
        for _ in 0..100 {
            let d = SingleSiteDraw::sample(0.5, &mut rng);
            assert!(unitarity_residual2(&d.matrix()) < 1e-15);
        }
    }

    #[test]
    fn u1_gate_fixes_aligned_states() {
        let mut rng = derive_stream(3, &[]);
        let g = sample_u1_gate(&mut rng);
        assert!((g[0][0].norm() - 1.0).abs() < 1e-12);
        assert!((g[3][3].norm() - 1.0).abs() < 1e-12);
    }
}
