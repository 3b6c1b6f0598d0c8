//! Small fixed-size gate matrices.
//!
//! A [`Gate4`] acting on the ordered site pair `(a, b)` is written in the
//! local basis `|q_a q_b⟩`, i.e. local index `2 * q_a + q_b`.

use crate::C64;
use std::f64::consts::FRAC_1_SQRT_2;

pub type Gate2 = [[C64; 2]; 2];
pub type Gate4 = [[C64; 4]; 4];

const O: C64 = C64::new(0.0, 0.0);
const I1: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Gate2 {
        match self {
            Pauli::I => [[I1, O], [O, I1]],
            Pauli::X => [[O, I1], [I1, O]],
            Pauli::Y => [[O, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), O]],
            Pauli::Z => [[I1, O], [O, -I1]],
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

pub fn identity2() -> Gate2 {
    Pauli::I.matrix()
}

pub fn identity4() -> Gate4 {
    let mut g = [[O; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = I1;
    }
    g
}

pub fn hadamard() -> Gate2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn phase_s() -> Gate2 {
    [[I1, O], [O, C64::new(0.0, 1.0)]]
}

pub fn phase_s_dag() -> Gate2 {
    [[I1, O], [O, C64::new(0.0, -1.0)]]
}

pub fn t_gate() -> Gate2 {
    [[I1, O], [O, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]]
}

pub fn t_dag() -> Gate2 {
    [[I1, O], [O, C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]]
}

pub fn cz() -> Gate4 {
    let mut g = identity4();
    g[3][3] = -I1;
    g
}

pub fn swap() -> Gate4 {
    [[I1, O, O, O], [O, O, I1, O], [O, I1, O, O], [O, O, O, I1]]
}

/// `a ⊗ b` in the `|q_a q_b⟩` convention.
pub fn kron2(a: &Gate2, b: &Gate2) -> Gate4 {
    let mut g = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    g
}

pub fn mul2(a: &Gate2, b: &Gate2) -> Gate2 {
    let mut c = [[O; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mul4(a: &Gate4, b: &Gate4) -> Gate4 {
    let mut c = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn adjoint2(a: &Gate2) -> Gate2 {
    let mut c = [[O; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[j][i].conj();
        }
    }
    c
}

pub fn adjoint4(a: &Gate4) -> Gate4 {
    let mut c = [[O; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = a[j][i].conj();
        }
    }
    c
}

/// `max |(U†U - I)_ij|`.
pub fn unitarity_residual2(u: &Gate2) -> f64 {
    unitarity_residual(&u.map(|r| r.to_vec()))
}

/// `max |(U†U - I)_ij|`.
pub fn unitarity_residual4(u: &Gate4) -> f64 {
    unitarity_residual(&u.map(|r| r.to_vec()))
}

fn unitarity_residual<R: AsRef<[C64]>>(rows: &[R]) -> f64 {
    let n = rows.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for row in rows {
                let row = row.as_ref();
                acc += row[i].conj() * row[j];
            }
            if i == j {
                acc -= I1;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}
