//! Brute-force reference model: kets as explicit z-basis vectors, two-particle
//! states as Kronecker products.

#![allow(dead_code)]

use hardy_lab::{Angle, Outcome, TwoQubitState};
use nalgebra::{Vector2, Vector4};

/// Eigenket of the spin component along `theta` in the z basis.
pub fn ket(theta: f64, outcome: Outcome) -> Vector2<f64> {
    let (s, c) = (theta / 2.0).sin_cos();
    match outcome {
        Outcome::Plus => Vector2::new(c, s),
        Outcome::Minus => Vector2::new(-s, c),
    }
}

pub fn state_vector(state: &TwoQubitState) -> Vector4<f64> {
    let (ba, bb) = state.basis();
    let mut psi = Vector4::zeros();
    for i in Outcome::BOTH {
        for j in Outcome::BOTH {
            let term = ket(ba.radians(), i).kronecker(&ket(bb.radians(), j));
            psi += state.coefficient(i, j) * Vector4::from_column_slice(term.as_slice());
        }
    }
    psi
}

pub fn probability(
    state: &TwoQubitState,
    dir_a: Angle,
    out_a: Outcome,
    dir_b: Angle,
    out_b: Outcome,
) -> f64 {
    let m = ket(dir_a.radians(), out_a).kronecker(&ket(dir_b.radians(), out_b));
    let amp = Vector4::from_column_slice(m.as_slice()).dot(&state_vector(state));
    amp * amp
}

/// Golden ratio computed independently of the library constant.
pub fn tau() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Grid `0, step, 2·step, …, 360` in degrees.
pub fn degree_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| 360.0 * k as f64 / (points - 1) as f64)
        .collect()
}
