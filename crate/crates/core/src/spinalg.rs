//! Real-amplitude spin-½ algebra for spin components in the x-z plane.
//!
//! A spin component `S(θ)` points at angle `θ` from the z axis. Its eigenvectors,
//! written in the eigenbasis of a reference component `S(θ_ref)`, depend only on
//! the relative angle `δ = θ − θ_ref`:
//!
//! ```text
//! |S(θ)=+1⟩ =  cos(δ/2) |S(θ_ref)=+1⟩ + sin(δ/2) |S(θ_ref)=−1⟩
//! |S(θ)=−1⟩ = −sin(δ/2) |S(θ_ref)=+1⟩ + cos(δ/2) |S(θ_ref)=−1⟩
//! ```
//!
//! Inverting this rotation gives the half-angle basis change used for the Hardy
//! constraints, with `|S(θ)=+1⟩ = cos(δ/2)|S(θ′)=+1⟩ − sin(δ/2)|S(θ′)=−1⟩` for
//! `δ = θ′ − θ`. Every amplitude here is real.

use std::f64::consts::TAU as FULL_TURN;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::hardy::TwoQubitState;

/// Tolerance on the unit-norm invariant of [`SpinVector`].
pub const NORM_TOL: f64 = 1e-12;

/// A direction in the x-z plane, stored in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn from_radians(radians: f64) -> Self {
        debug_assert!(radians.is_finite(), "angle must be finite");
        Angle(radians)
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Angle::from_radians(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// The same direction reduced to `[0, 2π)`.
    pub fn normalized(self) -> Self {
        let r = self.0.rem_euclid(FULL_TURN);
        // rem_euclid can round up to exactly 2π for tiny negative inputs
        Angle(if r >= FULL_TURN { 0.0 } else { r })
    }

    /// `(sin(θ/2), cos(θ/2))`.
    pub fn half_sin_cos(self) -> (f64, f64) {
        (0.5 * self.0).sin_cos()
    }

    /// Distance to the nearest multiple of π, in radians.
    pub fn distance_to_pi_multiple(self) -> f64 {
        let r = self.0.rem_euclid(std::f64::consts::PI);
        r.min(std::f64::consts::PI - r)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.degrees())
    }
}

/// Result of measuring a spin component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn flipped(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    /// Row/column index in a coefficient table: `+1 → 0`, `−1 → 1`.
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_index(i: usize) -> Outcome {
        if i == 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+1",
            Outcome::Minus => "-1",
        })
    }
}

/// Which particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "a",
            Side::B => "b",
        })
    }
}

/// A real unit vector `(up, down)` in a reference eigenbasis `|S(θ_ref)=±1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinVector {
    up: f64,
    down: f64,
}

impl SpinVector {
    pub fn new(up: f64, down: f64) -> Result<Self> {
        let norm_sq = up * up + down * down;
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(HardyError::NotNormalized { norm_sq });
        }
        Ok(SpinVector { up, down })
    }

    /// Scales `(up, down)` to unit length. Returns `None` for the zero vector.
    pub fn normalize(up: f64, down: f64) -> Option<Self> {
        let n = up.hypot(down);
        (n > 0.0 && n.is_finite()).then(|| SpinVector {
            up: up / n,
            down: down / n,
        })
    }

    pub fn up(&self) -> f64 {
        self.up
    }

    pub fn down(&self) -> f64 {
        self.down
    }

    /// Component along `|S(θ_ref)=outcome⟩`.
    pub fn component(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.up,
            Outcome::Minus => self.down,
        }
    }

    pub fn negated(&self) -> SpinVector {
        SpinVector {
            up: -self.up,
            down: -self.down,
        }
    }
}

/// `|S(θ)=sign⟩` expressed in the `|S(θ_ref)=±1⟩` basis.
pub fn eigenvector(theta_ref: Angle, theta: Angle, sign: Outcome) -> SpinVector {
    let (s, c) = (theta - theta_ref).half_sin_cos();
    match sign {
        Outcome::Plus => SpinVector { up: c, down: s },
        Outcome::Minus => SpinVector { up: -s, down: c },
    }
}

/// Real inner product `⟨u|v⟩`.
pub fn overlap(u: SpinVector, v: SpinVector) -> f64 {
    u.up * v.up + u.down * v.down
}

/// Probability that measuring `S(dir_a)` on particle a and `S(dir_b)` on particle b
/// yields `(out_a, out_b)`.
///
/// The measurement eigenvectors are expressed in the state's labeled basis
/// `(θ_a, θ_b)`, contracted with the coefficient table and squared.
pub fn joint_probability(
    state: &TwoQubitState,
    dir_a: Angle,
    out_a: Outcome,
    dir_b: Angle,
    out_b: Outcome,
) -> f64 {
    let (basis_a, basis_b) = state.basis();
    let ea = eigenvector(basis_a, dir_a, out_a);
    let eb = eigenvector(basis_b, dir_b, out_b);
    let mut amp = 0.0;
    for i in Outcome::BOTH {
        for j in Outcome::BOTH {
            amp += state.coefficient(i, j) * ea.component(i) * eb.component(j);
        }
    }
    amp * amp
}

/// Real symmetric 2×2 matrix `[[a11, a12], [a12, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl SymMatrix2 {
    pub fn new(a11: f64, a12: f64, a22: f64) -> Self {
        SymMatrix2 { a11, a12, a22 }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn apply(&self, v: SpinVector) -> (f64, f64) {
        (
            self.a11 * v.up + self.a12 * v.down,
            self.a12 * v.up + self.a22 * v.down,
        )
    }
}

/// Eigen-decomposition of a [`SymMatrix2`], eigenvalues in descending order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymEigen {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: SpinVector,
    pub v_minus: SpinVector,
    /// Eigenvalues coincide; the eigenvectors are then an arbitrary orthonormal pair.
    pub degenerate: bool,
}

/// Tolerance for flagging equal eigenvalues, relative to the matrix scale.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Closed-form eigen-solver for a real symmetric 2×2 matrix.
///
/// The eigenvectors are the rotation of the reference basis by the angle
/// `½·atan2(2·a12, a11 − a22)`, which keeps them exactly orthonormal.
pub fn eig_sym2(m: SymMatrix2) -> SymEigen {
    let mean = 0.5 * (m.a11 + m.a22);
    let half_diff = 0.5 * (m.a11 - m.a22);
    let radius = half_diff.hypot(m.a12);
    let scale = m.a11.abs().max(m.a22.abs()).max(m.a12.abs()).max(1.0);
    let degenerate = radius <= DEGENERACY_TOL * scale;

    let psi = 0.5 * m.a12.atan2(half_diff);
    let (s, c) = if degenerate {
        (0.0, 1.0)
    } else {
        psi.sin_cos()
    };
    SymEigen {
        lambda_plus: mean + radius,
        lambda_minus: mean - radius,
        v_plus: SpinVector { up: c, down: s },
        v_minus: SpinVector { up: -s, down: c },
        degenerate,
    }
}
