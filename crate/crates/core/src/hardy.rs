//! The unique Hardy state of a measurement setup and its contradiction probability.
//!
//! A two-particle state shows Hardy-type nonlocality for the observables
//! `S(θ_a), S(θ_a′)` on particle a and `S(θ_b), S(θ_b′)` on particle b when
//!
//! ```text
//! (1a) P(S(θ_a)=+1,  S(θ_b)=+1)  = 0
//! (1b) P(S(θ_a)=−1,  S(θ_b′)=−1) = 0
//! (1c) P(S(θ_a′)=−1, S(θ_b)=−1)  = 0
//! (1d) P(S(θ_a′)=−1, S(θ_b′)=−1) > 0
//! ```
//!
//! Writing the state over the `(θ_a, θ_b)` product eigenbasis, (1a) forces
//! `c_{++} = 0` and (1b), (1c) become two linear constraints that fix the remaining
//! three coefficients up to a common sign. All trigonometric forms below are
//! cleared of `tan(θ/2)` so they stay finite at `θ = π`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::spinalg::{self, Angle, Outcome, Side, NORM_TOL};

/// Default threshold below which a condition probability counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// A relative angle closer than this (radians) to a multiple of π is degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// The four measurement directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetup {
    theta_a: Angle,
    theta_a_prime: Angle,
    theta_b: Angle,
    theta_b_prime: Angle,
}

impl MeasurementSetup {
    pub fn new(theta_a: Angle, theta_a_prime: Angle, theta_b: Angle, theta_b_prime: Angle) -> Self {
        MeasurementSetup {
            theta_a,
            theta_a_prime,
            theta_b,
            theta_b_prime,
        }
    }

    /// Setup with `θ_a = θ_b = 0` and the given relative angles.
    pub fn from_relative(theta_1: Angle, theta_2: Angle) -> Self {
        MeasurementSetup::new(Angle::ZERO, theta_1, Angle::ZERO, theta_2)
    }

    pub fn theta_a(&self) -> Angle {
        self.theta_a
    }

    pub fn theta_a_prime(&self) -> Angle {
        self.theta_a_prime
    }

    pub fn theta_b(&self) -> Angle {
        self.theta_b
    }

    pub fn theta_b_prime(&self) -> Angle {
        self.theta_b_prime
    }

    /// `θ₁ = θ_a′ − θ_a`
    pub fn theta_1(&self) -> Angle {
        self.theta_a_prime - self.theta_a
    }

    /// `θ₂ = θ_b′ − θ_b`
    pub fn theta_2(&self) -> Angle {
        self.theta_b_prime - self.theta_b
    }

    /// Fails with [`HardyError::DegenerateSetup`] when either side's observables commute.
    pub fn check_non_degenerate(&self) -> Result<()> {
        for (side, rel) in [(Side::A, self.theta_1()), (Side::B, self.theta_2())] {
            if rel.distance_to_pi_multiple() <= DEGENERACY_TOL {
                return Err(HardyError::DegenerateSetup {
                    side,
                    degrees: rel.degrees(),
                });
            }
        }
        Ok(())
    }

    pub fn directions(&self, pair: SettingPair) -> (Angle, Angle) {
        match pair {
            SettingPair::AB => (self.theta_a, self.theta_b),
            SettingPair::ABPrime => (self.theta_a, self.theta_b_prime),
            SettingPair::APrimeB => (self.theta_a_prime, self.theta_b),
            SettingPair::APrimeBPrime => (self.theta_a_prime, self.theta_b_prime),
        }
    }
}

/// Which pair of observables is measured jointly. The order matches conditions (1a)–(1d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SettingPair {
    AB,
    ABPrime,
    APrimeB,
    APrimeBPrime,
}

impl SettingPair {
    pub const ALL: [SettingPair; 4] = [
        SettingPair::AB,
        SettingPair::ABPrime,
        SettingPair::APrimeB,
        SettingPair::APrimeBPrime,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            SettingPair::AB => "a,b",
            SettingPair::ABPrime => "a,b'",
            SettingPair::APrimeB => "a',b",
            SettingPair::APrimeBPrime => "a',b'",
        }
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Overall sign of the Hardy coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

/// Two-particle state with real coefficients over `|S(θ_a)=i⟩|S(θ_b)=j⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    /// `coefficients[i][j]`, `i` for particle a, `j` for particle b, `+1 → 0`, `−1 → 1`.
    coefficients: [[f64; 2]; 2],
    basis_a: Angle,
    basis_b: Angle,
}

impl TwoQubitState {
    pub fn new(
        c_pp: f64,
        c_pm: f64,
        c_mp: f64,
        c_mm: f64,
        basis_a: Angle,
        basis_b: Angle,
    ) -> Result<Self> {
        let state = TwoQubitState {
            coefficients: [[c_pp, c_pm], [c_mp, c_mm]],
            basis_a,
            basis_b,
        };
        let norm_sq = state.norm_sq();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(HardyError::NotNormalized { norm_sq });
        }
        Ok(state)
    }

    /// Product state `|S(dir_a)=out_a⟩|S(dir_b)=out_b⟩` written over the `(basis_a, basis_b)` basis.
    pub fn product(
        dir_a: Angle,
        out_a: Outcome,
        dir_b: Angle,
        out_b: Outcome,
        basis_a: Angle,
        basis_b: Angle,
    ) -> Self {
        let va = spinalg::eigenvector(basis_a, dir_a, out_a);
        let vb = spinalg::eigenvector(basis_b, dir_b, out_b);
        let mut coefficients = [[0.0; 2]; 2];
        for i in Outcome::BOTH {
            for j in Outcome::BOTH {
                coefficients[i.index()][j.index()] = va.component(i) * vb.component(j);
            }
        }
        TwoQubitState {
            coefficients,
            basis_a,
            basis_b,
        }
    }

    pub(crate) fn from_table(coefficients: [[f64; 2]; 2], basis_a: Angle, basis_b: Angle) -> Self {
        TwoQubitState {
            coefficients,
            basis_a,
            basis_b,
        }
    }

    pub fn coefficient(&self, a: Outcome, b: Outcome) -> f64 {
        self.coefficients[a.index()][b.index()]
    }

    pub fn table(&self) -> [[f64; 2]; 2] {
        self.coefficients
    }

    /// `[c_pp, c_pm, c_mp, c_mm]`
    pub fn as_array(&self) -> [f64; 4] {
        let [[pp, pm], [mp, mm]] = self.coefficients;
        [pp, pm, mp, mm]
    }

    pub fn c_pp(&self) -> f64 {
        self.coefficients[0][0]
    }

    pub fn c_pm(&self) -> f64 {
        self.coefficients[0][1]
    }

    pub fn c_mp(&self) -> f64 {
        self.coefficients[1][0]
    }

    pub fn c_mm(&self) -> f64 {
        self.coefficients[1][1]
    }

    /// Basis labels `(θ_a, θ_b)`.
    pub fn basis(&self) -> (Angle, Angle) {
        (self.basis_a, self.basis_b)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().flatten().map(|c| c * c).sum()
    }

    pub fn negated(&self) -> Self {
        let mut s = *self;
        s.coefficients.iter_mut().flatten().for_each(|c| *c = -*c);
        s
    }

    /// Applies the outcome flip `|S(θ)=+1⟩ ↦ −|S(θ)=−1⟩, |S(θ)=−1⟩ ↦ |S(θ)=+1⟩`
    /// to the selected particles. The flip is the same real rotation by π for
    /// every in-plane direction, so it exchanges the outcomes of all four observables.
    pub fn with_flips(&self, flip_a: bool, flip_b: bool) -> Self {
        let mut c = self.coefficients;
        if flip_a {
            c = [[c[1][0], c[1][1]], [-c[0][0], -c[0][1]]];
        }
        if flip_b {
            c = [[c[0][1], -c[0][0]], [c[1][1], -c[1][0]]];
        }
        TwoQubitState {
            coefficients: c,
            ..*self
        }
    }

    pub fn joint_probability(
        &self,
        dir_a: Angle,
        out_a: Outcome,
        dir_b: Angle,
        out_b: Outcome,
    ) -> f64 {
        spinalg::joint_probability(self, dir_a, out_a, dir_b, out_b)
    }

    /// Outcome distribution for one pair of directions, indexed `[out_a][out_b]`.
    pub fn outcome_distribution(&self, dir_a: Angle, dir_b: Angle) -> [[f64; 2]; 2] {
        let mut p = [[0.0; 2]; 2];
        for i in Outcome::BOTH {
            for j in Outcome::BOTH {
                p[i.index()][j.index()] = self.joint_probability(dir_a, i, dir_b, j);
            }
        }
        p
    }
}

/// The Hardy argument and its three sign-flipped counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum HardyVariant {
    #[default]
    Original,
    /// Every outcome reversed.
    FlipBoth,
    /// Particle a's outcomes reversed.
    FlipA,
    /// Particle b's outcomes reversed.
    FlipB,
}

impl HardyVariant {
    pub const ALL: [HardyVariant; 4] = [
        HardyVariant::Original,
        HardyVariant::FlipBoth,
        HardyVariant::FlipA,
        HardyVariant::FlipB,
    ];

    pub fn flips(self) -> (bool, bool) {
        match self {
            HardyVariant::Original => (false, false),
            HardyVariant::FlipBoth => (true, true),
            HardyVariant::FlipA => (true, false),
            HardyVariant::FlipB => (false, true),
        }
    }

    /// Outcomes `(a, b)` that condition `pair` refers to under this variant.
    pub fn outcomes(self, pair: SettingPair) -> (Outcome, Outcome) {
        let (a, b) = match pair {
            SettingPair::AB => (Outcome::Plus, Outcome::Plus),
            _ => (Outcome::Minus, Outcome::Minus),
        };
        let (fa, fb) = self.flips();
        (
            if fa { a.flipped() } else { a },
            if fb { b.flipped() } else { b },
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            HardyVariant::Original => "original",
            HardyVariant::FlipBoth => "flip-both",
            HardyVariant::FlipA => "flip-a",
            HardyVariant::FlipB => "flip-b",
        }
    }
}

impl fmt::Display for HardyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for HardyVariant {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self> {
        HardyVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| HardyError::InvalidArgument(format!("unknown variant '{s}'")))
    }
}

/// The four condition probabilities of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub variant: HardyVariant,
    pub p1a: f64,
    pub p1b: f64,
    pub p1c: f64,
    pub p1d: f64,
    pub zero_tol: f64,
    pub holds: bool,
}

impl HardyReport {
    /// Builds a report from probabilities in (1a)–(1d) order; `holds` follows from `zero_tol`.
    pub fn from_probabilities(variant: HardyVariant, p: [f64; 4], zero_tol: f64) -> Self {
        let holds = p[..3].iter().all(|&x| x <= zero_tol) && p[3] > zero_tol;
        HardyReport {
            variant,
            p1a: p[0],
            p1b: p[1],
            p1c: p[2],
            p1d: p[3],
            zero_tol,
            holds,
        }
    }

    pub fn probabilities(&self) -> [f64; 4] {
        [self.p1a, self.p1b, self.p1c, self.p1d]
    }
}

/// The unique state with `c_{++} = 0` satisfying (1b) and (1c), with the given overall sign.
///
/// With `s_k = sin(θ_k/2)`, `k_k = cos(θ_k/2)` the coefficients are
/// `(c_{+-}, c_{-+}, c_{--}) ∝ (k₁s₂, s₁k₂, s₁s₂)`.
pub fn construct_state(setup: &MeasurementSetup, sign: Sign) -> Result<TwoQubitState> {
    setup.check_non_degenerate()?;
    let (s1, k1) = setup.theta_1().half_sin_cos();
    let (s2, k2) = setup.theta_2().half_sin_cos();
    let c_mp = s1 * k2;
    let c_pm = k1 * s2;
    let c_mm = s1 * s2;
    let norm = (c_mp * c_mp + c_pm * c_pm + c_mm * c_mm).sqrt();
    let g = sign.value() / norm;
    Ok(TwoQubitState::from_table(
        [[0.0, g * c_pm], [g * c_mp, g * c_mm]],
        setup.theta_a(),
        setup.theta_b(),
    ))
}

/// The state satisfying the conditions of `variant`: the Hardy state with the
/// variant's outcome flips applied.
pub fn construct_variant_state(
    setup: &MeasurementSetup,
    variant: HardyVariant,
    sign: Sign,
) -> Result<TwoQubitState> {
    let (fa, fb) = variant.flips();
    Ok(construct_state(setup, sign)?.with_flips(fa, fb))
}

/// Evaluates the four conditions of `variant` on `state`.
pub fn check_conditions(
    state: &TwoQubitState,
    setup: &MeasurementSetup,
    variant: HardyVariant,
    zero_tol: f64,
) -> HardyReport {
    let p = SettingPair::ALL.map(|pair| {
        let (da, db) = setup.directions(pair);
        let (oa, ob) = variant.outcomes(pair);
        state.joint_probability(da, oa, db, ob)
    });
    HardyReport::from_probabilities(variant, p, zero_tol)
}

/// Contradiction probability `P(S(θ_a′)=−1, S(θ_b′)=−1)` of the Hardy state:
///
/// ```text
///            s₁² s₂² k₁² k₂²
/// P = ─────────────────────────────
///      s₁² k₂² + k₁² s₂² + s₁² s₂²
/// ```
///
/// Zero where the denominator vanishes (both relative angles ≡ 0 mod 2π).
pub fn probability_closed_form(theta_1: Angle, theta_2: Angle) -> f64 {
    let (s1, k1) = theta_1.half_sin_cos();
    let (s2, k2) = theta_2.half_sin_cos();
    let (a, b) = (s1 * s1, k1 * k1);
    let (c, d) = (s2 * s2, k2 * k2);
    let den = a * d + b * c + a * c;
    if den == 0.0 {
        return 0.0;
    }
    (a * b) * (c * d) / den
}

/// Contradiction probability along `θ₁ = θ₂ = θ`: `sin²θ · cos²(θ/2) / (4 (1 + cos²(θ/2)))`.
pub fn probability_diagonal(theta: Angle) -> f64 {
    let (_, k) = theta.half_sin_cos();
    let k2 = k * k;
    let s = theta.radians().sin();
    s * s * k2 / (4.0 * (1.0 + k2))
}

/// Hardy coefficients along the diagonal `θ₁ = θ₂ = θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalCoefficients {
    pub c_mp: f64,
    pub c_pm: f64,
    pub c_mm: f64,
}

/// `c_{-+} = c_{+-} = ±(2 + tan²(θ/2))^{-1/2}`, `c_{--} = ±(1 + 2cot²(θ/2))^{-1/2}`,
/// in the cleared form `k/√(1+k²)`, `|s|/√(1+k²)` with signs matching [`construct_state`].
pub fn diagonal_coefficients(theta: Angle) -> Result<DiagonalCoefficients> {
    MeasurementSetup::from_relative(theta, theta).check_non_degenerate()?;
    let (s, k) = theta.half_sin_cos();
    let den = (1.0 + k * k).sqrt();
    let c = s.signum() * k / den;
    Ok(DiagonalCoefficients {
        c_mp: c,
        c_pm: c,
        c_mm: s.abs() / den,
    })
}

/// Solution space of `{c_{++} = 0, (1b), (1c)}` over the four coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniqueSolution {
    /// Dimension of the null space.
    pub dimension: usize,
    /// First normalized basis vector of the null space.
    pub state: TwoQubitState,
    /// Orthonormal basis of the null space, `[c_pp, c_pm, c_mp, c_mm]` each.
    pub basis: Vec<[f64; 4]>,
}

const RANK_TOL: f64 = 1e-9;

/// Solves the homogeneous linear system behind the Hardy state directly and
/// reports the dimension of its solution space.
///
/// The rows are `c_{++} = 0`, `c_{--}k₂ − c_{-+}s₂ = 0` and `c_{--}k₁ − c_{+-}s₁ = 0`.
pub fn solve_unique(setup: &MeasurementSetup) -> UniqueSolution {
    let (s1, k1) = setup.theta_1().half_sin_cos();
    let (s2, k2) = setup.theta_2().half_sin_cos();
    let rows = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -s2, k2],
        [0.0, -s1, 0.0, k1],
    ];
    let basis = null_space(rows, RANK_TOL);
    let [pp, pm, mp, mm] = basis[0];
    UniqueSolution {
        dimension: basis.len(),
        state: TwoQubitState::from_table([[pp, pm], [mp, mm]], setup.theta_a(), setup.theta_b()),
        basis,
    }
}

/// Orthonormal null-space basis of a 3×4 system via reduced row echelon form.
fn null_space(mut rows: [[f64; 4]; 3], tol: f64) -> Vec<[f64; 4]> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        if r == rows.len() {
            break;
        }
        let (best, mag) = (r..rows.len())
            .map(|i| (i, rows[i][col].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= tol {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][col];
        rows[r].iter_mut().for_each(|x| *x /= p);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[col];
                for (x, p) in row.iter_mut().zip(pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push((r, col));
        r += 1;
    }

    let mut basis: Vec<[f64; 4]> = Vec::new();
    for free in (0..4).filter(|c| pivots.iter().all(|&(_, pc)| pc != *c)) {
        let mut v = [0.0; 4];
        v[free] = 1.0;
        for &(row, col) in &pivots {
            v[col] = -rows[row][free];
        }
        // Gram-Schmidt against earlier basis vectors
        for b in &basis {
            let d: f64 = (0..4).map(|i| v[i] * b[i]).sum();
            (0..4).for_each(|i| v[i] -= d * b[i]);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        basis.push(v.map(|x| x / n));
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::{theta_zero, TAU};
    use approx::assert_abs_diff_eq;

    fn deg(d: f64) -> Angle {
        Angle::from_degrees(d)
    }

    #[test]
    fn ninety_degree_state() {
        let setup = MeasurementSetup::from_relative(deg(90.0), deg(90.0));
        let s = construct_state(&setup, Sign::Positive).unwrap();
        let r = 1.0 / 3f64.sqrt();
        for (got, want) in s.as_array().iter().zip([0.0, r, r, r]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        let n = construct_state(&setup, Sign::Negative).unwrap();
        assert_eq!(n, s.negated());
    }

    #[test]
    fn golden_state_squared_coefficients() {
        let t0 = theta_zero();
        let s = construct_state(&MeasurementSetup::from_relative(t0, t0), Sign::Positive).unwrap();
        let sq = s.as_array().map(|c| c * c);
        assert_eq!(sq[0], 0.0);
        assert_abs_diff_eq!(sq[1], TAU.powi(-2), epsilon = 1e-14);
        assert_abs_diff_eq!(sq[2], TAU.powi(-2), epsilon = 1e-14);
        assert_abs_diff_eq!(sq[3], TAU.powi(-3), epsilon = 1e-14);
        assert_abs_diff_eq!(sq[1], 0.381966, epsilon = 1e-6);
        assert_abs_diff_eq!(sq[3], 0.236068, epsilon = 1e-6);
    }

    #[test]
    fn degenerate_setups_are_rejected() {
        let err = construct_state(
            &MeasurementSetup::from_relative(deg(180.0), deg(90.0)),
            Sign::Positive,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            HardyError::DegenerateSetup { side: Side::A, .. }
        ));
        let err = construct_state(
            &MeasurementSetup::from_relative(deg(45.0), deg(-360.0)),
            Sign::Positive,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            HardyError::DegenerateSetup { side: Side::B, .. }
        ));
        // just outside the tolerance is fine
        let near = Angle::from_radians(std::f64::consts::PI + 1e-8);
        assert!(construct_state(
            &MeasurementSetup::from_relative(near, deg(90.0)),
            Sign::Positive
        )
        .is_ok());
    }

    #[test]
    fn constraints_hold_for_constructed_state() {
        let setup = MeasurementSetup::new(deg(10.0), deg(250.0), deg(-40.0), deg(33.0));
        let s = construct_state(&setup, Sign::Positive).unwrap();
        let (s1, k1) = setup.theta_1().half_sin_cos();
        let (s2, k2) = setup.theta_2().half_sin_cos();
        assert_abs_diff_eq!(s.c_mm() * k2 - s.c_mp() * s2, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.c_mm() * k1 - s.c_pm() * s1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm_sq(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn ninety_degree_report() {
        let setup = MeasurementSetup::from_relative(deg(90.0), deg(90.0));
        let s = construct_state(&setup, Sign::Positive).unwrap();
        let rep = check_conditions(&s, &setup, HardyVariant::Original, DEFAULT_ZERO_TOL);
        assert!(rep.holds);
        assert_abs_diff_eq!(rep.p1a, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.p1b, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.p1c, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.p1d, 1.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn product_state_fails_conditions() {
        let setup = MeasurementSetup::from_relative(deg(90.0), deg(90.0));
        let s = TwoQubitState::product(
            Angle::ZERO,
            Outcome::Plus,
            Angle::ZERO,
            Outcome::Minus,
            Angle::ZERO,
            Angle::ZERO,
        );
        let rep = check_conditions(&s, &setup, HardyVariant::Original, DEFAULT_ZERO_TOL);
        assert!(!rep.holds);
        assert_abs_diff_eq!(rep.p1c, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn report_holds_definition() {
        let r =
            HardyReport::from_probabilities(HardyVariant::Original, [0.0, 0.0, 0.0, 0.0], 1e-10);
        assert!(!r.holds);
        let r =
            HardyReport::from_probabilities(HardyVariant::Original, [0.0, 2e-10, 0.0, 0.1], 1e-10);
        assert!(!r.holds);
        let r =
            HardyReport::from_probabilities(HardyVariant::Original, [1e-10, 0.0, 0.0, 0.1], 1e-10);
        assert!(r.holds);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(probability_closed_form(deg(0.0), deg(123.0)), 0.0);
        assert_eq!(probability_closed_form(deg(0.0), deg(0.0)), 0.0);
        assert_abs_diff_eq!(
            probability_closed_form(deg(90.0), deg(90.0)),
            1.0 / 12.0,
            epsilon = 1e-15
        );
        let t0 = theta_zero();
        assert_abs_diff_eq!(
            probability_closed_form(t0, t0),
            TAU.powi(-5),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(probability_closed_form(t0, t0), 0.0901699, epsilon = 1e-7);
        // finite at θ = π where the tan form blows up
        assert!(probability_closed_form(deg(180.0), deg(77.0)) < 1e-30);
    }

    #[test]
    fn closed_form_matches_tan_form_off_singularities() {
        for (t1, t2) in [(30.0, 50.0), (100.0, 250.0), (300.0, 10.0), (-45.0, 170.0)] {
            let (a, b) = (deg(t1), deg(t2));
            let (s1, _) = a.half_sin_cos();
            let (s2, _) = b.half_sin_cos();
            let x = (0.5 * a.radians()).tan().powi(2);
            let y = (0.5 * b.radians()).tan().powi(2);
            let tan_form = s1 * s1 * s2 * s2 / (x + y + x * y);
            assert_abs_diff_eq!(probability_closed_form(a, b), tan_form, epsilon = 1e-14);
        }
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(probability_diagonal(deg(0.0)), 0.0);
        assert_abs_diff_eq!(probability_diagonal(deg(90.0)), 1.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            probability_diagonal(deg(283.6546)),
            0.0901699,
            epsilon = 1e-7
        );
        // sec form of the diagonal expression
        let t = deg(140.0);
        let sec2 = 1.0 / (0.5 * t.radians()).cos().powi(2);
        let sec_form = t.radians().sin().powi(2) / (4.0 + 4.0 * sec2);
        assert_abs_diff_eq!(probability_diagonal(t), sec_form, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_coefficient_examples() {
        let c = diagonal_coefficients(deg(90.0)).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(c.c_mp, r, epsilon = 1e-15);
        assert_abs_diff_eq!(c.c_pm, r, epsilon = 1e-15);
        assert_abs_diff_eq!(c.c_mm, r, epsilon = 1e-15);

        let c = diagonal_coefficients(theta_zero()).unwrap();
        assert_abs_diff_eq!(c.c_mp.powi(2), TAU.powi(-2), epsilon = 1e-14);
        assert_abs_diff_eq!(c.c_mm.powi(2), TAU.powi(-3), epsilon = 1e-14);

        // reflection θ → 2π − θ keeps magnitudes, flips the sign of c_{-+} = c_{+-}
        let a = diagonal_coefficients(deg(50.0)).unwrap();
        let b = diagonal_coefficients(deg(310.0)).unwrap();
        assert_abs_diff_eq!(a.c_mp, -b.c_mp, epsilon = 1e-15);
        assert_abs_diff_eq!(a.c_mm, b.c_mm, epsilon = 1e-15);

        assert!(diagonal_coefficients(deg(540.0)).is_err());
    }

    #[test]
    fn diagonal_coefficients_match_constructor() {
        for d in [-300.0, -10.0, 1.0, 45.0, 179.0, 181.0, 300.0, 500.0] {
            let t = deg(d);
            let c = diagonal_coefficients(t).unwrap();
            let s =
                construct_state(&MeasurementSetup::from_relative(t, t), Sign::Positive).unwrap();
            assert_abs_diff_eq!(c.c_mp, s.c_mp(), epsilon = 1e-12);
            assert_abs_diff_eq!(c.c_pm, s.c_pm(), epsilon = 1e-12);
            assert_abs_diff_eq!(c.c_mm, s.c_mm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn solve_unique_examples() {
        let setup = MeasurementSetup::from_relative(deg(90.0), deg(90.0));
        let sol = solve_unique(&setup);
        assert_eq!(sol.dimension, 1);
        let c = construct_state(&setup, Sign::Positive).unwrap();
        let dot: f64 = sol
            .state
            .as_array()
            .iter()
            .zip(c.as_array())
            .map(|(x, y)| x * y)
            .sum();
        assert_abs_diff_eq!(dot.abs(), 1.0, epsilon = 1e-12);

        let t0 = theta_zero();
        let sol = solve_unique(&MeasurementSetup::from_relative(t0, t0));
        assert_eq!(sol.dimension, 1);
        assert_abs_diff_eq!(sol.state.c_mm().powi(2), TAU.powi(-3), epsilon = 1e-12);
    }

    #[test]
    fn solve_unique_degenerate_cases() {
        // both relative angles ≡ 0: (1b) and (1c) collapse to the same row c_{--} = 0
        let sol = solve_unique(&MeasurementSetup::from_relative(deg(0.0), deg(0.0)));
        assert_eq!(sol.dimension, 2);
        let sol = solve_unique(&MeasurementSetup::from_relative(deg(360.0), deg(0.0)));
        assert_eq!(sol.dimension, 2);
        for v in &sol.basis {
            assert_eq!(v[0], 0.0);
            assert_abs_diff_eq!(v[3], 0.0, epsilon = 1e-15);
        }

        // θ₁ = 0 alone: the solution is unique but it is the product state |+⟩|−⟩,
        // which gives no contradiction
        let setup = MeasurementSetup::from_relative(deg(0.0), deg(123.0));
        let sol = solve_unique(&setup);
        assert_eq!(sol.dimension, 1);
        assert_abs_diff_eq!(sol.state.c_pm().abs(), 1.0, epsilon = 1e-12);
        let rep = check_conditions(&sol.state, &setup, HardyVariant::Original, DEFAULT_ZERO_TOL);
        assert!(!rep.holds);
    }

    #[test]
    fn variant_outcome_tables() {
        use Outcome::{Minus as M, Plus as P};
        assert_eq!(HardyVariant::FlipA.outcomes(SettingPair::AB), (M, P));
        assert_eq!(HardyVariant::FlipA.outcomes(SettingPair::ABPrime), (P, M));
        assert_eq!(HardyVariant::FlipA.outcomes(SettingPair::APrimeB), (P, M));
        assert_eq!(
            HardyVariant::FlipA.outcomes(SettingPair::APrimeBPrime),
            (P, M)
        );
        assert_eq!(
            HardyVariant::FlipBoth.outcomes(SettingPair::APrimeBPrime),
            (P, P)
        );
        assert_eq!(HardyVariant::FlipB.outcomes(SettingPair::AB), (P, M));
        assert_eq!(
            "flip-b".parse::<HardyVariant>().unwrap(),
            HardyVariant::FlipB
        );
        assert!("sideways".parse::<HardyVariant>().is_err());
    }

    #[test]
    fn every_variant_holds_on_its_state() {
        let setup = MeasurementSetup::new(deg(5.0), deg(120.0), deg(200.0), deg(260.0));
        let p = probability_closed_form(setup.theta_1(), setup.theta_2());
        for v in HardyVariant::ALL {
            let s = construct_variant_state(&setup, v, Sign::Positive).unwrap();
            let rep = check_conditions(&s, &setup, v, DEFAULT_ZERO_TOL);
            assert!(rep.holds, "{v}");
            assert_abs_diff_eq!(rep.p1d, p, epsilon = 1e-12);
            if v != HardyVariant::Original {
                let orig = check_conditions(&s, &setup, HardyVariant::Original, DEFAULT_ZERO_TOL);
                assert!(
                    !orig.holds,
                    "{v} state should not satisfy the original conditions"
                );
            }
        }
    }
}
