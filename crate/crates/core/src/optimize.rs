//! Maxima and zero set of the contradiction probability surface `P(θ₁, θ₂)`.
//!
//! The maxima are located numerically (coarse periodic grid, then coordinate-wise
//! golden-section refinement); the golden-ratio characterization
//! `cos²(θ/2) = 1/τ` is checked afterwards, not used to find them.

use std::f64::consts::TAU as FULL_TURN;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::golden::TAU;
use crate::hardy::{probability_closed_form, probability_diagonal};
use crate::spinalg::{eigenvector, overlap, Angle, Outcome};

/// Probabilities on a uniform grid over `[0°, 360°]²`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScan {
    pub theta_1_axis: Vec<Angle>,
    pub theta_2_axis: Vec<Angle>,
    /// `values[i][j] = P(theta_1_axis[i], theta_2_axis[j])`
    pub values: Vec<Vec<f64>>,
}

impl GridScan {
    /// Largest cell as `(i, j, value)`; first in row-major order on ties.
    pub fn max(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        best
    }

    pub fn resolution(&self) -> usize {
        self.theta_1_axis.len()
    }
}

/// Evenly spaced angles from 0° to 360° inclusive.
pub fn inclusive_axis(resolution: usize) -> Vec<Angle> {
    let step = 360.0 / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| Angle::from_degrees(i as f64 * step))
        .collect()
}

/// Evaluates [`probability_closed_form`] on a `resolution × resolution` grid.
/// Rows are computed in parallel and assembled in order.
pub fn scan(resolution: usize) -> Result<GridScan> {
    if resolution < 2 {
        return Err(HardyError::InvalidArgument(format!(
            "scan resolution must be at least 2, got {resolution}"
        )));
    }
    let axis = inclusive_axis(resolution);
    let values = axis
        .par_iter()
        .map(|&t1| {
            axis.iter()
                .map(|&t2| probability_closed_form(t1, t2))
                .collect()
        })
        .collect();
    Ok(GridScan {
        theta_1_axis: axis.clone(),
        theta_2_axis: axis,
        values,
    })
}

/// `(θ, P(θ, θ))` along the diagonal, endpoints included.
pub fn diagonal_slice(resolution: usize) -> Result<Vec<(Angle, f64)>> {
    if resolution < 2 {
        return Err(HardyError::InvalidArgument(format!(
            "slice resolution must be at least 2, got {resolution}"
        )));
    }
    Ok(inclusive_axis(resolution)
        .into_iter()
        .map(|t| (t, probability_diagonal(t)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub theta_1: Angle,
    pub theta_2: Angle,
    pub p_max: f64,
    /// Value at the grid point the refinement started from.
    pub coarse_value: f64,
}

pub const DEFAULT_COARSE_RESOLUTION: usize = 72;
pub const DEFAULT_REFINE_TOL: f64 = 1e-10;
/// Refined maxima closer than this (degrees, periodic) are merged.
pub const MERGE_DISTANCE_DEG: f64 = 1.0;

const MAX_SWEEPS: usize = 100_000;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Stops once the bracket is narrower than `tol`; returns the best point evaluated.
pub fn golden_section_max(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn check_refine_args(coarse_resolution: usize, refine_tol: f64) -> Result<()> {
    if coarse_resolution < 16 {
        return Err(HardyError::InvalidArgument(format!(
            "coarse resolution must be at least 16, got {coarse_resolution}"
        )));
    }
    if refine_tol.is_nan() || refine_tol <= 0.0 {
        return Err(HardyError::InvalidArgument(format!(
            "refine tolerance must be positive, got {refine_tol}"
        )));
    }
    Ok(())
}

fn periodic_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(FULL_TURN);
    d.min(FULL_TURN - d)
}

/// All local maxima of `P(θ₁, θ₂)` over one period.
///
/// Seeds are cells of a periodic `coarse_resolution²` grid that are positive and no
/// smaller than their eight neighbours. Each seed is refined by alternating
/// golden-section searches along θ₁ and θ₂, bracketed one grid step around the
/// current point, until a full sweep moves less than `refine_tol` radians.
pub fn find_maxima(coarse_resolution: usize, refine_tol: f64) -> Result<Vec<Optimum>> {
    check_refine_args(coarse_resolution, refine_tol)?;
    let n = coarse_resolution;
    let h = FULL_TURN / n as f64;
    let axis: Vec<Angle> = (0..n).map(|i| Angle::from_radians(i as f64 * h)).collect();
    let grid: Vec<Vec<f64>> = axis
        .par_iter()
        .map(|&t1| {
            axis.iter()
                .map(|&t2| probability_closed_form(t1, t2))
                .collect()
        })
        .collect();

    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = grid[i][j];
            if v <= 0.0 {
                continue;
            }
            let is_peak = (-1isize..=1).all(|di| {
                (-1isize..=1).all(|dj| {
                    let ii = (i as isize + di).rem_euclid(n as isize) as usize;
                    let jj = (j as isize + dj).rem_euclid(n as isize) as usize;
                    grid[ii][jj] <= v
                })
            });
            if is_peak {
                seeds.push((axis[i].radians(), axis[j].radians(), v));
            }
        }
    }

    let refined: Vec<Optimum> = seeds
        .par_iter()
        .map(|&(x, y, v)| refine_peak(x, y, v, h, refine_tol))
        .collect();
    Ok(merge_peaks(refined))
}

fn refine_peak(mut x: f64, mut y: f64, coarse_value: f64, h: f64, tol: f64) -> Optimum {
    let p =
        |a: f64, b: f64| probability_closed_form(Angle::from_radians(a), Angle::from_radians(b));
    let mut best = coarse_value;
    for _ in 0..MAX_SWEEPS {
        let (nx, fx) = golden_section_max(|t| p(t, y), x - h, x + h, tol);
        let nx = if fx >= best { nx } else { x };
        best = best.max(fx);
        let (ny, fy) = golden_section_max(|t| p(nx, t), y - h, y + h, tol);
        let ny = if fy >= best { ny } else { y };
        best = best.max(fy);
        let moved = (nx - x).abs().max((ny - y).abs());
        x = nx;
        y = ny;
        if moved < tol {
            break;
        }
    }
    let theta_1 = Angle::from_radians(x).normalized();
    let theta_2 = Angle::from_radians(y).normalized();
    Optimum {
        theta_1,
        theta_2,
        p_max: probability_closed_form(theta_1, theta_2),
        coarse_value,
    }
}

fn merge_peaks(mut peaks: Vec<Optimum>) -> Vec<Optimum> {
    let merge = MERGE_DISTANCE_DEG.to_radians();
    peaks.sort_by(|a, b| b.p_max.total_cmp(&a.p_max));
    let mut kept: Vec<Optimum> = Vec::new();
    for p in peaks {
        let dup = kept.iter().any(|k| {
            periodic_distance(k.theta_1.radians(), p.theta_1.radians()) < merge
                && periodic_distance(k.theta_2.radians(), p.theta_2.radians()) < merge
        });
        if !dup {
            kept.push(p);
        }
    }
    // millidegree key so round-off between symmetric peaks does not decide the order
    let key = |a: Angle| (a.degrees() * 1e3).round() as i64;
    kept.sort_by_key(|o| (key(o.theta_1), key(o.theta_2)));
    kept
}

/// Local maxima of `P(θ, θ)` over one period, refined by golden-section search.
pub fn find_diagonal_maxima(coarse_resolution: usize, refine_tol: f64) -> Result<Vec<Optimum>> {
    check_refine_args(coarse_resolution, refine_tol)?;
    let n = coarse_resolution;
    let h = FULL_TURN / n as f64;
    let f = |t: f64| probability_diagonal(Angle::from_radians(t));
    let values: Vec<f64> = (0..n).map(|i| f(i as f64 * h)).collect();
    let mut peaks = Vec::new();
    for i in 0..n {
        let v = values[i];
        if v > 0.0 && values[(i + n - 1) % n] <= v && values[(i + 1) % n] <= v {
            let x0 = i as f64 * h;
            let (x, fx) = golden_section_max(f, x0 - h, x0 + h, refine_tol);
            let x = if fx >= v { x } else { x0 };
            let t = Angle::from_radians(x).normalized();
            peaks.push(Optimum {
                theta_1: t,
                theta_2: t,
                p_max: probability_diagonal(t),
                coarse_value: v,
            });
        }
    }
    Ok(merge_peaks(peaks))
}

/// One squared-overlap quantity on both particles against its golden target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenQuantity {
    pub name: String,
    pub side_a: f64,
    pub side_b: f64,
    pub target: f64,
}

impl GoldenQuantity {
    pub fn deviation(&self) -> f64 {
        (self.side_a - self.target)
            .abs()
            .max((self.side_b - self.target).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub quantities: Vec<GoldenQuantity>,
    pub max_deviation: f64,
    /// `2/τ² + 1/τ³ − 1`
    pub coefficient_identity_residual: f64,
}

impl GoldenCheck {
    /// Tight agreement: every deviation below 1e-6.
    pub fn passes(&self) -> bool {
        self.max_deviation < GOLDEN_TIGHT_TOL
    }
}

pub const GOLDEN_TIGHT_TOL: f64 = 1e-6;
/// Deviations above this mean the optimum is not a golden-ratio maximum at all.
pub const GOLDEN_REJECT_TOL: f64 = 1e-4;

/// Compares an optimum with the golden-ratio conditions: `cos²(θ/2) = 1/τ`,
/// `sin²(θ/2) = 1 − 1/τ`, and the squared overlaps
/// `|⟨S(θ′)=∓1|S(θ)=−1⟩|²`, `|⟨S(θ′)=∓1|S(θ)=+1⟩|²` on each particle.
pub fn verify_golden(optimum: &Optimum) -> Result<GoldenCheck> {
    let inv = 1.0 / TAU;
    let sides = [optimum.theta_1, optimum.theta_2];
    let half = sides.map(|t| t.half_sin_cos());
    // overlap of |S(θ′)=primed⟩ with |S(θ)=unprimed⟩, written in the |S(θ)⟩ basis
    let ov = |rel: Angle, primed: Outcome, unprimed: Outcome| {
        overlap(
            eigenvector(Angle::ZERO, rel, primed),
            eigenvector(Angle::ZERO, Angle::ZERO, unprimed),
        )
        .powi(2)
    };
    let both = |f: &dyn Fn(Angle) -> f64| (f(sides[0]), f(sides[1]));

    let mut quantities = Vec::new();
    let mut push = |name: &str, (a, b): (f64, f64), target: f64| {
        quantities.push(GoldenQuantity {
            name: name.to_string(),
            side_a: a,
            side_b: b,
            target,
        })
    };
    push(
        "cos^2(theta/2)",
        (half[0].1.powi(2), half[1].1.powi(2)),
        inv,
    );
    push(
        "sin^2(theta/2)",
        (half[0].0.powi(2), half[1].0.powi(2)),
        1.0 - inv,
    );
    push(
        "|<S(theta')=-1|S(theta)=-1>|^2",
        both(&|t| ov(t, Outcome::Minus, Outcome::Minus)),
        inv,
    );
    push(
        "|<S(theta')=-1|S(theta)=+1>|^2",
        both(&|t| ov(t, Outcome::Minus, Outcome::Plus)),
        1.0 - inv,
    );
    push(
        "|<S(theta')=+1|S(theta)=-1>|^2",
        both(&|t| ov(t, Outcome::Plus, Outcome::Minus)),
        1.0 - inv,
    );
    push(
        "|<S(theta')=+1|S(theta)=+1>|^2",
        both(&|t| ov(t, Outcome::Plus, Outcome::Plus)),
        inv,
    );

    let max_deviation = quantities
        .iter()
        .map(GoldenQuantity::deviation)
        .fold(0.0, f64::max);
    if max_deviation > GOLDEN_REJECT_TOL {
        return Err(HardyError::NotGolden { max_deviation });
    }
    Ok(GoldenCheck {
        quantities,
        max_deviation,
        coefficient_identity_residual: 2.0 / TAU.powi(2) + 1.0 / TAU.powi(3) - 1.0,
    })
}
