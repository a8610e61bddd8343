mod common;

use hardy_lab::hardy::probability_closed_form;
use hardy_lab::optimize::{
    diagonal_slice, find_diagonal_maxima, find_maxima, scan, verify_golden,
    DEFAULT_COARSE_RESOLUTION, DEFAULT_REFINE_TOL,
};
use hardy_lab::Angle;

use common::tau;

/// Distance of `theta` (radians) to the nearer golden angle, `θ₀` or `2π − θ₀`.
fn golden_distance(theta: Angle) -> f64 {
    let t0 = 2.0 * tau().powf(-0.5).acos();
    let t = theta.normalized().radians();
    (t - t0)
        .abs()
        .min((t - (2.0 * std::f64::consts::PI - t0)).abs())
}

#[test]
fn refinement_never_lowers_the_seed_value() {
    for res in [24, DEFAULT_COARSE_RESOLUTION, 181] {
        let maxima = find_maxima(res, DEFAULT_REFINE_TOL).unwrap();
        assert_eq!(maxima.len(), 4, "resolution {res}");
        for m in &maxima {
            assert!(m.p_max >= m.coarse_value);
            assert_eq!(m.p_max, probability_closed_form(m.theta_1, m.theta_2));
        }
    }
}

#[test]
fn refined_maxima_sit_on_golden_angles() {
    // A maximum is flat to second order, so a value-only search resolves the
    // angle to roughly √ε rather than to the refinement tolerance.
    let angle_tol = 1e-7;
    for m in find_maxima(DEFAULT_COARSE_RESOLUTION, DEFAULT_REFINE_TOL).unwrap() {
        assert!(golden_distance(m.theta_1) < angle_tol);
        assert!(golden_distance(m.theta_2) < angle_tol);
        assert!((m.p_max - tau().powi(-5)).abs() < 1e-15);
        let check = verify_golden(&m).unwrap();
        assert!(check.passes());
        assert!(check.coefficient_identity_residual.abs() < 1e-12);
    }
}

#[test]
fn diagonal_has_two_maxima() {
    let maxima = find_diagonal_maxima(DEFAULT_COARSE_RESOLUTION, DEFAULT_REFINE_TOL).unwrap();
    assert_eq!(maxima.len(), 2);
    for m in maxima {
        assert_eq!(m.theta_1, m.theta_2);
        assert!(golden_distance(m.theta_1) < 1e-7);
    }
}

#[test]
fn scan_is_symmetric_and_partition_independent() {
    let grid = scan(73).unwrap();
    let n = grid.resolution();
    for i in 0..n {
        for j in 0..n {
            let v = grid.values[i][j];
            assert!((v - grid.values[j][i]).abs() < 1e-12);
            assert!((v - grid.values[n - 1 - i][n - 1 - j]).abs() < 1e-12);
        }
    }
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(5)
        .build()
        .unwrap();
    let a = single.install(|| scan(97).unwrap());
    let b = many.install(|| scan(97).unwrap());
    assert_eq!(a, b);
}

#[test]
fn slice_follows_the_diagonal() {
    let slice = diagonal_slice(361).unwrap();
    assert_eq!(slice.len(), 361);
    assert_eq!(slice[0].0.degrees(), 0.0);
    assert!((slice[360].0.degrees() - 360.0).abs() < 1e-12);
    for (t, p) in slice {
        assert!((p - probability_closed_form(t, t)).abs() < 1e-15);
    }
}
