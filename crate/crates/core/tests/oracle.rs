mod common;

use approx::assert_abs_diff_eq;
use hardy_lab::hardy::{
    check_conditions, construct_state, construct_variant_state, probability_closed_form,
    probability_diagonal, solve_unique, Sign, DEFAULT_ZERO_TOL,
};
use hardy_lab::schmidt::{classify, decompose, product_state_conditions, EntanglementKind};
use hardy_lab::{Angle, HardyVariant, MeasurementSetup, Outcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{degree_grid, probability, tau};

fn random_setup(rng: &mut ChaCha8Rng) -> MeasurementSetup {
    loop {
        let d = [(); 4].map(|_| Angle::from_degrees(rng.random_range(-360.0..360.0)));
        let s = MeasurementSetup::new(d[0], d[1], d[2], d[3]);
        if s.check_non_degenerate().is_ok() {
            return s;
        }
    }
}

#[test]
fn closed_form_matches_kronecker_model() {
    let grid = degree_grid(73);
    for &t1 in &grid {
        for &t2 in &grid {
            let s =
                MeasurementSetup::from_relative(Angle::from_degrees(t1), Angle::from_degrees(t2));
            let Ok(state) = construct_state(&s, Sign::Positive) else {
                continue;
            };
            let brute = probability(
                &state,
                s.theta_a_prime(),
                Outcome::Minus,
                s.theta_b_prime(),
                Outcome::Minus,
            );
            let closed = probability_closed_form(s.theta_1(), s.theta_2());
            assert_abs_diff_eq!(brute, closed, epsilon = 1e-10);
        }
    }
}

#[test]
fn library_probabilities_match_kronecker_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let s = random_setup(&mut rng);
        for v in HardyVariant::ALL {
            let state = construct_variant_state(&s, v, Sign::Positive).unwrap();
            for da in [s.theta_a(), s.theta_a_prime()] {
                for db in [s.theta_b(), s.theta_b_prime()] {
                    for oa in Outcome::BOTH {
                        for ob in Outcome::BOTH {
                            assert_abs_diff_eq!(
                                state.joint_probability(da, oa, db, ob),
                                probability(&state, da, oa, db, ob),
                                epsilon = 1e-12
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn diagonal_form_matches_closed_form() {
    for t in degree_grid(721) {
        let a = Angle::from_degrees(t);
        assert_abs_diff_eq!(
            probability_diagonal(a),
            probability_closed_form(a, a),
            epsilon = 1e-15
        );
    }
}

#[test]
fn linear_solve_agrees_with_constructor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let s = random_setup(&mut rng);
        let sol = solve_unique(&s);
        assert_eq!(sol.dimension, 1);
        let c = construct_state(&s, Sign::Positive).unwrap().as_array();
        let x = sol.state.as_array();
        let dot: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(dot.abs(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn degenerate_setups_lose_uniqueness_only_when_both_angles_vanish() {
    let zero = MeasurementSetup::from_relative(Angle::ZERO, Angle::ZERO);
    assert_eq!(solve_unique(&zero).dimension, 2);

    // θ₁ = 0 alone leaves a one-dimensional space: a product state with no contradiction.
    let s = MeasurementSetup::from_relative(Angle::ZERO, Angle::from_degrees(60.0));
    let sol = solve_unique(&s);
    assert_eq!(sol.dimension, 1);
    let r = check_conditions(&sol.state, &s, HardyVariant::Original, DEFAULT_ZERO_TOL);
    assert!(!r.holds);
    assert_abs_diff_eq!(r.p1d, 0.0, epsilon = 1e-15);
}

#[test]
fn golden_state_values() {
    let t0 = Angle::from_radians(2.0 * tau().powf(-0.5).acos());
    let s = MeasurementSetup::from_relative(t0, t0);
    let state = construct_state(&s, Sign::Positive).unwrap();
    assert_abs_diff_eq!(state.c_pm().powi(2), tau().powi(-2), epsilon = 1e-12);
    assert_abs_diff_eq!(state.c_mp().powi(2), tau().powi(-2), epsilon = 1e-12);
    assert_abs_diff_eq!(state.c_mm().powi(2), tau().powi(-3), epsilon = 1e-12);
    assert_abs_diff_eq!(
        probability_closed_form(t0, t0),
        tau().powi(-5),
        epsilon = 1e-15
    );
    assert_abs_diff_eq!(t0.degrees(), 76.3454, epsilon = 1e-4);
}

#[test]
fn right_angle_state_values() {
    let t = Angle::from_degrees(90.0);
    let s = MeasurementSetup::from_relative(t, t);
    let state = construct_state(&s, Sign::Positive).unwrap();
    for c in [state.c_pm(), state.c_mp(), state.c_mm()] {
        assert_abs_diff_eq!(c * c, 1.0 / 3.0, epsilon = 1e-15);
    }
    assert_abs_diff_eq!(probability_closed_form(t, t), 1.0 / 12.0, epsilon = 1e-15);
    let form = decompose(&state);
    assert_abs_diff_eq!(form.lambda_plus, 0.5 + 5f64.sqrt() / 6.0, epsilon = 1e-12);
    assert_abs_diff_eq!(form.lambda_minus, 0.5 - 5f64.sqrt() / 6.0, epsilon = 1e-12);
}

#[test]
fn constructed_states_are_partially_entangled_and_not_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let s = random_setup(&mut rng);
        let state = construct_state(&s, Sign::Positive).unwrap();
        assert_eq!(classify(&decompose(&state)).kind, EntanglementKind::Partial);
        let (pa, pb) = (rng.random_range(0.0..720.0), rng.random_range(0.0..720.0));
        assert!(
            !product_state_conditions(Angle::from_degrees(pa), Angle::from_degrees(pb), &s)
                .compatible
        );
    }
}
