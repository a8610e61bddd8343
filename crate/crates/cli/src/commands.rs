use std::fmt;

use serde_json::{json, Value};

use hardy_lab::golden::{p_max, theta_zero};
use hardy_lab::hardy::{
    check_conditions, construct_variant_state, probability_closed_form, probability_diagonal,
    HardyReport, Sign,
};
use hardy_lab::nonlocal::{self, LhvStrategy};
use hardy_lab::optimize::{self, Optimum, DEFAULT_REFINE_TOL};
use hardy_lab::schmidt::{self, EntanglementKind};
use hardy_lab::spinalg::SymMatrix2;
use hardy_lab::{Angle, HardyError, HardyVariant, MeasurementSetup, Side, TwoQubitState};

use crate::args::{check_degrees, AngleArgs, Command, OutputArgs};
use crate::output::{Cell, Report, Table};

#[derive(Debug)]
pub enum Failure {
    /// Invalid flags or values (exit 2).
    Usage(String),
    /// The request is well-formed but has no answer, e.g. a degenerate setup (exit 3).
    Domain(HardyError),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "invalid arguments: {m}"),
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<HardyError> for Failure {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Domain(other),
        }
    }
}

type CmdResult = Result<Report, Failure>;

pub fn run(command: &Command) -> Result<(), Failure> {
    let (report, out) = dispatch(command)?;
    report
        .emit(out.format, out.output.as_deref())
        .map_err(Failure::Io)
}

fn dispatch(command: &Command) -> Result<(Report, &OutputArgs), Failure> {
    Ok(match command {
        Command::Construct {
            angles,
            variant,
            out,
        } => (construct(angles, variant.variant.into())?, out),
        Command::Check {
            angles,
            variant,
            zero_tol,
            out,
        } => (check(angles, variant.variant.into(), *zero_tol)?, out),
        Command::Prob {
            angles,
            diagonal,
            out,
        } => (prob(angles, *diagonal)?, out),
        Command::Scan { resolution, out } => (scan(*resolution)?, out),
        Command::Slice { resolution, out } => (slice(*resolution)?, out),
        Command::Schmidt { angles, out } => (schmidt_cmd(angles)?, out),
        Command::Optimize { resolution, out } => (optimize_cmd(*resolution)?, out),
        Command::Lhv {
            angles,
            variant,
            zero_tol,
            out,
        } => (lhv(angles, variant.variant.into(), *zero_tol)?, out),
        Command::Sample {
            angles,
            variant,
            samples,
            seed,
            zero_tol,
            out,
        } => (
            sample(angles, variant.variant.into(), *samples, *seed, *zero_tol)?,
            out,
        ),
    })
}

fn setup_of(angles: &AngleArgs) -> Result<MeasurementSetup, Failure> {
    angles.setup().map_err(Failure::Usage)
}

fn check_zero_tol(t: f64) -> Result<(), Failure> {
    if !t.is_finite() || t < 0.0 {
        return Err(Failure::Usage(format!(
            "--zero-tol must be a non-negative number, got {t}"
        )));
    }
    Ok(())
}

fn deg(a: Angle) -> f64 {
    a.degrees()
}

fn setup_json(s: &MeasurementSetup) -> Value {
    json!({
        "theta_a_deg": deg(s.theta_a()),
        "theta_a_prime_deg": deg(s.theta_a_prime()),
        "theta_b_deg": deg(s.theta_b()),
        "theta_b_prime_deg": deg(s.theta_b_prime()),
        "theta1_deg": deg(s.theta_1().normalized()),
        "theta2_deg": deg(s.theta_2().normalized()),
    })
}

fn state_json(s: &TwoQubitState) -> Value {
    let [pp, pm, mp, mm] = s.as_array();
    json!({
        "coefficients": { "c_pp": pp, "c_pm": pm, "c_mp": mp, "c_mm": mm },
        "squared": { "c_pp": pp * pp, "c_pm": pm * pm, "c_mp": mp * mp, "c_mm": mm * mm },
    })
}

fn report_json(r: &HardyReport) -> Value {
    json!({
        "variant": r.variant.name(),
        "p1a": r.p1a,
        "p1b": r.p1b,
        "p1c": r.p1c,
        "p1d": r.p1d,
        "zero_tol": r.zero_tol,
        "holds": r.holds,
    })
}

fn matrix_json(m: &SymMatrix2) -> Value {
    json!([[m.a11, m.a12], [m.a12, m.a22]])
}

fn construct(angles: &AngleArgs, variant: HardyVariant) -> CmdResult {
    let setup = setup_of(angles)?;
    let state = construct_variant_state(&setup, variant, Sign::Positive)?;
    let mut body = json!({ "setup": setup_json(&setup), "variant": variant.name() });
    merge(&mut body, state_json(&state));
    Ok(Report::new("construct", body))
}

fn check(angles: &AngleArgs, variant: HardyVariant, zero_tol: f64) -> CmdResult {
    check_zero_tol(zero_tol)?;
    let setup = setup_of(angles)?;
    let state = construct_variant_state(&setup, variant, Sign::Positive)?;
    let report = check_conditions(&state, &setup, variant, zero_tol);
    Ok(Report::new(
        "check",
        json!({
            "setup": setup_json(&setup),
            "report": report_json(&report),
            "closed_form_probability": probability_closed_form(setup.theta_1(), setup.theta_2()),
        }),
    ))
}

fn prob(angles: &AngleArgs, diagonal: bool) -> CmdResult {
    if diagonal {
        let theta = angles
            .theta1
            .ok_or_else(|| Failure::Usage("--diagonal needs --theta1".into()))?;
        check_degrees(theta).map_err(Failure::Usage)?;
        let t = Angle::from_degrees(theta);
        return Ok(Report::new(
            "prob",
            json!({
                "mode": "diagonal",
                "theta_deg": theta,
                "probability": probability_diagonal(t),
            }),
        ));
    }
    let setup = setup_of(angles)?;
    Ok(Report::new(
        "prob",
        json!({
            "mode": "point",
            "theta1_deg": deg(setup.theta_1().normalized()),
            "theta2_deg": deg(setup.theta_2().normalized()),
            "probability": probability_closed_form(setup.theta_1(), setup.theta_2()),
        }),
    ))
}

fn scan(resolution: usize) -> CmdResult {
    if resolution < 2 {
        return Err(Failure::Usage(format!(
            "--resolution must be at least 2, got {resolution}"
        )));
    }
    let grid = optimize::scan(resolution)?;
    let axis: Vec<f64> = grid.theta_1_axis.iter().map(|a| a.degrees()).collect();
    let (mi, mj, mv) = grid.max();
    let mut rows = Vec::with_capacity(resolution * resolution);
    for (i, row) in grid.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            rows.push(vec![Cell::Num(axis[i]), Cell::Num(axis[j]), Cell::Num(v)]);
        }
    }
    let report = Report::new(
        "scan",
        json!({
            "resolution": resolution,
            "axis_deg": axis,
            "max": { "theta1_deg": axis[mi], "theta2_deg": axis[mj], "probability": mv },
            "values": grid.values,
        }),
    );
    Ok(report.with_table(Table {
        header: vec!["theta1_deg", "theta2_deg", "probability"],
        rows,
    }))
}

fn slice(resolution: usize) -> CmdResult {
    if resolution < 2 {
        return Err(Failure::Usage(format!(
            "--resolution must be at least 2, got {resolution}"
        )));
    }
    let points = optimize::diagonal_slice(resolution)?;
    let rows = points
        .iter()
        .map(|(t, p)| vec![Cell::Num(t.degrees()), Cell::Num(*p)])
        .collect();
    let body: Vec<Value> = points
        .iter()
        .map(|(t, p)| json!({ "theta_deg": t.degrees(), "probability": p }))
        .collect();
    Ok(
        Report::new("slice", json!({ "resolution": resolution, "points": body })).with_table(
            Table {
                header: vec!["theta_deg", "probability"],
                rows,
            },
        ),
    )
}

fn schmidt_cmd(angles: &AngleArgs) -> CmdResult {
    let setup = setup_of(angles)?;
    let state = construct_variant_state(&setup, HardyVariant::Original, Sign::Positive)?;
    let form = schmidt::decompose(&state);
    let class = schmidt::classify(&form);
    let kind = match class.kind {
        EntanglementKind::Product => "product",
        EntanglementKind::Partial => "partial",
        EntanglementKind::Maximal => "maximal",
    };
    let angles_json = match (form.angles, form.reconstruct()) {
        (Some(a), Some(rebuilt)) => {
            let residual = rebuilt
                .as_array()
                .iter()
                .zip(state.as_array())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            let sign = |s: Sign| if s == Sign::Positive { 1 } else { -1 };
            json!({
                "phi_a_deg": deg(a.phi_a.normalized()),
                "phi_b_deg": deg(a.phi_b.normalized()),
                "phi_a_minus_theta_a_deg": deg((a.phi_a - setup.theta_a()).normalized()),
                "phi_b_minus_theta_b_deg": deg((a.phi_b - setup.theta_b()).normalized()),
                "sign_pattern": [sign(a.sign_pattern.0), sign(a.sign_pattern.1)],
                "reconstruction_residual": residual,
            })
        }
        _ => Value::Null,
    };
    let mut body = json!({ "setup": setup_json(&setup) });
    merge(&mut body, state_json(&state));
    merge(
        &mut body,
        json!({
            "rho_a": matrix_json(&schmidt::reduced_density(&state, Side::A)),
            "rho_b": matrix_json(&schmidt::reduced_density(&state, Side::B)),
            "lambda_plus": form.lambda_plus,
            "lambda_minus": form.lambda_minus,
            "degenerate": form.degenerate(),
            "schmidt_angles": angles_json,
            "class": kind,
            "concurrence_like": class.concurrence_like,
        }),
    );
    Ok(Report::new("schmidt", body))
}

fn optimum_json(o: &Optimum) -> Result<Value, Failure> {
    let check = optimize::verify_golden(o)?;
    Ok(json!({
        "theta1_deg": o.theta_1.degrees(),
        "theta2_deg": o.theta_2.degrees(),
        "probability": o.p_max,
        "coarse_value": o.coarse_value,
        "golden": {
            "passes": check.passes(),
            "max_deviation": check.max_deviation,
            "coefficient_identity_residual": check.coefficient_identity_residual,
            "quantities": check.quantities.iter().map(|q| json!({
                "name": q.name, "side_a": q.side_a, "side_b": q.side_b, "target": q.target,
            })).collect::<Vec<_>>(),
        },
    }))
}

fn optimize_cmd(resolution: usize) -> CmdResult {
    if resolution < 16 {
        return Err(Failure::Usage(format!(
            "--resolution must be at least 16, got {resolution}"
        )));
    }
    let maxima = optimize::find_maxima(resolution, DEFAULT_REFINE_TOL)?;
    let diagonal = optimize::find_diagonal_maxima(resolution, DEFAULT_REFINE_TOL)?;
    let rows = maxima
        .iter()
        .map(|o| {
            vec![
                Cell::Num(o.theta_1.degrees()),
                Cell::Num(o.theta_2.degrees()),
                Cell::Num(o.p_max),
            ]
        })
        .collect();
    let body = json!({
        "coarse_resolution": resolution,
        "refine_tol_rad": DEFAULT_REFINE_TOL,
        "analytic": { "theta0_deg": theta_zero().degrees(), "p_max": p_max() },
        "maxima": maxima.iter().map(optimum_json).collect::<Result<Vec<_>, _>>()?,
        "diagonal_maxima": diagonal.iter().map(|o| json!({
            "theta_deg": o.theta_1.degrees(), "probability": o.p_max,
        })).collect::<Vec<_>>(),
    });
    Ok(Report::new("optimize", body).with_table(Table {
        header: vec!["theta1_deg", "theta2_deg", "probability"],
        rows,
    }))
}

fn strategy_json(s: &LhvStrategy) -> Value {
    json!({
        "a": s.a.value(), "a_prime": s.a_prime.value(),
        "b": s.b.value(), "b_prime": s.b_prime.value(),
    })
}

fn lhv(angles: &AngleArgs, variant: HardyVariant, zero_tol: f64) -> CmdResult {
    check_zero_tol(zero_tol)?;
    let consistent = nonlocal::enumerate_consistent(variant);
    let mut body = json!({
        "variant": variant.name(),
        "strategies_total": LhvStrategy::all().len(),
        "consistent": consistent.iter().map(strategy_json).collect::<Vec<_>>(),
        "lhv_bound": nonlocal::lhv_bound(variant),
    });
    if !angles.is_empty() {
        let setup = setup_of(angles)?;
        let state = construct_variant_state(&setup, variant, Sign::Positive)?;
        let report = check_conditions(&state, &setup, variant, zero_tol);
        let chain = nonlocal::logic_chain(&report)?;
        merge(
            &mut body,
            json!({
                "setup": setup_json(&setup),
                "report": report_json(&report),
                "chain": chain.steps.iter().map(|s| json!({
                    "condition": s.condition,
                    "setting": s.setting.label(),
                    "outcomes": [s.outcomes.0.value(), s.outcomes.1.value()],
                    "probability": s.probability,
                    "statement": s.statement,
                })).collect::<Vec<_>>(),
                "contradiction_magnitude": chain.contradiction_magnitude,
                "gap_over_lhv_bound": chain.contradiction_magnitude - nonlocal::lhv_bound(variant),
            }),
        );
    }
    Ok(Report::new("lhv", body))
}

fn sample(
    angles: &AngleArgs,
    variant: HardyVariant,
    n: u64,
    seed: u64,
    zero_tol: Option<f64>,
) -> CmdResult {
    if n == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    if let Some(t) = zero_tol {
        check_zero_tol(t)?;
    }
    let setup = setup_of(angles)?;
    let state = construct_variant_state(&setup, variant, Sign::Positive)?;
    let stats = nonlocal::sample(&state, &setup, n, seed)?;
    let estimate = nonlocal::estimate_report(&stats, variant, zero_tol)?;
    let chi = nonlocal::chi_square(&stats, &state, &setup);

    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for pair in hardy_lab::hardy::SettingPair::ALL {
        let (da, db) = setup.directions(pair);
        for a in hardy_lab::Outcome::BOTH {
            for b in hardy_lab::Outcome::BOTH {
                let count = stats.count(pair, a, b);
                let freq = stats.frequency(pair, a, b).unwrap_or(0.0);
                let p = state.joint_probability(da, a, db, b);
                rows.push(vec![
                    Cell::Text(pair.label().replace(',', ";")),
                    Cell::Text(a.to_string()),
                    Cell::Text(b.to_string()),
                    Cell::Int(count),
                    Cell::Num(freq),
                    Cell::Num(p),
                ]);
                cells.push(json!({
                    "setting": pair.label(), "out_a": a.value(), "out_b": b.value(),
                    "count": count, "frequency": freq, "probability": p,
                }));
            }
        }
    }
    let body = json!({
        "setup": setup_json(&setup),
        "variant": variant.name(),
        "samples": n,
        "seed": seed,
        "rng": "ChaCha8, chunk i of 65536 trials on stream i",
        "counts": cells,
        "empirical_report": report_json(&estimate.report),
        "min_trials_per_setting": estimate.min_trials,
        "low_confidence": estimate.low_confidence,
        "chi_square": {
            "statistic": chi.statistic, "dof": chi.dof, "p_value": chi.p_value,
            "impossible_events": chi.impossible_events, "passes_at_1e-3": chi.passes(1e-3),
        },
    });
    Ok(Report::new("sample", body).with_table(Table {
        header: vec![
            "setting",
            "out_a",
            "out_b",
            "count",
            "frequency",
            "probability",
        ],
        rows,
    }))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}
