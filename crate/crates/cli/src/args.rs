use clap::{Args, Parser, Subcommand, ValueEnum};

use hardy_lab::hardy::{HardyVariant, MeasurementSetup, DEFAULT_ZERO_TOL};
use hardy_lab::optimize::DEFAULT_COARSE_RESOLUTION;
use hardy_lab::Angle;

/// Largest accepted angle magnitude, in degrees.
pub const MAX_DEGREES: f64 = 720.0;

#[derive(Debug, Parser)]
#[command(
    name = "hardy-lab",
    version,
    about = "Hardy-type nonlocality for two spin-1/2 particles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the unique Hardy state for a setup.
    Construct {
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        variant: VariantArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate the four Hardy conditions on the constructed state.
    Check {
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        variant: VariantArg,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL, allow_negative_numbers = true)]
        zero_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form contradiction probability at one point, or on the diagonal θ1 = θ2.
    Prob {
        #[command(flatten)]
        angles: AngleArgs,
        /// Evaluate the diagonal form at θ1 (θ2 is ignored and may be omitted).
        #[arg(long)]
        diagonal: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Probability surface over [0°, 360°]².
    Scan {
        #[arg(long, default_value_t = 181)]
        resolution: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Probability along θ1 = θ2 over [0°, 360°].
    Slice {
        #[arg(long, default_value_t = 361)]
        resolution: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Schmidt decomposition of the constructed state.
    Schmidt {
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Locate the maxima of the probability surface and check the golden-ratio conditions.
    Optimize {
        /// Coarse grid resolution per axis before refinement.
        #[arg(long, default_value_t = DEFAULT_COARSE_RESOLUTION)]
        resolution: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Local hidden-variable strategies and, for a given setup, the logic chain.
    Lhv {
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        variant: VariantArg,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL, allow_negative_numbers = true)]
        zero_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte-Carlo measurement runs on the constructed state.
    Sample {
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        variant: VariantArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Zero threshold for the empirical report; defaults to a 5σ rule.
        #[arg(long, allow_negative_numbers = true)]
        zero_tol: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Measurement directions in degrees.
#[derive(Debug, Clone, Default, Args)]
pub struct AngleArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["theta1", "theta2"])]
    pub theta_a: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["theta1", "theta2"])]
    pub theta_a_prime: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["theta1", "theta2"])]
    pub theta_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["theta1", "theta2"])]
    pub theta_b_prime: Option<f64>,
    /// Relative angle θa′ − θa, with θa = 0.
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    /// Relative angle θb′ − θb, with θb = 0.
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
}

impl AngleArgs {
    pub fn is_empty(&self) -> bool {
        [
            self.theta_a,
            self.theta_a_prime,
            self.theta_b,
            self.theta_b_prime,
            self.theta1,
            self.theta2,
        ]
        .iter()
        .all(Option::is_none)
    }

    /// Setup from either the four absolute angles or the relative shortcut.
    pub fn setup(&self) -> Result<MeasurementSetup, String> {
        let four = [
            self.theta_a,
            self.theta_a_prime,
            self.theta_b,
            self.theta_b_prime,
        ];
        let degrees = match (self.theta1, self.theta2) {
            (Some(t1), Some(t2)) => [0.0, t1, 0.0, t2],
            (None, None) if four.iter().all(Option::is_some) => four.map(|x| x.unwrap_or_default()),
            _ => {
                return Err(
                    "give either --theta-a, --theta-a-prime, --theta-b, --theta-b-prime or --theta1 and --theta2"
                        .into(),
                )
            }
        };
        for d in degrees {
            check_degrees(d)?;
        }
        let [a, ap, b, bp] = degrees.map(|d| Angle::from_degrees(d).normalized());
        Ok(MeasurementSetup::new(a, ap, b, bp))
    }
}

pub fn check_degrees(d: f64) -> Result<(), String> {
    if !d.is_finite() || d.abs() > MAX_DEGREES {
        return Err(format!(
            "angle {d} is outside [-{MAX_DEGREES}, {MAX_DEGREES}] degrees"
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct VariantArg {
    #[arg(long, value_enum, default_value_t = VariantChoice::Original)]
    pub variant: VariantChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Original,
    FlipBoth,
    FlipA,
    FlipB,
}

impl From<VariantChoice> for HardyVariant {
    fn from(v: VariantChoice) -> Self {
        match v {
            VariantChoice::Original => HardyVariant::Original,
            VariantChoice::FlipBoth => HardyVariant::FlipBoth,
            VariantChoice::FlipA => HardyVariant::FlipA,
            VariantChoice::FlipB => HardyVariant::FlipB,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}
