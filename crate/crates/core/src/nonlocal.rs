//! Local realism versus the Hardy conditions.
//!
//! A local hidden-variable model assigns each particle predetermined outcomes for
//! both of its observables. The extreme points of the set of such models are the
//! 16 deterministic strategies, so bounds on any linear functional (here
//! `P(a′, b′)` under the three zero constraints) are attained on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{HardyError, Result};
use crate::hardy::{HardyReport, HardyVariant, MeasurementSetup, SettingPair, TwoQubitState};
use crate::spinalg::Outcome;

/// Predetermined outcomes for `S(θ_a), S(θ_a′), S(θ_b), S(θ_b′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LhvStrategy {
    pub a: Outcome,
    pub a_prime: Outcome,
    pub b: Outcome,
    pub b_prime: Outcome,
}

impl LhvStrategy {
    /// All 16 assignments, in lexicographic order with `+1` first.
    pub fn all() -> Vec<LhvStrategy> {
        let mut out = Vec::with_capacity(16);
        for a in Outcome::BOTH {
            for a_prime in Outcome::BOTH {
                for b in Outcome::BOTH {
                    for b_prime in Outcome::BOTH {
                        out.push(LhvStrategy {
                            a,
                            a_prime,
                            b,
                            b_prime,
                        });
                    }
                }
            }
        }
        out
    }

    /// Outcomes this strategy produces when `pair` is measured.
    pub fn outcomes(&self, pair: SettingPair) -> (Outcome, Outcome) {
        match pair {
            SettingPair::AB => (self.a, self.b),
            SettingPair::ABPrime => (self.a, self.b_prime),
            SettingPair::APrimeB => (self.a_prime, self.b),
            SettingPair::APrimeBPrime => (self.a_prime, self.b_prime),
        }
    }

    /// Never produces an outcome pair that `variant` requires to have zero probability.
    pub fn is_consistent(&self, variant: HardyVariant) -> bool {
        [SettingPair::AB, SettingPair::ABPrime, SettingPair::APrimeB]
            .into_iter()
            .all(|pair| self.outcomes(pair) != variant.outcomes(pair))
    }

    /// Produces the outcome pair the fourth condition of `variant` asks for.
    pub fn shows_contradiction_event(&self, variant: HardyVariant) -> bool {
        let pair = SettingPair::APrimeBPrime;
        self.outcomes(pair) == variant.outcomes(pair)
    }

    /// Same strategy with the outcomes of the flipped particles reversed.
    pub fn relabeled(&self, variant: HardyVariant) -> LhvStrategy {
        let (fa, fb) = variant.flips();
        let f = |o: Outcome, flip: bool| if flip { o.flipped() } else { o };
        LhvStrategy {
            a: f(self.a, fa),
            a_prime: f(self.a_prime, fa),
            b: f(self.b, fb),
            b_prime: f(self.b_prime, fb),
        }
    }
}

/// Deterministic strategies that satisfy the three zero conditions of `variant`.
pub fn enumerate_consistent(variant: HardyVariant) -> Vec<LhvStrategy> {
    LhvStrategy::all()
        .into_iter()
        .filter(|s| s.is_consistent(variant))
        .collect()
}

/// Largest probability of the contradiction event over all local models obeying the
/// zero conditions. Mixtures are convex combinations of strategies, so the maximum
/// sits on a consistent strategy.
pub fn lhv_bound(variant: HardyVariant) -> f64 {
    enumerate_consistent(variant)
        .iter()
        .map(|s| {
            if s.shows_contradiction_event(variant) {
                1.0
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

/// One inference in the local-realism argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    /// Condition label, `"1a"` .. `"1d"`.
    pub condition: String,
    pub setting: SettingPair,
    pub outcomes: (Outcome, Outcome),
    /// Quantum probability of `outcomes` for `setting`.
    pub probability: f64,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainTrace {
    pub variant: HardyVariant,
    pub steps: Vec<ChainStep>,
    /// Fraction of pairs whose outcomes no local model can explain (`p1d`).
    pub contradiction_magnitude: f64,
}

/// Spells out the argument `1d → 1c → 1b → clash with 1a` for a report that holds.
pub fn logic_chain(report: &HardyReport) -> Result<ChainTrace> {
    if !report.holds {
        return Err(HardyError::NotAHardyState);
    }
    let v = report.variant;
    let (ad, bd) = v.outcomes(SettingPair::APrimeBPrime);
    let (_, bc) = v.outcomes(SettingPair::APrimeB);
    let (ab, _) = v.outcomes(SettingPair::ABPrime);
    let (aa, ba) = v.outcomes(SettingPair::AB);

    let step = |cond: &str, pair: SettingPair, p: f64, statement: String| ChainStep {
        condition: cond.to_string(),
        setting: pair,
        outcomes: v.outcomes(pair),
        probability: p,
        statement,
    };
    let steps = vec![
        step(
            "1d",
            SettingPair::APrimeBPrime,
            report.p1d,
            format!("S(θa′)={ad}, S(θb′)={bd} occurs with probability {:.6} > 0", report.p1d),
        ),
        step(
            "1c",
            SettingPair::APrimeB,
            report.p1c,
            format!(
                "S(θa′)={ad} never pairs with S(θb)={bc}, so on those runs S(θb) would have been {}",
                bc.flipped()
            ),
        ),
        step(
            "1b",
            SettingPair::ABPrime,
            report.p1b,
            format!(
                "S(θb′)={bd} never pairs with S(θa)={ab}, so on those runs S(θa) would have been {}",
                ab.flipped()
            ),
        ),
        step(
            "1a",
            SettingPair::AB,
            report.p1a,
            format!(
                "local realism then requires P(S(θa)={aa}, S(θb)={ba}) ≥ {:.6}, but quantum mechanics gives {:.3e}",
                report.p1d, report.p1a
            ),
        ),
    ];
    Ok(ChainTrace {
        variant: v,
        steps,
        contradiction_magnitude: report.p1d,
    })
}

/// Outcome counts of a simulated experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    /// `counts[setting][out_a][out_b]`, setting in [`SettingPair::ALL`] order.
    pub counts: [[[u64; 2]; 2]; 4],
    pub n_total: u64,
    pub seed: u64,
}

impl SampleStats {
    pub fn count(&self, pair: SettingPair, a: Outcome, b: Outcome) -> u64 {
        self.counts[pair.index()][a.index()][b.index()]
    }

    pub fn trials(&self, pair: SettingPair) -> u64 {
        self.counts[pair.index()].iter().flatten().sum()
    }

    /// Empirical frequency of `(a, b)` among trials of `pair`; `None` if never measured.
    pub fn frequency(&self, pair: SettingPair, a: Outcome, b: Outcome) -> Option<f64> {
        let n = self.trials(pair);
        (n > 0).then(|| self.count(pair, a, b) as f64 / n as f64)
    }

    fn merge(mut self, other: &SampleStats) -> SampleStats {
        for s in 0..4 {
            for i in 0..2 {
                for j in 0..2 {
                    self.counts[s][i][j] += other.counts[s][i][j];
                }
            }
        }
        self.n_total += other.n_total;
        self
    }
}

/// Trials per independently seeded chunk.
pub const CHUNK_TRIALS: u64 = 1 << 16;

/// Probabilities below this are round-off of a zero amplitude and are never drawn.
pub const SAMPLING_ZERO: f64 = 1e-14;

/// Cumulative outcome tables, one per setting pair, outcome order `++, +−, −+, −−`.
struct OutcomeTables {
    cumulative: [[f64; 4]; 4],
    last_nonzero: [usize; 4],
}

impl OutcomeTables {
    fn new(state: &TwoQubitState, setup: &MeasurementSetup) -> Self {
        let mut cumulative = [[0.0; 4]; 4];
        let mut last_nonzero = [0; 4];
        for pair in SettingPair::ALL {
            let (da, db) = setup.directions(pair);
            let p = state.outcome_distribution(da, db);
            let flat =
                [p[0][0], p[0][1], p[1][0], p[1][1]]
                    .map(|x| if x < SAMPLING_ZERO { 0.0 } else { x });
            let total: f64 = flat.iter().sum();
            let mut acc = 0.0;
            for (k, x) in flat.iter().enumerate() {
                acc += x / total;
                cumulative[pair.index()][k] = acc;
                if *x > 0.0 {
                    last_nonzero[pair.index()] = k;
                }
            }
        }
        OutcomeTables {
            cumulative,
            last_nonzero,
        }
    }

    fn draw(&self, setting: usize, u: f64) -> usize {
        let cum = &self.cumulative[setting];
        let last = self.last_nonzero[setting];
        (0..last).find(|&k| u < cum[k]).unwrap_or(last)
    }
}

/// RNG for chunk `index`: ChaCha8 seeded with `seed` via `seed_from_u64`, on stream `index`.
fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_chunk(tables: &OutcomeTables, seed: u64, index: u64, trials: u64) -> SampleStats {
    let mut rng = chunk_rng(seed, index);
    let mut counts = [[[0u64; 2]; 2]; 4];
    for _ in 0..trials {
        let setting = rng.random_range(0..4usize);
        let k = tables.draw(setting, rng.random::<f64>());
        counts[setting][k / 2][k % 2] += 1;
    }
    SampleStats {
        counts,
        n_total: trials,
        seed,
    }
}

fn chunk_sizes(n: u64) -> impl Iterator<Item = (u64, u64)> {
    let chunks = n.div_ceil(CHUNK_TRIALS);
    (0..chunks).map(move |i| (i, CHUNK_TRIALS.min(n - i * CHUNK_TRIALS)))
}

/// Simulates `n` runs: each picks one of the four setting pairs uniformly and draws
/// an outcome pair from the quantum distribution.
///
/// Trials are split into chunks of [`CHUNK_TRIALS`]; chunk `i` uses its own ChaCha8
/// stream `i` under `seed`, so the counts do not depend on how chunks are scheduled.
pub fn sample(
    state: &TwoQubitState,
    setup: &MeasurementSetup,
    n: u64,
    seed: u64,
) -> Result<SampleStats> {
    check_sample_size(n)?;
    let tables = OutcomeTables::new(state, setup);
    let parts: Vec<SampleStats> = chunk_sizes(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, len)| sample_chunk(&tables, seed, i, len))
        .collect();
    Ok(merge_all(parts, seed))
}

/// Single-threaded [`sample`]; produces identical counts.
pub fn sample_serial(
    state: &TwoQubitState,
    setup: &MeasurementSetup,
    n: u64,
    seed: u64,
) -> Result<SampleStats> {
    check_sample_size(n)?;
    let tables = OutcomeTables::new(state, setup);
    let parts = chunk_sizes(n).map(|(i, len)| sample_chunk(&tables, seed, i, len));
    Ok(merge_all(parts, seed))
}

fn check_sample_size(n: u64) -> Result<()> {
    if n == 0 {
        return Err(HardyError::InvalidArgument(
            "sample size must be at least 1".into(),
        ));
    }
    Ok(())
}

fn merge_all(parts: impl IntoIterator<Item = SampleStats>, seed: u64) -> SampleStats {
    let empty = SampleStats {
        counts: [[[0; 2]; 2]; 4],
        n_total: 0,
        seed,
    };
    parts.into_iter().fold(empty, |acc, p| acc.merge(&p))
}

/// Below this many trials in some setting the empirical report is flagged.
pub const LOW_CONFIDENCE_TRIALS: u64 = 100;

/// Empirical Hardy report with its sampling context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub report: HardyReport,
    /// Fewest trials recorded for any setting pair.
    pub min_trials: u64,
    pub low_confidence: bool,
}

/// Default zero threshold: five worst-case binomial standard deviations,
/// `5·√(¼/n) = 2.5/√n`, for the least-sampled setting.
pub fn statistical_zero_tol(min_trials: u64) -> f64 {
    2.5 / (min_trials as f64).sqrt()
}

/// Hardy report from sampled frequencies. `zero_tol = None` uses [`statistical_zero_tol`].
pub fn estimate_report(
    stats: &SampleStats,
    variant: HardyVariant,
    zero_tol: Option<f64>,
) -> Result<EmpiricalReport> {
    if let Some(pair) = SettingPair::ALL.into_iter().find(|p| stats.trials(*p) == 0) {
        return Err(HardyError::InsufficientSamples {
            setting: pair.label().to_string(),
        });
    }
    let min_trials = SettingPair::ALL
        .map(|p| stats.trials(p))
        .into_iter()
        .min()
        .unwrap_or(0);
    let p = SettingPair::ALL.map(|pair| {
        let (a, b) = variant.outcomes(pair);
        stats.frequency(pair, a, b).unwrap_or(0.0)
    });
    let tol = zero_tol.unwrap_or_else(|| statistical_zero_tol(min_trials));
    Ok(EmpiricalReport {
        report: HardyReport::from_probabilities(variant, p, tol),
        min_trials,
        low_confidence: min_trials < LOW_CONFIDENCE_TRIALS,
    })
}

/// Pearson χ² goodness of fit of sampled outcomes against the quantum distribution,
/// conditioned on the number of trials per setting pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    /// Draws of outcomes whose quantum probability is zero.
    pub impossible_events: u64,
}

impl ChiSquareTest {
    pub fn passes(&self, significance: f64) -> bool {
        self.impossible_events == 0 && self.p_value > significance
    }
}

pub fn chi_square(
    stats: &SampleStats,
    state: &TwoQubitState,
    setup: &MeasurementSetup,
) -> ChiSquareTest {
    let mut statistic = 0.0;
    let mut dof = 0u64;
    let mut impossible_events = 0;
    for pair in SettingPair::ALL {
        let n = stats.trials(pair);
        if n == 0 {
            continue;
        }
        let (da, db) = setup.directions(pair);
        let mut categories = 0;
        for a in Outcome::BOTH {
            for b in Outcome::BOTH {
                let p = state.joint_probability(da, a, db, b);
                let observed = stats.count(pair, a, b);
                if p < SAMPLING_ZERO {
                    impossible_events += observed;
                    continue;
                }
                let expected = p * n as f64;
                statistic += (observed as f64 - expected).powi(2) / expected;
                categories += 1;
            }
        }
        dof += categories.max(1) - 1;
    }
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    };
    ChiSquareTest {
        statistic,
        dof,
        p_value,
        impossible_events,
    }
}
