//! Statistical estimators for the experiment harness.
//!
//! Every estimate here is built from integer trial counts, so parallel runs
//! can merge per-worker tallies in any order and still serialize the exact
//! same bytes. Variances are floored (`max(p(1-p), 0.25/(k+1))/k`) so that a
//! run which happens to see zero successes still reports an honest,
//! non-zero error bar.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Which trials contribute to a distinguishing estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    /// All trials count; a missing guess scores as a losing coin flip.
    None,
    /// Only trials whose deletion certificate was accepted count.
    CertAccepted,
}

impl Conditioning {
    /// Stable lowercase name used in result files.
    pub fn name(self) -> &'static str {
        match self {
            Conditioning::None => "none",
            Conditioning::CertAccepted => "cert-accepted",
        }
    }
}

/// Per-arm tallies for a two-arm distinguishing game: how many conditioned
/// trials ran with challenge bit `b`, and how many of those guessed `1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmCounts {
    /// Conditioned trials with challenge bit 0.
    pub zero_trials: u64,
    /// Of those, trials whose guess was 1.
    pub zero_ones: u64,
    /// Conditioned trials with challenge bit 1.
    pub one_trials: u64,
    /// Of those, trials whose guess was 1.
    pub one_ones: u64,
}

impl ArmCounts {
    /// Tally one conditioned trial.
    pub fn record(&mut self, challenge: bool, guessed_one: bool) {
        if challenge {
            self.one_trials += 1;
            self.one_ones += u64::from(guessed_one);
        } else {
            self.zero_trials += 1;
            self.zero_ones += u64::from(guessed_one);
        }
    }

    /// Field-wise sum; order-independent, so parallel workers can reduce.
    pub fn merge(self, other: Self) -> Self {
        ArmCounts {
            zero_trials: self.zero_trials + other.zero_trials,
            zero_ones: self.zero_ones + other.zero_ones,
            one_trials: self.one_trials + other.one_trials,
            one_ones: self.one_ones + other.one_ones,
        }
    }

    /// Total conditioned trials across both arms.
    pub fn conditioned(&self) -> u64 {
        self.zero_trials + self.one_trials
    }
}

/// Floored variance of a binomial proportion estimated from `ones` successes
/// in `k` trials. Returns 0.25 (sigma = 0.5) when no trials contributed.
fn arm_sigma_sq(ones: u64, k: u64) -> f64 {
    if k == 0 {
        return 0.25;
    }
    let kf = k as f64;
    let p = ones as f64 / kf;
    (p * (1.0 - p)).max(0.25 / (kf + 1.0)) / kf
}

/// Distinguishing-advantage estimate for a two-arm game.
///
/// `advantage` is the absolute gap `|P[out=1 | b=1] - P[out=1 | b=0]|` over
/// the conditioned trials; a null strategy sits near 0 up to binomial noise,
/// a perfect distinguisher at 1.
#[derive(Clone, Debug, Serialize)]
pub struct AdvantageEstimate {
    /// Total trials run, before conditioning.
    pub trials: u64,
    /// Conditioned per-arm tallies the estimate was computed from.
    pub counts: ArmCounts,
    /// Absolute advantage `|p1 - p0|`, always in `[0, 1]`.
    pub advantage: f64,
    /// 95% half-width `1.96 * sigma` of the advantage.
    pub ci95: f64,
    /// Which trials were counted.
    pub conditioning: Conditioning,
    /// Fraction of trials surviving the conditioning, when it filters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accept_rate: Option<f64>,
}

impl AdvantageEstimate {
    /// Build the estimate from raw tallies. An arm with no conditioned
    /// trials contributes the prior `p = 0.5` with sigma 0.5.
    pub fn from_counts(trials: u64, counts: ArmCounts, conditioning: Conditioning) -> Self {
        let p = |ones: u64, k: u64| if k == 0 { 0.5 } else { ones as f64 / k as f64 };
        let advantage = (p(counts.one_ones, counts.one_trials)
            - p(counts.zero_ones, counts.zero_trials))
        .abs();
        let sigma = Self::sigma_of(counts);
        let accept_rate = match conditioning {
            Conditioning::None => None,
            Conditioning::CertAccepted if trials == 0 => None,
            Conditioning::CertAccepted => Some(counts.conditioned() as f64 / trials as f64),
        };
        AdvantageEstimate {
            trials,
            counts,
            advantage,
            ci95: 1.96 * sigma,
            conditioning,
            accept_rate,
        }
    }

    fn sigma_of(counts: ArmCounts) -> f64 {
        (arm_sigma_sq(counts.zero_ones, counts.zero_trials)
            + arm_sigma_sq(counts.one_ones, counts.one_trials))
        .sqrt()
    }

    /// Standard error of the advantage (never zero thanks to the floor).
    pub fn sigma(&self) -> f64 {
        Self::sigma_of(self.counts)
    }

    /// The three-sigma band a null strategy should land inside.
    pub fn three_sigma(&self) -> f64 {
        3.0 * self.sigma()
    }

    /// Whether the estimate is consistent with zero advantage at three sigma.
    pub fn is_null_at_three_sigma(&self) -> bool {
        self.advantage <= self.three_sigma()
    }
}

/// Success-rate estimate for a single-outcome game.
#[derive(Clone, Debug, Serialize)]
pub struct RateEstimate {
    /// Total trials run.
    pub trials: u64,
    /// Trials that met the success predicate.
    pub successes: u64,
    /// Point estimate `successes / trials`.
    pub rate: f64,
    /// 95% half-width `1.96 * sigma` of the rate.
    pub ci95: f64,
}

impl RateEstimate {
    /// Build the estimate from raw tallies.
    pub fn from_counts(trials: u64, successes: u64) -> Self {
        debug_assert!(successes <= trials);
        let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        RateEstimate {
            trials,
            successes,
            rate,
            ci95: 1.96 * arm_sigma_sq(successes, trials).sqrt(),
        }
    }
}

/// Histogram of observation labels, used by the total-variation estimators.
pub fn counts_from_keys<I, S>(keys: I) -> BTreeMap<String, u64>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counts = BTreeMap::new();
    for key in keys {
        *counts.entry(key.as_ref().to_owned()).or_insert(0) += 1;
    }
    counts
}

/// Plug-in total-variation distance between two empirical distributions,
/// `(1/2) * sum_k |p_k - q_k|` over the union of observed labels.
pub fn tv_distance(p: &BTreeMap<String, u64>, q: &BTreeMap<String, u64>) -> f64 {
    let np: u64 = p.values().sum();
    let nq: u64 = q.values().sum();
    match (np, nq) {
        (0, 0) => return 0.0,
        (0, _) | (_, 0) => return 1.0,
        _ => {}
    }
    let mut total = 0.0;
    let keys: std::collections::BTreeSet<&String> = p.keys().chain(q.keys()).collect();
    for key in keys {
        let pk = *p.get(key).unwrap_or(&0) as f64 / np as f64;
        let qk = *q.get(key).unwrap_or(&0) as f64 / nq as f64;
        total += (pk - qk).abs();
    }
    total / 2.0
}

/// Noise-corrected total-variation estimate between a reference sample and a
/// comparison sample of observation labels.
///
/// The plug-in estimator is biased upward by sampling noise (two samples from
/// the *same* distribution measure strictly positive). The correction splits
/// the reference sample into its even- and odd-indexed halves, measures their
/// plug-in distance, rescales by `1/sqrt(2)` (half-size samples carry
/// `sqrt(2)` more noise), and subtracts that floor, clamping at zero.
pub fn tv_distance_corrected(reference: &[String], comparison: &[String]) -> f64 {
    let p = counts_from_keys(reference);
    let q = counts_from_keys(comparison);
    let raw = tv_distance(&p, &q);
    let even = counts_from_keys(reference.iter().step_by(2));
    let odd = counts_from_keys(reference.iter().skip(1).step_by(2));
    let floor = tv_distance(&even, &odd) / std::f64::consts::SQRT_2;
    (raw - floor).max(0.0)
}

/// Pearson chi-squared statistic of `counts` against the uniform distribution
/// over its categories. Degrees of freedom are `counts.len() - 1`.
pub fn chi2_uniform_statistic(counts: &[u64]) -> f64 {
    assert!(!counts.is_empty(), "chi-squared needs at least one category");
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    if expected == 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// 99.9th-percentile critical value of chi-squared with 2 degrees of freedom
/// (`-2 ln 0.001`); a uniformity test over 3 categories fails above this.
pub const CHI2_999_DOF2: f64 = 13.815510557964274;

/// 99.9th-percentile critical value of chi-squared with 15 degrees of
/// freedom; a uniformity test over 16 categories fails above this.
pub const CHI2_999_DOF15: f64 = 37.697298;
