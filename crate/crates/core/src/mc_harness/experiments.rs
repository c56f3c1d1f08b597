use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::columns::LazyColumns;
use super::config::{TargetSpec, TrialConfig, DEFAULT_GAMMA};
use super::trial::{Experiment, TrialOutcome, SAMPLE_STREAM, TARGET_STREAM, TEST_STREAM};
use crate::concepts::{ClassSpec, ConceptClass, TableClass};
use crate::distributions::rng::{stream_u64, uniform_below};
use crate::distributions::{sample_points, DistSpec, FiniteSupportDistribution, ProductDistribution, RngSeed};
use crate::error::{invalid, Error, Result};
use crate::learners::{consistent_memorizer, set_bits, LabeledSample, LearnerKind};
use crate::metric_cover::EstimateWithCI;
use crate::scalar::{sum, Scalar};

/// Largest support handled by [`no_gap_experiment`].
pub const MAX_NO_GAP_DOMAIN: usize = 12;

/// Accuracy threshold of the lower-bound construction.
pub const LOWER_BOUND_EPS_ACC: f64 = 1.0 / 16.0;

/// `⌊ln n / (3 ln(1/ε))⌋`.
pub fn lower_bound_m(n: usize, eps: f64) -> usize {
    ((n as f64).ln() / (3.0 * (1.0 / eps).ln())).floor() as usize
}

/// The construction's guarantee needs `n ≥ 600/ε³`.
pub fn in_lower_bound_regime(n: usize, eps: f64) -> bool {
    n as f64 >= 600.0 / eps.powi(3)
}

fn check_lower_bound_params(n: usize, eps: f64) -> Result<()> {
    if n < 2 {
        return Err(invalid("n", "need n >= 2"));
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(invalid("eps", format!("{eps} is not in (0, 1/4)")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundResult {
    pub n: usize,
    pub eps: f64,
    pub learner: LearnerKind,
    /// Sample budget `⌊ln n / (3 ln(1/ε))⌋`.
    pub m: usize,
    /// `Pr[d_{P_I}(output, c_I) > 1/16]`.
    pub failure: EstimateWithCI,
    /// Interval lower bound above `1/16`.
    pub above_one_sixteenth: bool,
    /// `n < 600/ε³`: outside the regime of the guarantee.
    pub outside_regime: bool,
    pub mean_error: f64,
}

/// Random `I`, target `c_I` under `P_I`, `⌊ln n / (3 ln(1/ε))⌋` examples.
pub fn lower_bound_experiment(n: usize, eps: f64, learner: LearnerKind, trials: u64, seed: u64) -> Result<LowerBoundResult> {
    lower_bound_experiment_with(n, eps, learner, trials, seed, DEFAULT_GAMMA)
}

pub fn lower_bound_experiment_with(
    n: usize,
    eps: f64,
    learner: LearnerKind,
    trials: u64,
    seed: u64,
    gamma: f64,
) -> Result<LowerBoundResult> {
    check_lower_bound_params(n, eps)?;
    let m = lower_bound_m(n, eps);
    let cfg = TrialConfig {
        class: ClassSpec::Projections { n },
        dist: DistSpec::Pne { n, eps, i: 1 },
        target: TargetSpec::Random,
        learner,
        m,
        eps_acc: LOWER_BOUND_EPS_ACC,
        trials,
        gamma,
        seed,
        stream: 0,
        cover: None,
    };
    let outcomes = Experiment::new(cfg)?.run_trials_at(m)?;
    let failures = outcomes.iter().filter(|o| o.failed).count() as u64;
    let failure = EstimateWithCI::from_counts(failures, trials, gamma);
    Ok(LowerBoundResult {
        n,
        eps,
        learner,
        m,
        above_one_sixteenth: failure.lower() > LOWER_BOUND_EPS_ACC,
        outside_regime: !in_lower_bound_regime(n, eps),
        mean_error: mean_error(&outcomes),
        failure,
    })
}

fn mean_error(outcomes: &[TrialOutcome]) -> f64 {
    outcomes.iter().map(|o| o.error).sum::<f64>() / outcomes.len().max(1) as f64
}

/// Five-number summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Nearest-rank quantiles of a nonempty slice.
    pub fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |q: f64| v[((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1];
        Self { min: v[0], q25: at(0.25), median: at(0.5), q75: at(0.75), max: v[v.len() - 1] }
    }
}

/// Number of equal-width `S/K` histogram bins on `[0, 1]`.
pub const SK_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsSummary {
    pub n: usize,
    pub eps: f64,
    pub m: usize,
    pub trials: u64,
    /// `Pr[ε/2 ≤ S/K ≤ 6ε/5]`.
    pub ratio_condition: EstimateWithCI,
    /// `Pr[K ≥ n^{2/3}/2]`.
    pub k_large: EstimateWithCI,
    pub k_quantiles: Quantiles,
    pub mean_k: f64,
    /// Counts of `S/K` in `[b/20, (b+1)/20)`, the last bin closed.
    pub sk_histogram: Vec<u64>,
    pub outside_regime: bool,
}

/// Simulates `(I, X, Y, Z)` and records `K = |k(X, Y)|` and
/// `S = |{i ∈ k : Z[i] = 1}|`.
pub fn ks_statistics_experiment(n: usize, eps: f64, m: usize, trials: u64, seed: u64) -> Result<KsSummary> {
    ks_statistics_experiment_with(n, eps, m, trials, seed, DEFAULT_GAMMA)
}

pub fn ks_statistics_experiment_with(n: usize, eps: f64, m: usize, trials: u64, seed: u64, gamma: f64) -> Result<KsSummary> {
    check_lower_bound_params(n, eps)?;
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let base = RngSeed::new(seed, 0);
    let pairs: Vec<(usize, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let i = uniform_below(base.child(t, TARGET_STREAM).trial(0), n as u64) as usize;
            let dist = ProductDistribution::pne(n, eps, i + 1)?;
            let cols = LazyColumns::new(&dist, i, m, base.child(t, SAMPLE_STREAM));
            let z_key = base.child(t, TEST_STREAM).trial(0);
            let th = dist.thresholds();
            let (mut k, mut s) = (0, 0);
            for j in set_bits(&cols.alive_mask()) {
                k += 1;
                s += usize::from(th.bit(j, stream_u64(z_key, j as u64)));
            }
            Ok((k, s))
        })
        .collect::<Result<_>>()?;

    let k_cut = (n as f64).powf(2.0 / 3.0) / 2.0;
    let mut ratio_hits = 0u64;
    let mut k_hits = 0u64;
    let mut hist = vec![0u64; SK_BINS];
    for &(k, s) in &pairs {
        let r = s as f64 / k as f64;
        ratio_hits += u64::from(eps / 2.0 <= r && r <= 1.2 * eps);
        k_hits += u64::from(k as f64 >= k_cut);
        hist[((r * SK_BINS as f64) as usize).min(SK_BINS - 1)] += 1;
    }
    let ks: Vec<f64> = pairs.iter().map(|&(k, _)| k as f64).collect();
    Ok(KsSummary {
        n,
        eps,
        m,
        trials,
        ratio_condition: EstimateWithCI::from_counts(ratio_hits, trials, gamma),
        k_large: EstimateWithCI::from_counts(k_hits, trials, gamma),
        k_quantiles: Quantiles::of(&ks),
        mean_k: ks.iter().sum::<f64>() / ks.len() as f64,
        sk_histogram: hist,
        outside_regime: !in_lower_bound_regime(n, eps),
    })
}

/// One sample size of the missing-mass experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoGapRow {
    pub m: usize,
    pub trials: u64,
    /// Trials with `d_P(memorizer, target) > Z`, checked exactly.
    pub violations: u64,
    /// `Pr[Z ≥ 2 eps_acc]`.
    pub z_tail: EstimateWithCI,
    /// `Pr[d_P > 2 eps_acc]`.
    pub failure: EstimateWithCI,
    pub mean_z: f64,
    pub mean_error: f64,
    /// `Pr[error > t] >= (E[error] - t) / (1 - t)` holds on this row's errors at
    /// `t = 2 eps_acc`.
    pub tail_check: bool,
}

/// Consistent memorizer against uniformly random all-functions targets on
/// the support of `dist`; `d_P` and the missing mass `Z` computed exactly in
/// `T`.
pub fn no_gap_experiment<T: Scalar>(
    dist: &FiniteSupportDistribution<T>,
    m_grid: &[usize],
    trials: u64,
    eps_acc: f64,
    seed: u64,
) -> Result<Vec<NoGapRow>> {
    let d = dist.support().len();
    if d > MAX_NO_GAP_DOMAIN {
        return Err(Error::DomainTooLarge { size: d, limit: MAX_NO_GAP_DOMAIN });
    }
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if !(eps_acc > 0.0 && eps_acc < 0.5) {
        return Err(invalid("eps_acc", format!("{eps_acc} is not in (0, 1/2)")));
    }
    let class = ConceptClass::Table(TableClass::all_functions(dist.support().to_vec())?);
    let t2 = T::from_f64(2.0 * eps_acc).ok_or_else(|| invalid("eps_acc", "not representable"))?;
    m_grid
        .iter()
        .enumerate()
        .map(|(g, &m)| {
            let base = RngSeed::new(seed, g as u64);
            let per_trial: Vec<(T, T)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let target = class.concept(uniform_below(base.child(t, TARGET_STREAM).trial(0), class.len() as u64) as usize);
                    let points = sample_points(dist, m, base.child(t, SAMPLE_STREAM));
                    let sample = LabeledSample::labeled_by(&class, target, points)?;
                    let predictor = consistent_memorizer(&sample, false)?;
                    let error = predictor.disagreement(&class, target, dist)?;
                    Ok((error, dist.missing_mass(sample.points())))
                })
                .collect::<Result<_>>()?;
            let violations = per_trial.iter().filter(|(e, z)| e > z).count() as u64;
            let z_hits = per_trial.iter().filter(|(_, z)| *z >= t2).count() as u64;
            let fails = per_trial.iter().filter(|(e, _)| *e > t2).count() as u64;
            let errors: Vec<T> = per_trial.iter().map(|(e, _)| e.clone()).collect();
            let mean = |f: fn(&(T, T)) -> f64| per_trial.iter().map(f).sum::<f64>() / trials as f64;
            Ok(NoGapRow {
                m,
                trials,
                violations,
                z_tail: EstimateWithCI::from_counts(z_hits, trials, DEFAULT_GAMMA),
                failure: EstimateWithCI::from_counts(fails, trials, DEFAULT_GAMMA),
                mean_z: mean(|(_, z)| z.to_f64_lossy()),
                mean_error: mean(|(e, _)| e.to_f64_lossy()),
                tail_check: tail_inequality_check(&errors, &t2)?,
            })
        })
        .collect()
}

/// Checks `Pr[Z > t] ≥ (E[Z] - t)/(1 - t)` on the empirical distribution of
/// `values`, which must all be at most 1.
pub fn tail_inequality_check<T: Scalar>(values: &[T], t: &T) -> Result<bool> {
    if values.is_empty() {
        return Err(invalid("values", "no values"));
    }
    if !(*t >= T::zero() && *t < T::one()) {
        return Err(invalid("t", format!("{t:?} is not in [0, 1)")));
    }
    if let Some(v) = values.iter().find(|v| **v > T::one()) {
        return Err(Error::ValueAboveOne(v.to_f64_lossy()));
    }
    let count = T::from_usize(values.len()).expect("length fits");
    let above = T::from_usize(values.iter().filter(|v| *v > t).count()).expect("length fits");
    let mean = sum(values.iter().cloned()) / count.clone();
    let bound = (mean - t.clone()) / (T::one() - t.clone());
    Ok(above / count >= bound - T::rounding_slack())
}
