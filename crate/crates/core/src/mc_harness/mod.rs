//! Monte Carlo experiments: failure probabilities, sample-complexity
//! search, the lower-bound construction, `K`/`S` statistics and the
//! missing-mass experiment.
//!
//! Every random quantity is keyed by `(seed, stream, trial)`, so results do
//! not depend on evaluation order or thread count.

mod columns;
mod config;
mod experiments;
mod search;
mod trial;

pub use config::{CoverChoice, TargetSpec, TrialConfig, DEFAULT_GAMMA};
pub use experiments::{
    in_lower_bound_regime, ks_statistics_experiment, ks_statistics_experiment_with, lower_bound_experiment,
    lower_bound_experiment_with, lower_bound_m, no_gap_experiment, tail_inequality_check, KsSummary, LowerBoundResult,
    NoGapRow, Quantiles, LOWER_BOUND_EPS_ACC, MAX_NO_GAP_DOMAIN, SK_BINS,
};
pub use search::{sample_complexity_search, SampleComplexityResult, SearchPoint, Verdict};
pub use trial::{estimate_failure_prob, run_trial, Experiment, TrialOutcome};
