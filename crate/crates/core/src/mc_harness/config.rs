use serde::{Deserialize, Serialize};

use crate::concepts::ClassSpec;
use crate::distributions::DistSpec;
use crate::error::{invalid, Result};
use crate::learners::LearnerKind;

/// Default confidence parameter of the Hoeffding intervals.
pub const DEFAULT_GAMMA: f64 = 0.01;

/// How the target concept is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetSpec {
    /// A fixed concept, by 1-based number.
    Fixed(usize),
    /// A uniform concept per trial. Under a `P_{n,ε}` distribution the
    /// distribution follows the index: target `c_I` under `P_I`.
    Random,
}

/// Cover handed to the cover learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoverChoice {
    /// The two-element cover `{c_i, c_j}` of `P_i`.
    Pair,
    /// Greedy packing cover at the given level.
    Greedy { level: f64 },
}

/// One Monte Carlo experiment: `trials` independent runs of a learner on
/// `m` labeled examples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub class: ClassSpec,
    pub dist: DistSpec,
    pub target: TargetSpec,
    pub learner: LearnerKind,
    pub m: usize,
    /// Accuracy threshold: a trial fails when the error exceeds it.
    pub eps_acc: f64,
    pub trials: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub seed: u64,
    /// Sub-stream of the master seed; runs sharing it share randomness.
    #[serde(default)]
    pub stream: u64,
    /// Defaults to the two-element cover under `P_{n,ε}`, otherwise greedy
    /// at `eps_acc / 2`.
    #[serde(default)]
    pub cover: Option<CoverChoice>,
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_acc > 0.0 && self.eps_acc.is_finite()) {
            return Err(invalid("eps_acc", format!("{} must be positive", self.eps_acc)));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "need at least one trial"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(invalid("gamma", format!("{} is not in (0, 1)", self.gamma)));
        }
        if let Some(CoverChoice::Greedy { level }) = self.cover {
            if level.is_nan() || level < 0.0 {
                return Err(invalid("cover.level", format!("{level} must be nonnegative")));
            }
        }
        Ok(())
    }
}
