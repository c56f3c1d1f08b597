use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::TrialConfig;
use super::trial::Experiment;
use crate::error::{invalid, Error, Result};
use crate::metric_cover::EstimateWithCI;

/// How a sample size compares with the failure target `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Interval upper bound `≤ δ`.
    Success,
    /// Interval lower bound `> δ`.
    Failure,
    /// The interval contains `δ`.
    Unresolved,
}

impl Verdict {
    fn of(est: &EstimateWithCI, delta: f64) -> Self {
        if est.upper() <= delta {
            Verdict::Success
        } else if est.lower() > delta {
            Verdict::Failure
        } else {
            Verdict::Unresolved
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchPoint {
    pub m: usize,
    pub estimate: EstimateWithCI,
    pub verdict: Verdict,
}

/// Empirical sample complexity: the smallest searched `m` declared a
/// success, and the largest smaller `m` declared a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleComplexityResult {
    pub m_star: usize,
    /// `(m_low, m_star)`; `m_low` is a declared failure or `0`.
    pub bracket: (usize, usize),
    /// Sample sizes strictly inside the bracket whose interval contains `δ`.
    pub unresolved: Vec<usize>,
    /// Every evaluated sample size, ascending.
    pub estimates: Vec<SearchPoint>,
}

impl SampleComplexityResult {
    /// Both ends of the bracket are declared: `m_star` a success and
    /// `m_low` a failure (or `m_star = 0`). Sizes strictly between them may
    /// still be unresolved.
    pub fn is_resolved(&self) -> bool {
        self.m_star == 0 || self.verdict(self.bracket.0) == Some(Verdict::Failure)
    }

    pub fn estimate(&self, m: usize) -> Option<&EstimateWithCI> {
        self.estimates.iter().find(|p| p.m == m).map(|p| &p.estimate)
    }

    fn verdict(&self, m: usize) -> Option<Verdict> {
        self.estimates.iter().find(|p| p.m == m).map(|p| p.verdict)
    }
}

/// Doubling from `m = 1` until a success, then binary search for the
/// smallest success, then a downward scan to the nearest declared failure.
/// The configured `m` is ignored.
pub fn sample_complexity_search(cfg: &TrialConfig, delta: f64, m_max: usize) -> Result<SampleComplexityResult> {
    if m_max == 0 {
        return Err(invalid("m_max", "need m_max >= 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} is not in (0, 1)")));
    }
    let exp = Experiment::new(cfg.clone())?;
    let mut seen: BTreeMap<usize, SearchPoint> = BTreeMap::new();
    let mut eval = |m: usize| -> Result<Verdict> {
        if let Some(p) = seen.get(&m) {
            return Ok(p.verdict);
        }
        let estimate = exp.failure_estimate_at(m)?;
        let verdict = Verdict::of(&estimate, delta);
        seen.insert(m, SearchPoint { m, estimate, verdict });
        Ok(verdict)
    };

    let m_star = if eval(0)? == Verdict::Success {
        0
    } else {
        let (mut lo, mut hi) = (0, 1);
        while eval(hi)? != Verdict::Success {
            if hi >= m_max {
                return Err(Error::SearchExhausted { m_max });
            }
            lo = hi;
            hi = (hi * 2).min(m_max);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if eval(mid)? == Verdict::Success {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let mut m_low = m_star.saturating_sub(1);
    let mut unresolved = Vec::new();
    while m_low > 0 && eval(m_low)? != Verdict::Failure {
        unresolved.push(m_low);
        m_low -= 1;
    }
    if m_star > 0 && m_low == 0 && eval(0)? != Verdict::Failure {
        unresolved.push(0);
    }
    unresolved.sort_unstable();
    Ok(SampleComplexityResult { m_star, bracket: (m_low, m_star), unresolved, estimates: seen.into_values().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::ClassSpec;
    use crate::distributions::{DistSpec, ProbValue};
    use crate::learners::LearnerKind;
    use crate::mc_harness::TargetSpec;

    fn projections(n: usize, learner: LearnerKind, trials: u64) -> TrialConfig {
        TrialConfig {
            class: ClassSpec::Projections { n },
            dist: DistSpec::Pne { n, eps: 0.1, i: 1 },
            target: TargetSpec::Random,
            learner,
            m: 0,
            eps_acc: 1.0 / 16.0,
            trials,
            gamma: 0.01,
            seed: 5,
            stream: 0,
            cover: None,
        }
    }

    /// Success needs the Hoeffding radius below `δ`, so the trial count
    /// is chosen to make that possible for every `δ` tested.
    #[test]
    fn point_mass_needs_at_most_one_example() {
        let cfg = TrialConfig {
            class: ClassSpec::Projections { n: 4 },
            dist: DistSpec::Finite { support: vec!["0110".parse().unwrap()], probs: vec![ProbValue::Float(1.0)] },
            ..projections(4, LearnerKind::Erm, 4000)
        };
        for delta in [0.05, 0.2, 0.5] {
            assert!(sample_complexity_search(&cfg, delta, 64).unwrap().m_star <= 1);
        }
    }

    #[test]
    fn bracket_invariants() {
        let delta = 1.0 / 16.0;
        for learner in [LearnerKind::Erm, LearnerKind::Cover] {
            let r = sample_complexity_search(&projections(64, learner, 1500), delta, 256).unwrap();
            let star = r.estimate(r.m_star).unwrap();
            assert!(star.upper() <= delta);
            let (low, high) = r.bracket;
            assert_eq!(high, r.m_star);
            assert!(low == 0 || r.estimate(low).unwrap().lower() > delta);
            assert!(r.unresolved.iter().all(|&m| m >= low && m < high));
            assert!(r.estimates.windows(2).all(|w| w[0].m < w[1].m));
        }
    }

    #[test]
    fn exhausted_budget() {
        let cfg = projections(1 << 12, LearnerKind::Erm, 300);
        assert_eq!(sample_complexity_search(&cfg, 0.01, 3), Err(Error::SearchExhausted { m_max: 3 }));
        assert!(sample_complexity_search(&cfg, 0.01, 0).is_err());
    }
}
