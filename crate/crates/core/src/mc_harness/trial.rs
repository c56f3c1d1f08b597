use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use super::columns::LazyColumns;
use super::config::{CoverChoice, TargetSpec, TrialConfig};
use crate::concepts::{ConceptClass, ConceptId, Point};
use crate::distributions::rng::uniform_below;
use crate::distributions::{sample_points, AnyDistribution, ProductDistribution, RngSeed};
use crate::error::{invalid, Error, Result};
use crate::learners::{
    consistent_memorizer, cover_learner, decision_threshold, erm, set_bits, LabeledSample, LearnerKind, PosteriorState,
    Predictor,
};
use crate::metric_cover::{
    greedy_packing_cover, projection_distance, small_cover, CoverResult, EstimateWithCI, ProjectionMetric, TableMetric,
};

/// Sub-streams of a trial's key.
pub(crate) const TARGET_STREAM: u64 = 1;
pub(crate) const SAMPLE_STREAM: u64 = 2;
pub(crate) const TEST_STREAM: u64 = 3;

/// Largest cube the reference path enumerates for the posterior rule.
const MAX_ENUM_DIMENSION: usize = 16;

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// `d_P(output, target)` from an exact oracle.
    pub error: f64,
    /// `error > eps_acc`.
    pub failed: bool,
}

/// A validated [`TrialConfig`] with its class, distribution and (when the
/// distribution is fixed) cover built once.
#[derive(Debug, Clone)]
pub struct Experiment {
    cfg: TrialConfig,
    class: ConceptClass,
    dist: AnyDistribution<f64>,
    fixed_cover: Option<CoverResult<f64>>,
}

/// Target and distribution of one trial.
struct Draw<'a> {
    target: ConceptId,
    dist: std::borrow::Cow<'a, AnyDistribution<f64>>,
}

impl Experiment {
    pub fn new(cfg: TrialConfig) -> Result<Self> {
        cfg.validate()?;
        let class = cfg.class.build()?;
        let dist = cfg.dist.build::<f64>()?;
        let n = dist.dimension();
        match (&class, &dist) {
            (ConceptClass::Projections(c), _) if c.dimension() != n => {
                return Err(Error::DimensionMismatch { expected: c.dimension(), found: n });
            }
            (ConceptClass::Table(_), AnyDistribution::Product(_)) => {
                return Err(Error::OracleUnavailable("table class under a product distribution".into()));
            }
            (ConceptClass::Table(t), AnyDistribution::Finite(f)) => {
                for x in f.support() {
                    t.domain_index(x)?;
                }
            }
            _ => {}
        }
        if let TargetSpec::Fixed(k) = cfg.target {
            if k == 0 || k > class.len() {
                return Err(Error::ConceptOutOfRange { index: k, size: class.len() });
            }
        }
        if class.is_empty() {
            return Err(Error::EmptyClass);
        }
        match cfg.learner {
            LearnerKind::BayesPosterior if !matches!((&class, pne(&dist)), (ConceptClass::Projections(_), Some(_))) => {
                return Err(invalid("learner", "bayes-posterior needs the projection class under a P_{n,eps} distribution"));
            }
            LearnerKind::Memorizer if !matches!(dist, AnyDistribution::Finite(_)) => {
                return Err(Error::OracleUnavailable("memorizer error needs a finite-support distribution".into()));
            }
            _ => {}
        }
        let mut exp = Self { cfg, class, dist, fixed_cover: None };
        if exp.cfg.learner == LearnerKind::Cover && !exp.distribution_varies() {
            exp.fixed_cover = Some(exp.build_cover(&exp.dist)?);
        }
        Ok(exp)
    }

    pub fn config(&self) -> &TrialConfig {
        &self.cfg
    }

    pub fn class(&self) -> &ConceptClass {
        &self.class
    }

    pub fn distribution(&self) -> &AnyDistribution<f64> {
        &self.dist
    }

    /// Random targets under `P_{n,ε}` move the distribution with the index.
    fn distribution_varies(&self) -> bool {
        self.cfg.target == TargetSpec::Random && pne(&self.dist).is_some() && matches!(self.class, ConceptClass::Projections(_))
    }

    fn build_cover(&self, dist: &AnyDistribution<f64>) -> Result<CoverResult<f64>> {
        let choice = self.cfg.cover.unwrap_or(if pne(dist).is_some() {
            CoverChoice::Pair
        } else {
            CoverChoice::Greedy { level: self.cfg.eps_acc / 2.0 }
        });
        match (choice, &self.class, dist) {
            (CoverChoice::Pair, ConceptClass::Projections(_), AnyDistribution::Product(p)) => small_cover(p),
            (CoverChoice::Pair, _, _) => Err(invalid("cover", "the two-element cover needs projections under P_{n,eps}")),
            (CoverChoice::Greedy { level }, ConceptClass::Projections(_), AnyDistribution::Product(p)) => {
                greedy_packing_cover(&ProjectionMetric::new(p), level)
            }
            (CoverChoice::Greedy { level }, ConceptClass::Table(t), AnyDistribution::Finite(f)) => {
                greedy_packing_cover(&TableMetric::new(t, f)?, level)
            }
            _ => Err(Error::OracleUnavailable("no exact metric for this class and distribution".into())),
        }
    }

    fn seed(&self) -> RngSeed {
        RngSeed::new(self.cfg.seed, self.cfg.stream)
    }

    fn draw(&self, t: u64) -> Result<Draw<'_>> {
        let key = self.seed().child(t, TARGET_STREAM).trial(0);
        let k = match self.cfg.target {
            TargetSpec::Fixed(k) => k - 1,
            TargetSpec::Random => uniform_below(key, self.class.len() as u64) as usize,
        };
        let target = self.class.concept(k);
        let dist = if self.distribution_varies() {
            let (eps, _) = pne(&self.dist).expect("checked");
            std::borrow::Cow::Owned(AnyDistribution::Product(ProductDistribution::pne(self.dist.dimension(), eps, k + 1)?))
        } else {
            std::borrow::Cow::Borrowed(&self.dist)
        };
        Ok(Draw { target, dist })
    }

    fn cover_for(&self, dist: &AnyDistribution<f64>) -> Result<std::borrow::Cow<'_, CoverResult<f64>>> {
        match &self.fixed_cover {
            Some(c) => Ok(std::borrow::Cow::Borrowed(c)),
            None => self.build_cover(dist).map(std::borrow::Cow::Owned),
        }
    }

    fn outcome(&self, error: f64) -> TrialOutcome {
        TrialOutcome { error, failed: error > self.cfg.eps_acc }
    }

    /// Trial `t` with the configured sample size.
    pub fn run_trial(&self, t: u64) -> Result<TrialOutcome> {
        self.run_trial_at(t, self.cfg.m)
    }

    /// Trial `t` with `m` examples. Trials with the same index share their
    /// target and the first rows of their sample across `m`.
    pub fn run_trial_at(&self, t: u64, m: usize) -> Result<TrialOutcome> {
        let draw = self.draw(t)?;
        match (&self.class, draw.dist.as_ref()) {
            (ConceptClass::Projections(_), AnyDistribution::Product(p)) => self.fast_projection_trial(t, m, draw.target, p),
            _ => self.reference_trial(t, m, &draw),
        }
    }

    /// Projections under a product distribution, without materializing the
    /// sample; errors from closed forms.
    fn fast_projection_trial(&self, t: u64, m: usize, target: ConceptId, dist: &ProductDistribution<f64>) -> Result<TrialOutcome> {
        let target = target.index();
        let cols = LazyColumns::new(dist, target, m, self.seed().child(t, SAMPLE_STREAM));
        let error = match self.cfg.learner {
            LearnerKind::Erm => {
                let chosen = cols.first_alive().expect("target column is consistent");
                projection_distance(dist, chosen, target)
            }
            LearnerKind::Cover => {
                let cover = self.cover_for(&AnyDistribution::Product(dist.clone()))?;
                let mut best: Option<(u64, ConceptId)> = None;
                for &member in &cover.members {
                    let wrong = cols.mistakes(member.index());
                    if best.is_none_or(|(w, id)| wrong < w || (wrong == w && member < id)) {
                        best = Some((wrong, member));
                    }
                }
                let chosen = best.ok_or(Error::EmptyCover)?.1;
                projection_distance(dist, chosen.index(), target)
            }
            LearnerKind::BayesPosterior => {
                let (eps, special) = dist.pne_params().expect("checked");
                let k_set: Vec<usize> = set_bits(&cols.alive_mask()).collect();
                posterior_rule_error(k_set.len(), eps, dist.marginal(target), k_set.contains(&(special - 1)) && special - 1 != target)
            }
            LearnerKind::Memorizer => unreachable!("rejected in Experiment::new"),
        };
        Ok(self.outcome(error))
    }

    /// Materializes the sample and runs the library learners; errors by
    /// enumeration or closed form.
    fn reference_trial(&self, t: u64, m: usize, draw: &Draw<'_>) -> Result<TrialOutcome> {
        let dist = draw.dist.as_ref();
        let points = sample_points(dist, m, self.seed().child(t, SAMPLE_STREAM));
        let sample = LabeledSample::labeled_by(&self.class, draw.target, points)?;
        let predictor = match self.cfg.learner {
            LearnerKind::Erm => Predictor::Concept(erm(&self.class, &sample)?),
            LearnerKind::Cover => Predictor::Concept(cover_learner(self.cover_for(dist)?.as_ref(), &self.class, &sample)?),
            LearnerKind::BayesPosterior => {
                let (eps, _) = pne(dist).expect("checked");
                Predictor::Posterior(PosteriorState::from_sample(dist.dimension(), eps, &sample)?)
            }
            LearnerKind::Memorizer => consistent_memorizer(&sample, false)?,
        };
        let error = exact_error(&self.class, &predictor, draw.target, dist)?;
        Ok(self.outcome(error))
    }

    /// Reference run of trial `t` that always materializes the sample.
    /// Agrees with [`Experiment::run_trial_at`] on every trial.
    pub fn run_trial_reference(&self, t: u64, m: usize) -> Result<TrialOutcome> {
        let draw = self.draw(t)?;
        self.reference_trial(t, m, &draw)
    }

    /// All trials in index order. Trials run on the rayon pool; the result
    /// does not depend on the number of threads.
    pub fn run_trials_at(&self, m: usize) -> Result<Vec<TrialOutcome>> {
        (0..self.cfg.trials).into_par_iter().map(|t| self.run_trial_at(t, m)).collect()
    }

    /// Failure frequency at sample size `m` with its Hoeffding interval.
    pub fn failure_estimate_at(&self, m: usize) -> Result<EstimateWithCI> {
        let outcomes = self.run_trials_at(m)?;
        let failures = outcomes.iter().filter(|o| o.failed).count() as u64;
        Ok(EstimateWithCI::from_counts(failures, self.cfg.trials, self.cfg.gamma))
    }
}

fn pne(dist: &AnyDistribution<f64>) -> Option<(f64, usize)> {
    match dist {
        AnyDistribution::Product(p) => p.pne_params(),
        AnyDistribution::Finite(_) => None,
    }
}

/// Exact `d_P(predictor, target)`.
fn exact_error(class: &ConceptClass, predictor: &Predictor<f64>, target: ConceptId, dist: &AnyDistribution<f64>) -> Result<f64> {
    match (dist, predictor) {
        (AnyDistribution::Finite(f), _) => predictor.disagreement(class, target, f),
        (AnyDistribution::Product(p), Predictor::Concept(id)) => Ok(projection_distance(p, id.index(), target.index())),
        (AnyDistribution::Product(p), _) => {
            let n = p.dimension();
            if n > MAX_ENUM_DIMENSION {
                return Err(Error::OracleUnavailable(format!("enumerating a cube of dimension {n}")));
            }
            let mut error = 0.0;
            for v in 0..1u64 << n {
                let x = Point::from_index(n, v);
                if predictor.predict(class, &x)? != class.eval(target, &x)? {
                    error += p.point_prob(&x)?;
                }
            }
            Ok(error)
        }
    }
}

/// `Pr[B ≥ s]` for `B ~ Binomial(trials, p)`.
fn binomial_tail(trials: u64, p: f64, s: i64) -> f64 {
    if s <= 0 {
        return 1.0;
    }
    if s as u64 > trials {
        return 0.0;
    }
    let b = Binomial::new(p, trials).expect("p in [0, 1]");
    (1.0 - b.cdf(s as u64 - 1)).max(0.0)
}

/// Error of the posterior threshold rule with `K = k` consistent columns,
/// against a target coordinate with marginal `p_target`. The other `k - 1`
/// columns are Bernoulli(ε), except one fair column when `fair_other`.
pub(crate) fn posterior_rule_error(k: usize, eps: f64, p_target: f64, fair_other: bool) -> f64 {
    let s_star = decision_threshold(k, &eps) as i64;
    let others = (k - 1) as u64;
    // Pr[B ≥ s] for B the number of other consistent columns set to 1.
    let tail = |s: i64| {
        if fair_other {
            0.5 * binomial_tail(others - 1, eps, s) + 0.5 * binomial_tail(others - 1, eps, s - 1)
        } else {
            binomial_tail(others, eps, s)
        }
    };
    // Target bit 1: predicts 0 iff B + 1 < s*. Target bit 0: predicts 1 iff B ≥ s*.
    p_target * (1.0 - tail(s_star - 1)) + (1.0 - p_target) * tail(s_star)
}

/// Runs trial `t` of `cfg`.
pub fn run_trial(cfg: &TrialConfig, t: u64) -> Result<TrialOutcome> {
    Experiment::new(cfg.clone())?.run_trial(t)
}

/// Fraction of failed trials with a two-sided Hoeffding interval at
/// confidence `1 - gamma`.
pub fn estimate_failure_prob(cfg: &TrialConfig) -> Result<EstimateWithCI> {
    let exp = Experiment::new(cfg.clone())?;
    exp.failure_estimate_at(cfg.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{ClassSpec, TablesSpec};
    use crate::distributions::{DistSpec, ProbValue};
    use crate::metric_cover::corollary_m;

    fn cfg(n: usize, learner: LearnerKind, target: TargetSpec, m: usize, trials: u64) -> TrialConfig {
        TrialConfig {
            class: ClassSpec::Projections { n },
            dist: DistSpec::Pne { n, eps: 0.2, i: 1 },
            target,
            learner,
            m,
            eps_acc: 1.0 / 16.0,
            trials,
            gamma: 0.01,
            seed: 42,
            stream: 0,
            cover: None,
        }
    }

    #[test]
    fn point_mass_erm_memorizes() {
        let x: Point = "101".parse().unwrap();
        let c = TrialConfig {
            class: ClassSpec::Projections { n: 3 },
            dist: DistSpec::Finite { support: vec![x], probs: vec![ProbValue::Float(1.0)] },
            target: TargetSpec::Random,
            learner: LearnerKind::Erm,
            m: 1,
            eps_acc: 0.1,
            trials: 20,
            gamma: 0.01,
            seed: 1,
            stream: 0,
            cover: None,
        };
        let exp = Experiment::new(c).unwrap();
        for t in 0..20 {
            assert_eq!(exp.run_trial(t).unwrap(), TrialOutcome { error: 0.0, failed: false });
        }
    }

    #[test]
    fn empty_sample_erm_picks_first_concept() {
        let out = run_trial(&cfg(5, LearnerKind::Erm, TargetSpec::Fixed(2), 0, 1), 0).unwrap();
        // d_{P_1}(c_1, c_2) = 1/2 (1 - ε) + 1/2 ε = 1/2.
        assert_eq!(out, TrialOutcome { error: 0.5, failed: true });
    }

    #[test]
    fn large_eps_acc_never_fails() {
        let mut c = cfg(64, LearnerKind::Erm, TargetSpec::Random, 1, 200);
        c.eps_acc = 1.0;
        assert_eq!(estimate_failure_prob(&c).unwrap().estimate, 0.0);
    }

    #[test]
    fn cover_learner_at_corollary_size() {
        let m = corollary_m(0.05, 0.1).unwrap() as usize;
        let mut c = cfg(256, LearnerKind::Cover, TargetSpec::Fixed(7), m, 400);
        c.dist = DistSpec::Pne { n: 256, eps: 0.05, i: 7 };
        c.eps_acc = 0.2;
        let est = estimate_failure_prob(&c).unwrap();
        assert!(est.estimate <= 0.1, "{est:?}");
    }

    #[test]
    fn fast_path_matches_reference() {
        for learner in [LearnerKind::Erm, LearnerKind::Cover, LearnerKind::BayesPosterior] {
            for (n, target, m) in [(6, TargetSpec::Random, 0), (9, TargetSpec::Random, 2), (12, TargetSpec::Fixed(3), 3), (10, TargetSpec::Random, 6)] {
                let exp = Experiment::new(cfg(n, learner, target, m, 60)).unwrap();
                for t in 0..60 {
                    let fast = exp.run_trial(t).unwrap();
                    let slow = exp.run_trial_reference(t, m).unwrap();
                    assert_eq!(fast.failed, slow.failed, "{learner} n={n} m={m} t={t}");
                    assert!((fast.error - slow.error).abs() < 1e-12, "{learner} n={n} m={m} t={t}: {fast:?} vs {slow:?}");
                }
            }
        }
    }

    /// A fixed target that is not the fair coordinate exercises the
    /// one-fair-column branch of the binomial formula.
    #[test]
    fn posterior_formula_with_fair_column_among_others() {
        let mut c = cfg(10, LearnerKind::BayesPosterior, TargetSpec::Fixed(4), 1, 80);
        c.dist = DistSpec::Pne { n: 10, eps: 0.3, i: 2 };
        let exp = Experiment::new(c).unwrap();
        for t in 0..80 {
            let fast = exp.run_trial(t).unwrap();
            let slow = exp.run_trial_reference(t, 1).unwrap();
            assert!((fast.error - slow.error).abs() < 1e-12);
        }
    }

    #[test]
    fn tables_use_enumeration() {
        let domain: Vec<Point> = ["00", "01", "10", "11"].iter().map(|s| s.parse().unwrap()).collect();
        let c = TrialConfig {
            class: ClassSpec::Table { domain: domain.clone(), tables: TablesSpec::Keyword(crate::concepts::AllKeyword::All) },
            dist: DistSpec::Finite { support: domain, probs: vec![ProbValue::Float(0.25); 4] },
            target: TargetSpec::Random,
            learner: LearnerKind::Memorizer,
            m: 2,
            eps_acc: 0.3,
            trials: 50,
            gamma: 0.01,
            seed: 3,
            stream: 0,
            cover: None,
        };
        let exp = Experiment::new(c.clone()).unwrap();
        for t in 0..50 {
            let out = exp.run_trial(t).unwrap();
            assert!([0.0, 0.25, 0.5, 0.75].contains(&out.error));
        }
        let mut erm_cfg = c;
        erm_cfg.learner = LearnerKind::Cover;
        assert!(Experiment::new(erm_cfg).is_ok());
    }

    #[test]
    fn unsupported_combinations() {
        let domain: Vec<Point> = vec!["0".parse().unwrap(), "1".parse().unwrap()];
        let mut c = cfg(1, LearnerKind::Erm, TargetSpec::Random, 1, 1);
        c.class = ClassSpec::Table { domain, tables: TablesSpec::Keyword(crate::concepts::AllKeyword::All) };
        c.dist = DistSpec::Product { marginals: vec![ProbValue::Float(0.5)] };
        assert!(matches!(Experiment::new(c), Err(Error::OracleUnavailable(_))));

        let mut c = cfg(4, LearnerKind::BayesPosterior, TargetSpec::Random, 1, 1);
        c.dist = DistSpec::Product { marginals: vec![ProbValue::Float(0.5); 4] };
        assert!(matches!(Experiment::new(c), Err(Error::InvalidParameter { .. })));

        let c = cfg(4, LearnerKind::Memorizer, TargetSpec::Random, 1, 1);
        assert!(matches!(Experiment::new(c), Err(Error::OracleUnavailable(_))));

        let c = cfg(4, LearnerKind::Erm, TargetSpec::Fixed(5), 1, 1);
        assert!(matches!(Experiment::new(c), Err(Error::ConceptOutOfRange { .. })));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let exp = Experiment::new(cfg(300, LearnerKind::Erm, TargetSpec::Random, 3, 500)).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| exp.run_trials_at(3).unwrap());
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| exp.run_trials_at(3).unwrap());
        assert_eq!(one, four);
    }

    #[test]
    fn binomial_tail_edges() {
        assert_eq!(binomial_tail(5, 0.3, 0), 1.0);
        assert_eq!(binomial_tail(5, 0.3, 6), 0.0);
        assert!((binomial_tail(2, 0.5, 1) - 0.75).abs() < 1e-15);
        assert_eq!(binomial_tail(0, 0.3, 1), 0.0);
    }
}
