use gaplab::concepts::{
    build_shattered_set, default_universe, full_universe, ClassSpec, ConceptClass, Point, MAX_FULL_UNIVERSE_DIM,
};
use gaplab::distributions::{AnyDistribution, DistSpec, FiniteSupportDistribution, RngSeed};
use gaplab::learners::LearnerKind;
use gaplab::mc_harness::{
    ks_statistics_experiment_with, lower_bound_experiment_with, lower_bound_m, no_gap_experiment, sample_complexity_search,
    tail_inequality_check, CoverChoice, MAX_NO_GAP_DOMAIN, Experiment, TargetSpec, TrialConfig, DEFAULT_GAMMA,
};
use gaplab::metric_cover::{
    benedek_itai_m, corollary_m, dudley_cover_bound, greedy_packing_cover, sauer_bound, sauer_estimate, verify_cover,
    CoverResult, DistanceOracle, EstimateWithCI, ProjectionMetric, TableMetric,
};
use gaplab::concepts::vc_dimension_bruteforce;
use gaplab::Exact;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliError;
use crate::output::{fmt_float, Report};

/// A subcommand's resolved parameters.
pub trait Params: Serialize + DeserializeOwned {
    /// Whether the global `--trials` flag applies.
    const USES_TRIALS: bool;
    fn run(&self, seed: u64) -> Result<Report, CliError>;
}

fn ci_cells(e: &EstimateWithCI) -> [String; 3] {
    [fmt_float(e.estimate), fmt_float(e.lower().max(0.0)), fmt_float(e.upper().min(1.0))]
}

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

fn one() -> usize {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverParams {
    #[serde(default)]
    pub class: Option<ClassSpec>,
    #[serde(default)]
    pub dist: Option<DistSpec>,
    #[serde(default = "CoverParams::default_n")]
    pub n: usize,
    #[serde(default = "CoverParams::default_eps")]
    pub eps: f64,
    #[serde(default = "one")]
    pub i: usize,
    #[serde(default)]
    pub level: Option<f64>,
    #[serde(default)]
    pub verify: bool,
}

impl CoverParams {
    fn default_n() -> usize {
        1024
    }

    fn default_eps() -> f64 {
        0.05
    }
}

fn cover_report<O: DistanceOracle<f64>>(oracle: &O, level: f64, verify: bool, vc: usize) -> Result<Report, CliError> {
    let cover: CoverResult<f64> = greedy_packing_cover(oracle, level)?;
    let checks = if verify { Some(verify_cover(oracle, &cover)?) } else { None };
    let dudley = if level > 0.0 && level <= 1.0 { Some(dudley_cover_bound(level, vc as u64)?) } else { None };
    let summary = cover.summary();
    let mut report = Report::new(
        vec!["level", "size", "members", "certificate", "packing_ok", "covering_ok", "vc_dimension", "dudley_ln_bound", "dudley_bound"],
        json!({ "cover": summary, "packing_ok": checks.map(|c| c.0), "covering_ok": checks.map(|c| c.1), "vc_dimension": vc, "dudley": dudley }),
    )?;
    let members: Vec<String> = cover.members.iter().map(|c| c.to_string()).collect();
    let flag = |b: Option<bool>| b.map_or(String::new(), |b| b.to_string());
    report.row(vec![
        fmt_float(level),
        cover.len().to_string(),
        members.join(";"),
        cover.certificate.map_or(String::new(), fmt_float),
        flag(checks.map(|c| c.0)),
        flag(checks.map(|c| c.1)),
        vc.to_string(),
        dudley.map_or(String::new(), |d| fmt_float(d.ln_value)),
        dudley.map_or(String::new(), |d| fmt_float(d.value)),
    ]);
    Ok(report)
}

impl Params for CoverParams {
    const USES_TRIALS: bool = false;

    fn run(&self, _seed: u64) -> Result<Report, CliError> {
        let dist_spec = self.dist.clone().unwrap_or(DistSpec::Pne { n: self.n, eps: self.eps, i: self.i });
        let dist = dist_spec.build::<f64>()?;
        let class = match &self.class {
            Some(c) => c.build()?,
            None => ConceptClass::projections(dist.dimension())?,
        };
        let level = match (self.level, &dist) {
            (Some(l), _) => l,
            (None, AnyDistribution::Product(p)) if p.pne_params().is_some() => 2.0 * p.pne_params().expect("checked").0,
            _ => return Err(spec_err("level is required unless the distribution is pne")),
        };
        match (&class, &dist) {
            (ConceptClass::Projections(c), AnyDistribution::Product(p)) => {
                if c.dimension() != p.dimension() {
                    return Err(spec_err("class and distribution dimensions differ"));
                }
                cover_report(&ProjectionMetric::new(p), level, self.verify, c.dimension().ilog2() as usize)
            }
            (ConceptClass::Table(t), AnyDistribution::Finite(f)) => {
                let vc = vc_dimension_bruteforce(&class, t.domain(), t.domain().len())?;
                cover_report(&TableMetric::new(t, f)?, level, self.verify, vc)
            }
            _ => Err(spec_err("no exact metric for this class and distribution")),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VcParams {
    #[serde(default)]
    pub class: Option<ClassSpec>,
    #[serde(default = "VcParams::default_n")]
    pub n: usize,
    /// `full`, `default`, or `domain` for table classes.
    #[serde(default)]
    pub universe: Option<String>,
    #[serde(default = "VcParams::default_extra")]
    pub extra: usize,
    #[serde(default = "VcParams::default_d_max")]
    pub d_max: usize,
}

impl VcParams {
    fn default_n() -> usize {
        8
    }

    fn default_extra() -> usize {
        256
    }

    fn default_d_max() -> usize {
        64
    }
}

impl Params for VcParams {
    const USES_TRIALS: bool = false;

    fn run(&self, seed: u64) -> Result<Report, CliError> {
        let class = match &self.class {
            Some(c) => c.build()?,
            None => ConceptClass::projections(self.n)?,
        };
        let (universe, witness, expected) = match &class {
            ConceptClass::Projections(c) => {
                let n = c.dimension();
                let choice = self.universe.as_deref().unwrap_or(if n <= MAX_FULL_UNIVERSE_DIM { "full" } else { "default" });
                let universe = match choice {
                    "full" => full_universe(n)?,
                    "default" => default_universe(n, self.extra, RngSeed::new(seed, 0))?,
                    other => return Err(spec_err(format!("unknown universe {other:?}; expected full or default"))),
                };
                let witness: Vec<String> = build_shattered_set(n)?.iter().map(Point::to_string).collect();
                (universe, witness.join(";"), Some(n.ilog2() as usize))
            }
            ConceptClass::Table(t) => match self.universe.as_deref().unwrap_or("domain") {
                "domain" => (t.domain().to_vec(), String::new(), None),
                other => return Err(spec_err(format!("table classes use the domain universe, not {other:?}"))),
            },
        };
        let vc = vc_dimension_bruteforce(&class, &universe, self.d_max)?;
        let mut report = Report::new(
            vec!["kind", "concepts", "universe_size", "vc", "floor_log2_n", "witness"],
            json!({ "kind": class.kind(), "concepts": class.len(), "universe_size": universe.len(), "vc": vc, "floor_log2_n": expected, "witness": witness }),
        )?;
        report.row(vec![
            format!("{:?}", class.kind()).to_lowercase(),
            class.len().to_string(),
            universe.len().to_string(),
            vc.to_string(),
            expected.map_or(String::new(), |e| e.to_string()),
            witness,
        ]);
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnParams {
    #[serde(default)]
    pub class: Option<ClassSpec>,
    #[serde(default)]
    pub dist: Option<DistSpec>,
    #[serde(default = "LearnParams::default_n")]
    pub n: usize,
    #[serde(default = "LearnParams::default_eps")]
    pub eps: f64,
    #[serde(default = "one")]
    pub i: usize,
    #[serde(default = "LearnParams::default_learner")]
    pub learner: LearnerKind,
    pub m: usize,
    #[serde(default = "default_eps_acc")]
    pub eps_acc: f64,
    #[serde(default = "LearnParams::default_target")]
    pub target: TargetSpec,
    #[serde(default = "LearnParams::default_trials")]
    pub trials: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub stream: u64,
    #[serde(default)]
    pub cover: Option<CoverChoice>,
}

fn default_eps_acc() -> f64 {
    1.0 / 16.0
}

impl LearnParams {
    fn default_n() -> usize {
        64
    }

    fn default_eps() -> f64 {
        0.1
    }

    fn default_learner() -> LearnerKind {
        LearnerKind::Erm
    }

    fn default_target() -> TargetSpec {
        TargetSpec::Random
    }

    fn default_trials() -> u64 {
        1000
    }
}

impl Params for LearnParams {
    const USES_TRIALS: bool = true;

    fn run(&self, seed: u64) -> Result<Report, CliError> {
        let dist = self.dist.clone().unwrap_or(DistSpec::Pne { n: self.n, eps: self.eps, i: self.i });
        let dim = dist.build::<f64>()?.dimension();
        let cfg = TrialConfig {
            class: self.class.clone().unwrap_or(ClassSpec::Projections { n: dim }),
            dist,
            target: self.target,
            learner: self.learner,
            m: self.m,
            eps_acc: self.eps_acc,
            trials: self.trials,
            gamma: self.gamma,
            seed,
            stream: self.stream,
            cover: self.cover,
        };
        let outcomes = Experiment::new(cfg)?.run_trials_at(self.m)?;
        let failures = outcomes.iter().filter(|o| o.failed).count() as u64;
        let failure = EstimateWithCI::from_counts(failures, self.trials, self.gamma);
        let errors: Vec<f64> = outcomes.iter().map(|o| o.error).collect();
        let mean_error = errors.iter().sum::<f64>() / errors.len() as f64;
        let tail_check = if self.eps_acc < 1.0 { Some(tail_inequality_check(&errors, &self.eps_acc)?) } else { None };
        let mut report = Report::new(
            vec!["learner", "m", "trials", "failure", "ci_low", "ci_high", "mean_error", "tail_check"],
            json!({ "learner": self.learner, "m": self.m, "failure": failure, "mean_error": mean_error, "tail_check": tail_check }),
        )?;
        let [est, lo, hi] = ci_cells(&failure);
        report.row(vec![
            self.learner.to_string(),
            self.m.to_string(),
            self.trials.to_string(),
            est,
            lo,
            hi,
            fmt_float(mean_error),
            tail_check.map_or(String::new(), |b| b.to_string()),
        ]);
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparationParams {
    #[serde(default = "SeparationParams::default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "SeparationParams::default_eps")]
    pub eps: f64,
    #[serde(default = "default_eps_acc")]
    pub eps_acc: f64,
    #[serde(default = "default_eps_acc")]
    pub delta: f64,
    #[serde(default = "SeparationParams::default_learners")]
    pub learners: Vec<LearnerKind>,
    #[serde(default = "SeparationParams::default_trials")]
    pub trials: u64,
    #[serde(default = "SeparationParams::default_m_max")]
    pub m_max: usize,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl SeparationParams {
    fn default_n_list() -> Vec<usize> {
        (4..=16).map(|e| 1usize << e).collect()
    }

    fn default_eps() -> f64 {
        0.1
    }

    fn default_learners() -> Vec<LearnerKind> {
        vec![LearnerKind::Erm, LearnerKind::Cover]
    }

    fn default_trials() -> u64 {
        4000
    }

    fn default_m_max() -> usize {
        4096
    }
}

/// One row of the separation table.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationRow {
    pub n: usize,
    pub learner: LearnerKind,
    pub m_star: usize,
    pub failure: EstimateWithCI,
    pub m_low: usize,
    pub unresolved: Vec<usize>,
    pub resolved: bool,
}

impl Params for SeparationParams {
    const USES_TRIALS: bool = true;

    fn run(&self, seed: u64) -> Result<Report, CliError> {
        if self.learners.is_empty() {
            return Err(spec_err("learner list is empty"));
        }
        if let Some(l) = self.learners.iter().find(|l| **l == LearnerKind::Memorizer) {
            return Err(spec_err(format!("learner {l} is not allowed here; use erm, cover or bayes-posterior")));
        }
        if self.n_list.is_empty() {
            return Err(spec_err("n list is empty"));
        }
        let mut rows = Vec::new();
        for &n in &self.n_list {
            for (k, &learner) in self.learners.iter().enumerate() {
                let cfg = TrialConfig {
                    class: ClassSpec::Projections { n },
                    dist: DistSpec::Pne { n, eps: self.eps, i: 1 },
                    target: TargetSpec::Random,
                    learner,
                    m: 0,
                    eps_acc: self.eps_acc,
                    trials: self.trials,
                    gamma: self.gamma,
                    seed,
                    stream: (n as u64) << 4 | k as u64,
                    cover: None,
                };
                let r = sample_complexity_search(&cfg, self.delta, self.m_max)?;
                rows.push(SeparationRow {
                    n,
                    learner,
                    m_star: r.m_star,
                    failure: *r.estimate(r.m_star).expect("m_star evaluated"),
                    m_low: r.bracket.0,
                    resolved: r.is_resolved(),
                    unresolved: r.unresolved,
                });
            }
        }
        let mut report = Report::new(
            vec!["n", "learner", "m_star", "ci_low", "ci_high", "failure", "m_low", "unresolved", "status"],
            &rows,
        )?;
        for row in &rows {
            let [est, lo, hi] = ci_cells(&row.failure);
            let unresolved: Vec<String> = row.unresolved.iter().map(|m| m.to_string()).collect();
            if !row.resolved {
                report.warnings.push(format!("n={} learner={}: no declared failure below m_star={}", row.n, row.learner, row.m_star));
            }
            report.row(vec![
                row.n.to_string(),
                row.learner.to_string(),
                row.m_star.to_string(),
                lo,
                hi,
                est,
                row.m_low.to_string(),
                unresolved.join(";"),
                if row.resolved { "resolved" } else { "unresolved" }.to_string(),
            ]);
        }
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowerBoundParams {
    #[serde(default = "LowerBoundParams::default_n")]
    pub n: usize,
    #[serde(default = "LowerBoundParams::default_eps")]
    pub eps: f64,
    #[serde(default = "LowerBoundParams::default_learner")]
    pub learner: LearnerKind,
    #[serde(default = "LowerBoundParams::default_trials")]
    pub trials: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl LowerBoundParams {
    fn default_n() -> usize {
        1 << 17
    }

    fn default_eps() -> f64 {
        0.2
    }

    fn default_learner() -> LearnerKind {
        LearnerKind::BayesPosterior
    }

    fn default_trials() -> u64 {
        20000
    }
}

impl Params for LowerBoundParams {
    const USES_TRIALS: bool = true;

    fn run(&self, seed: u64) -> Result<Report, CliError> {
        let r = lower_bound_experiment_with(self.n, self.eps, self.learner, self.trials, seed, self.gamma)?;
        let mut report = Report::new(
            vec!["n", "eps", "learner", "m", "failure", "ci_low", "ci_high", "above_one_sixteenth", "outside_regime", "mean_error"],
            &r,
        )?;
        if r.outside_regime {
            report.warnings.push(format!("n={} is below 600/eps^3; outside the regime of the guarantee", r.n));
        }
        let [est, lo, hi] = ci_cells(&r.failure);
        report.row(vec![
            r.n.to_string(),
            fmt_float(r.eps),
            r.learner.to_string(),
            r.m.to_string(),
            est,
            lo,
            hi,
            r.above_one_sixteenth.to_string(),
            r.outside_regime.to_string(),
            fmt_float(r.mean_error),
        ]);
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsParams {
    #[serde(default = "LowerBoundParams::default_n")]
    pub n: usize,
    #[serde(default = "LowerBoundParams::default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "LowerBoundParams::default_trials")]
    pub trials: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl Params for KsParams {
    const USES_TRIALS: bool = true;

    fn run(&self, seed: u64) -> Result<Report, CliError> {
        let m = self.m.unwrap_or_else(|| lower_bound_m(self.n, self.eps));
        let s = ks_statistics_experiment_with(self.n, self.eps, m, self.trials, seed, self.gamma)?;
        let mut report = Report::new(
            vec![
                "n", "eps", "m", "trials", "ratio_condition", "ratio_ci_low", "ratio_ci_high", "k_large", "k_large_ci_low",
                "k_large_ci_high", "k_min", "k_q25", "k_median", "k_q75", "k_max", "mean_k", "sk_histogram", "outside_regime",
            ],
            &s,
        )?;
        if s.outside_regime {
            report.warnings.push(format!("n={} is below 600/eps^3; outside the regime of the guarantee", s.n));
        }
        let [r, r_lo, r_hi] = ci_cells(&s.ratio_condition);
        let [k, k_lo, k_hi] = ci_cells(&s.k_large);
        let q = s.k_quantiles;
        let hist: Vec<String> = s.sk_histogram.iter().map(u64::to_string).collect();
        report.row(vec![
            s.n.to_string(),
            fmt_float(s.eps),
            m.to_string(),
            s.trials.to_string(),
            r,
            r_lo,
            r_hi,
            k,
            k_lo,
            k_hi,
            fmt_float(q.min),
            fmt_float(q.q25),
            fmt_float(q.median),
            fmt_float(q.q75),
            fmt_float(q.max),
            fmt_float(s.mean_k),
            hist.join(";"),
            s.outside_regime.to_string(),
        ]);
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoGapParams {
    #[serde(default = "NoGapParams::default_domain_size")]
    pub domain_size: usize,
    /// `uniform` or `skewed`; ignored when `dist` is given.
    #[serde(default = "NoGapParams::default_weights")]
    pub weights: String,
    #[serde(default)]
    pub dist: Option<DistSpec>,
    #[serde(default)]
    pub m_list: Option<Vec<usize>>,
    #[serde(default = "NoGapParams::default_eps_acc")]
    pub eps_acc: f64,
    #[serde(default = "NoGapParams::default_trials")]
    pub trials: u64,
}

impl NoGapParams {
    fn default_domain_size() -> usize {
        8
    }

    fn default_weights() -> String {
        "uniform".into()
    }

    fn default_eps_acc() -> f64 {
        0.1
    }

    fn default_trials() -> u64 {
        5000
    }

    fn distribution(&self) -> Result<FiniteSupportDistribution<Exact>, CliError> {
        if let Some(spec) = &self.dist {
            return match spec.build::<Exact>()? {
                AnyDistribution::Finite(f) => Ok(f),
                AnyDistribution::Product(_) => Err(spec_err("no-gap needs a finite distribution")),
            };
        }
        let d = self.domain_size;
        if d == 0 || d > MAX_NO_GAP_DOMAIN {
            return Err(spec_err(format!("domain size {d} is not in 1..={MAX_NO_GAP_DOMAIN}")));
        }
        let support = no_gap_domain(d);
        match self.weights.as_str() {
            "uniform" => Ok(FiniteSupportDistribution::uniform(support)?),
            "skewed" => {
                let w: Vec<u64> = (0..d).map(|j| 1u64 << (d - 1 - j)).collect();
                Ok(FiniteSupportDistribution::weighted(support, &w)?)
            }
            other => Err(spec_err(format!("unknown weights {other:?}; expected uniform or skewed"))),
        }
    }
}

/// The first `d` points of the smallest cube holding `d` points.
pub fn no_gap_domain(d: usize) -> Vec<Point> {
    let dim = (d.max(2) - 1).ilog2() as usize + 1;
    (0..d as u64).map(|v| Point::from_index(dim, v)).collect()
}

impl Params for NoGapParams {
    const USES_TRIALS: bool = true;

    fn run(&self, seed: u64) -> Result<Report, CliError> {
        let dist = self.distribution()?;
        let grid = self.m_list.clone().unwrap_or_else(|| (1..=dist.support().len()).collect());
        let rows = no_gap_experiment(&dist, &grid, self.trials, self.eps_acc, seed)?;
        let mut report = Report::new(
            vec!["m", "trials", "violations", "mean_z", "mean_error", "z_tail", "failure", "tail_check"],
            &rows,
        )?;
        for r in &rows {
            if r.violations > 0 {
                report.warnings.push(format!("m={}: {} trials with error above the missing mass", r.m, r.violations));
            }
            report.row(vec![
                r.m.to_string(),
                r.trials.to_string(),
                r.violations.to_string(),
                fmt_float(r.mean_z),
                fmt_float(r.mean_error),
                fmt_float(r.z_tail.estimate),
                fmt_float(r.failure.estimate),
                r.tail_check.to_string(),
            ]);
        }
        Ok(report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsParams {
    #[serde(default = "BoundsParams::default_cover_size")]
    pub cover_size: u64,
    #[serde(default = "LowerBoundParams::default_eps")]
    pub eps: f64,
    #[serde(default = "BoundsParams::default_delta")]
    pub delta: f64,
    #[serde(default = "BoundsParams::default_d")]
    pub d: u64,
    #[serde(default = "BoundsParams::default_k")]
    pub k: u64,
}

impl BoundsParams {
    fn default_cover_size() -> u64 {
        2
    }

    fn default_delta() -> f64 {
        0.1
    }

    fn default_d() -> u64 {
        3
    }

    fn default_k() -> u64 {
        10
    }
}

impl Params for BoundsParams {
    const USES_TRIALS: bool = false;

    fn run(&self, _seed: u64) -> Result<Report, CliError> {
        let bi = benedek_itai_m(self.cover_size, self.eps, self.delta)?;
        let cor = corollary_m(self.eps, self.delta)?;
        let dudley = dudley_cover_bound(self.eps, self.d)?;
        let sauer = sauer_bound(self.k, self.d);
        let estimate = sauer_estimate(self.k, self.d).ok();
        let mut report = Report::new(
            vec!["quantity", "value"],
            json!({
                "benedek_itai_m": bi,
                "corollary_m": cor,
                "dudley_bound": dudley.value,
                "dudley_ln_bound": dudley.ln_value,
                "sauer_bound": sauer.to_string(),
                "sauer_estimate": estimate,
            }),
        )?;
        for (name, value) in [
            ("benedek_itai_m", bi.to_string()),
            ("corollary_m", cor.to_string()),
            ("dudley_bound", fmt_float(dudley.value)),
            ("dudley_ln_bound", fmt_float(dudley.ln_value)),
            ("sauer_bound", sauer.to_string()),
            ("sauer_estimate", estimate.map_or(String::new(), fmt_float)),
        ] {
            report.row(vec![name.to_string(), value]);
        }
        Ok(report)
    }
}
