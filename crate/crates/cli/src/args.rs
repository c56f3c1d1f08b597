use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaplab::learners::LearnerKind;
use gaplab::mc_harness::TargetSpec;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "gaplab", version, about = "Sample-complexity experiments for learning with and without the distribution")]
pub struct Cli {
    /// Master seed
    #[arg(long, global = true, env = "GAPLAB_SEED")]
    pub seed: Option<u64>,

    /// Monte Carlo trials (overrides the command default)
    #[arg(long, global = true)]
    pub trials: Option<u64>,

    /// Output file; a manifest is written next to it
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads, 0 for all cores
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// JSON experiment spec (an object or a list); flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy cover of a class under a distribution
    Cover(CoverArgs),
    /// Brute-force VC dimension
    Vc(VcArgs),
    /// Failure probability of one learner at one sample size
    Learn(LearnArgs),
    /// Empirical sample complexity of each learner across n
    Separation(SeparationArgs),
    /// The random-index lower-bound construction
    LowerBound(LowerBoundArgs),
    /// Statistics of K and S in the lower-bound construction
    KsStats(KsArgs),
    /// Consistent memorizer against the missing mass
    NoGap(NoGapArgs),
    /// Cover-size and sample-size formulas
    Bounds(BoundsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cover(_) => "cover",
            Command::Vc(_) => "vc",
            Command::Learn(_) => "learn",
            Command::Separation(_) => "separation",
            Command::LowerBound(_) => "lower-bound",
            Command::KsStats(_) => "ks-stats",
            Command::NoGap(_) => "no-gap",
            Command::Bounds(_) => "bounds",
        }
    }
}

fn not(b: &bool) -> bool {
    !*b
}

fn parse_target(s: &str) -> Result<TargetSpec, String> {
    if s == "random" {
        return Ok(TargetSpec::Random);
    }
    s.parse().map(TargetSpec::Fixed).map_err(|_| format!("expected \"random\" or a concept number, got {s:?}"))
}

/// Projection class under `P_i ∈ P_{n,ε}`; class and distribution can
/// also come from the config.
#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Fair coordinate, 1-based
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    /// Cover level (default 2 eps)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    /// Check packing and covering exhaustively
    #[arg(long)]
    #[serde(skip_serializing_if = "not")]
    pub verify: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VcArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// "full" cube or "default" (shattered set plus random points)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universe: Option<String>,
    /// Random points added to the default universe
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[arg(long, value_parser = clap::builder::ValueParser::new(|s: &str| s.parse::<LearnerKind>()))]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerKind>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_acc: Option<f64>,
    /// "random" or a 1-based concept number
    #[arg(long, value_parser = parse_target)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSpec>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SeparationArgs {
    /// Comma-separated dimensions
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_acc: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Comma-separated subset of erm, cover, bayes-posterior
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learners: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct LowerBoundArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[arg(long, value_parser = clap::builder::ValueParser::new(|s: &str| s.parse::<LearnerKind>()))]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerKind>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct KsArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Sample size (default: the lower-bound budget)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct NoGapArgs {
    /// Support size D (at most 12)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_size: Option<usize>,
    /// "uniform" or "skewed" (weights 2^(D-1), ..., 2, 1)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,
    /// Comma-separated sample sizes (default 1..=D)
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_acc: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Cover size N
    #[arg(long = "cover-size")]
    #[serde(rename = "cover_size", skip_serializing_if = "Option::is_none")]
    pub cover_size: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// VC dimension
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    /// Number of points for the Sauer bound
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
}
