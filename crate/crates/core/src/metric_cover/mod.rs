//! Disagreement pseudo-metric, covers and packings, and bound formulas.

mod bounds;
mod cover;
mod distance;
mod estimate;

pub use bounds::{
    benedek_itai_m, corollary_m, dudley_cover_bound, kl_bernoulli, kl_lower_bound_check, sauer_bound,
    sauer_estimate, DudleyBound,
};
pub use cover::{covering_radius, greedy_packing_cover, small_cover, verify_cover, CoverResult, CoverSummary};
pub(crate) use distance::projection_distance;
pub use distance::{
    disagreement_enumerate, disagreement_exact_projections, disagreement_mc, DistanceOracle, ExactMetric,
    ProjectionMetric, TableMetric,
};
pub use estimate::{hoeffding_radius, EstimateWithCI};
