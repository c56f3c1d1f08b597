//! Product distributions over the hypercube, finite-support
//! distributions, sampling and missing mass.

mod finite;
mod product;
pub mod rng;

use serde::{Deserialize, Serialize};

pub use finite::{FiniteSupportDistribution, SUM_TOLERANCE};
pub(crate) use product::{draw_word, Thresholds};
pub use product::ProductDistribution;
pub use rng::RngSeed;

use crate::concepts::Point;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Common surface of the distributions.
pub trait PointDistribution<T: Scalar>: Send + Sync {
    fn dimension(&self) -> usize;

    /// Exact probability of a single point.
    fn point_prob(&self, x: &Point) -> Result<T>;

    /// The point whose randomness is keyed by `key`.
    fn draw(&self, key: u64) -> Point;
}

/// `m` i.i.d. draws; draw `r` uses key `seed.trial(r)`.
pub fn sample_points<T: Scalar, D: PointDistribution<T> + ?Sized>(dist: &D, m: usize, seed: RngSeed) -> Vec<Point> {
    (0..m as u64).map(|r| dist.draw(seed.trial(r))).collect()
}

pub fn point_prob<T: Scalar, D: PointDistribution<T> + ?Sized>(dist: &D, x: &Point) -> Result<T> {
    dist.point_prob(x)
}

/// Probability mass of the support not hit by `observed`.
pub fn missing_mass<T: Scalar>(dist: &FiniteSupportDistribution<T>, observed: &[Point]) -> T {
    dist.missing_mass(observed)
}

/// `P_i ∈ P_{n,ε}` (`i` 1-based).
pub fn make_pne<T: Scalar>(n: usize, eps: T, i: usize) -> Result<ProductDistribution<T>> {
    ProductDistribution::pne(n, eps, i)
}

/// A probability written either as a JSON number or an exact `"p/q"`
/// string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbValue {
    Float(f64),
    Fraction(String),
}

impl ProbValue {
    pub fn to_scalar<T: Scalar>(&self) -> Result<T> {
        match self {
            Self::Float(p) => T::from_f64(*p).ok_or_else(|| invalid("probability", format!("{p} not representable"))),
            Self::Fraction(s) => {
                let (num, den) = s.split_once('/').map_or((s.as_str(), "1"), |(a, b)| (a, b));
                let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
                let (num, den) = (parse(num)?, parse(den)?);
                if den == 0 {
                    return Err(Error::Parse(format!("{s:?}: zero denominator")));
                }
                Ok(T::ratio(num, den))
            }
        }
    }
}

impl From<f64> for ProbValue {
    fn from(p: f64) -> Self {
        Self::Float(p)
    }
}

/// JSON form of a distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistSpec {
    Product { marginals: Vec<ProbValue> },
    Pne { n: usize, eps: f64, i: usize },
    Finite { support: Vec<Point>, probs: Vec<ProbValue> },
}

/// A built distribution of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDistribution<T> {
    Product(ProductDistribution<T>),
    Finite(FiniteSupportDistribution<T>),
}

impl DistSpec {
    pub fn build<T: Scalar>(&self) -> Result<AnyDistribution<T>> {
        match self {
            Self::Product { marginals } => {
                let m = marginals.iter().map(ProbValue::to_scalar).collect::<Result<Vec<T>>>()?;
                ProductDistribution::new(m).map(AnyDistribution::Product)
            }
            Self::Pne { n, eps, i } => {
                let eps = T::from_f64(*eps).ok_or_else(|| invalid("eps", "not representable"))?;
                ProductDistribution::pne(*n, eps, *i).map(AnyDistribution::Product)
            }
            Self::Finite { support, probs } => {
                let p = probs.iter().map(ProbValue::to_scalar).collect::<Result<Vec<T>>>()?;
                FiniteSupportDistribution::new(support.clone(), p).map(AnyDistribution::Finite)
            }
        }
    }
}

impl<T: Scalar> AnyDistribution<T> {
    pub fn dimension(&self) -> usize {
        match self {
            Self::Product(d) => d.dimension(),
            Self::Finite(d) => d.dimension(),
        }
    }
}

impl<T: Scalar> PointDistribution<T> for AnyDistribution<T> {
    fn dimension(&self) -> usize {
        AnyDistribution::dimension(self)
    }

    fn point_prob(&self, x: &Point) -> Result<T> {
        match self {
            Self::Product(d) => d.point_prob(x),
            Self::Finite(d) => d.point_prob(x),
        }
    }

    fn draw(&self, key: u64) -> Point {
        match self {
            Self::Product(d) => d.draw(key),
            Self::Finite(d) => d.draw(key),
        }
    }
}
