//! The disagreement pseudo-metric `d_P(f, g) = Pr_{X~P}[f(X) ≠ g(X)]`.

use super::estimate::EstimateWithCI;
use crate::concepts::{ClassKind, ConceptClass, ConceptId, ProjectionClass, TableClass};
use crate::distributions::{sample_points, FiniteSupportDistribution, PointDistribution, ProductDistribution, RngSeed};
use crate::error::{invalid, Error, Result};
use crate::scalar::{self, Scalar};

/// Exact `d_P(c_a, c_b)` for projections under a product distribution:
/// `p_a(1 - p_b) + (1 - p_a)p_b`, and exactly zero when `a = b`.
pub fn disagreement_exact_projections<T: Scalar>(
    dist: &ProductDistribution<T>,
    a: ConceptId,
    b: ConceptId,
) -> Result<T> {
    let class = ProjectionClass::new(dist.dimension())?;
    class.check(a)?;
    class.check(b)?;
    Ok(projection_distance(dist, a.index(), b.index()))
}

#[inline]
pub(crate) fn projection_distance<T: Scalar>(dist: &ProductDistribution<T>, a: usize, b: usize) -> T {
    if a == b {
        return T::zero();
    }
    let (pa, pb) = (dist.marginal(a), dist.marginal(b));
    pa.clone() * (T::one() - pb.clone()) + (T::one() - pa) * pb
}

/// Exact `d_P(a, b)` for table concepts by summing over the support.
pub fn disagreement_enumerate<T: Scalar>(
    class: &TableClass,
    dist: &FiniteSupportDistribution<T>,
    a: ConceptId,
    b: ConceptId,
) -> Result<T> {
    TableMetric::new(class, dist)?.distance(a, b)
}

/// Monte Carlo estimate of `d_P(a, b)` from `trials` fresh points.
pub fn disagreement_mc<T: Scalar, D: PointDistribution<T> + ?Sized>(
    class: &ConceptClass,
    dist: &D,
    a: ConceptId,
    b: ConceptId,
    trials: u64,
    gamma: f64,
    seed: RngSeed,
) -> Result<EstimateWithCI> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid("gamma", format!("{gamma} is not in (0,1)")));
    }
    class.check(a)?;
    class.check(b)?;
    let mut hits = 0u64;
    for x in sample_points(dist, trials as usize, seed) {
        if class.eval(a, &x)? != class.eval(b, &x)? {
            hits += 1;
        }
    }
    Ok(EstimateWithCI::from_counts(hits, trials, gamma))
}

/// An exact distance over the concepts of a finite class.
pub trait DistanceOracle<T: Scalar>: Sync {
    fn kind(&self) -> ClassKind;

    fn concept_count(&self) -> usize;

    fn distance(&self, a: ConceptId, b: ConceptId) -> Result<T>;

    fn concept(&self, k: usize) -> ConceptId {
        ConceptId::from_index(self.kind(), k)
    }
}

/// Closed-form metric for `C_n` under a product distribution.
#[derive(Debug, Clone, Copy)]
pub struct ProjectionMetric<'a, T> {
    dist: &'a ProductDistribution<T>,
}

impl<'a, T: Scalar> ProjectionMetric<'a, T> {
    pub fn new(dist: &'a ProductDistribution<T>) -> Self {
        Self { dist }
    }
}

impl<T: Scalar> DistanceOracle<T> for ProjectionMetric<'_, T> {
    fn kind(&self) -> ClassKind {
        ClassKind::Projection
    }

    fn concept_count(&self) -> usize {
        self.dist.dimension()
    }

    fn distance(&self, a: ConceptId, b: ConceptId) -> Result<T> {
        disagreement_exact_projections(self.dist, a, b)
    }
}

/// Enumeration metric for a table class under a finite distribution.
#[derive(Debug, Clone)]
pub struct TableMetric<'a, T> {
    class: &'a TableClass,
    dist: &'a FiniteSupportDistribution<T>,
    /// Domain column of each support point.
    columns: Vec<usize>,
}

impl<'a, T: Scalar> TableMetric<'a, T> {
    pub fn new(class: &'a TableClass, dist: &'a FiniteSupportDistribution<T>) -> Result<Self> {
        let columns = dist.support().iter().map(|x| class.domain_index(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { class, dist, columns })
    }

    /// Mass of the support where the two masks differ.
    pub fn mask_distance(&self, a: u64, b: u64) -> T {
        let diff = a ^ b;
        scalar::sum(
            self.columns
                .iter()
                .zip(self.dist.probs())
                .filter(|(&j, _)| (diff >> j) & 1 == 1)
                .map(|(_, p)| p.clone()),
        )
    }
}

impl<T: Scalar> DistanceOracle<T> for TableMetric<'_, T> {
    fn kind(&self) -> ClassKind {
        ClassKind::Table
    }

    fn concept_count(&self) -> usize {
        self.class.len()
    }

    fn distance(&self, a: ConceptId, b: ConceptId) -> Result<T> {
        self.class.check(a)?;
        self.class.check(b)?;
        if a == b {
            return Ok(T::zero());
        }
        Ok(self.mask_distance(self.class.mask(a.index()), self.class.mask(b.index())))
    }
}

/// Picks the exact oracle for a class/distribution pair.
pub enum ExactMetric<'a, T> {
    Projection(ProjectionMetric<'a, T>),
    Table(TableMetric<'a, T>),
}

impl<'a, T: Scalar> ExactMetric<'a, T> {
    pub fn for_projections(class: &ProjectionClass, dist: &'a ProductDistribution<T>) -> Result<Self> {
        if class.dimension() != dist.dimension() {
            return Err(Error::DimensionMismatch { expected: class.dimension(), found: dist.dimension() });
        }
        Ok(Self::Projection(ProjectionMetric::new(dist)))
    }

    pub fn for_tables(class: &'a TableClass, dist: &'a FiniteSupportDistribution<T>) -> Result<Self> {
        TableMetric::new(class, dist).map(Self::Table)
    }
}

impl<T: Scalar> DistanceOracle<T> for ExactMetric<'_, T> {
    fn kind(&self) -> ClassKind {
        match self {
            Self::Projection(m) => m.kind(),
            Self::Table(m) => m.kind(),
        }
    }

    fn concept_count(&self) -> usize {
        match self {
            Self::Projection(m) => m.concept_count(),
            Self::Table(m) => m.concept_count(),
        }
    }

    fn distance(&self, a: ConceptId, b: ConceptId) -> Result<T> {
        match self {
            Self::Projection(m) => m.distance(a, b),
            Self::Table(m) => m.distance(a, b),
        }
    }
}
