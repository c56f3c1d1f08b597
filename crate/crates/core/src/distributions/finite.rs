use std::collections::{HashMap, HashSet};

use super::rng::{bernoulli_threshold, stream_u64};
use super::PointDistribution;
use crate::concepts::Point;
use crate::error::{invalid, Error, Result};
use crate::scalar::{self, Scalar};

/// Tolerance on `Σ probs = 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A distribution with finite support.
#[derive(Debug, Clone)]
pub struct FiniteSupportDistribution<T> {
    support: Vec<Point>,
    probs: Vec<T>,
    lookup: HashMap<Point, usize>,
    /// `ceil(F_k · 2^64)` for the running sums `F_k`; the last positive
    /// entry is forced to `2^64`.
    cumulative: Vec<u128>,
}

impl<T: PartialEq> PartialEq for FiniteSupportDistribution<T> {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.probs == other.probs
    }
}

impl<T: Scalar> FiniteSupportDistribution<T> {
    pub fn new(support: Vec<Point>, probs: Vec<T>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(invalid("probs", format!("{} probabilities for {} support points", probs.len(), support.len())));
        }
        if support.is_empty() {
            return Err(invalid("support", "support is empty"));
        }
        let n = support[0].len();
        if let Some(p) = support.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.len() });
        }
        if let Some(p) = probs.iter().find(|p| **p < T::zero()) {
            return Err(invalid("probs", format!("negative probability {p:?}")));
        }
        let total = scalar::sum(probs.iter().cloned());
        let tol = T::from_f64(SUM_TOLERANCE).expect("tolerance representable");
        if (total.clone() - T::one()).abs() > tol {
            return Err(invalid("probs", format!("probabilities sum to {total:?}, not 1")));
        }
        let mut lookup = HashMap::with_capacity(support.len());
        for (k, p) in support.iter().enumerate() {
            if lookup.insert(p.clone(), k).is_some() {
                return Err(invalid("support", format!("duplicate support point {p}")));
            }
        }

        let mut running = 0.0f64;
        let mut cumulative: Vec<u128> = probs
            .iter()
            .map(|p| {
                running += p.to_f64_lossy();
                bernoulli_threshold(running)
            })
            .collect();
        if let Some(last) = probs.iter().rposition(|p| *p > T::zero()) {
            cumulative[last..].iter_mut().for_each(|c| *c = 1 << 64);
        }
        Ok(Self { support, probs, lookup, cumulative })
    }

    /// Uniform over `support`.
    pub fn uniform(support: Vec<Point>) -> Result<Self> {
        let d = support.len() as u64;
        let probs = vec![T::ratio(1, d.max(1)); support.len()];
        Self::new(support, probs)
    }

    /// Probabilities proportional to integer `weights`.
    pub fn weighted(support: Vec<Point>, weights: &[u64]) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(invalid("weights", "weights sum to zero"));
        }
        Self::new(support, weights.iter().map(|&w| T::ratio(w, total)).collect())
    }

    pub fn point_mass(x: Point) -> Self {
        Self::new(vec![x], vec![T::one()]).expect("single point with mass one")
    }

    pub fn support(&self) -> &[Point] {
        &self.support
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn dimension(&self) -> usize {
        self.support[0].len()
    }

    pub fn index_of(&self, x: &Point) -> Option<usize> {
        self.lookup.get(x).copied()
    }

    /// Exact `Pr[X = x]`; zero off the support.
    pub fn point_prob(&self, x: &Point) -> Result<T> {
        x.check_dim(self.dimension())?;
        Ok(self.index_of(x).map_or_else(T::zero, |k| self.probs[k].clone()))
    }

    /// Support index drawn with the first uniform of the key's stream.
    #[inline]
    pub fn draw_index(&self, key: u64) -> usize {
        let u = stream_u64(key, 0) as u128;
        self.cumulative.partition_point(|&c| c <= u)
    }

    /// Mass of the support points absent from `observed`.
    pub fn missing_mass<'a>(&self, observed: impl IntoIterator<Item = &'a Point>) -> T {
        let seen: HashSet<usize> = observed.into_iter().filter_map(|x| self.index_of(x)).collect();
        self.missing_mass_of_indices(&seen)
    }

    pub(crate) fn missing_mass_of_indices(&self, seen: &HashSet<usize>) -> T {
        scalar::sum(self.probs.iter().enumerate().filter(|(k, _)| !seen.contains(k)).map(|(_, p)| p.clone()))
    }

    /// Same support, probabilities converted to another scalar type.
    pub fn convert<U: Scalar>(&self) -> Result<FiniteSupportDistribution<U>> {
        let probs = self
            .probs
            .iter()
            .map(|p| U::from_f64(p.to_f64_lossy()).ok_or_else(|| invalid("probs", format!("{p:?} not convertible"))))
            .collect::<Result<Vec<_>>>()?;
        FiniteSupportDistribution::new(self.support.clone(), probs)
    }
}

impl<T: Scalar> PointDistribution<T> for FiniteSupportDistribution<T> {
    fn dimension(&self) -> usize {
        FiniteSupportDistribution::dimension(self)
    }

    fn point_prob(&self, x: &Point) -> Result<T> {
        FiniteSupportDistribution::point_prob(self, x)
    }

    fn draw(&self, key: u64) -> Point {
        self.support[self.draw_index(key)].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{sample_points, RngSeed};
    use num_rational::BigRational;

    fn pts(n: u64, d: usize) -> Vec<Point> {
        (0..n).map(|k| Point::from_index(d, k)).collect()
    }

    #[test]
    fn point_mass_samples() {
        let x: Point = "0110".parse().unwrap();
        let d = FiniteSupportDistribution::<f64>::point_mass(x.clone());
        assert_eq!(sample_points(&d, 5, RngSeed::new(3, 0)), vec![x; 5]);
        assert!(sample_points(&d, 0, RngSeed::new(3, 0)).is_empty());
    }

    #[test]
    fn validation() {
        assert!(FiniteSupportDistribution::new(pts(2, 2), vec![0.5, 0.4]).is_err());
        assert!(FiniteSupportDistribution::new(pts(2, 2), vec![0.5]).is_err());
        assert!(FiniteSupportDistribution::new(vec![Point::zeros(2); 2], vec![0.5, 0.5]).is_err());
        assert!(FiniteSupportDistribution::new(pts(2, 2), vec![1.5, -0.5]).is_err());
        assert!(FiniteSupportDistribution::<f64>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn off_support_prob_is_zero() {
        let d = FiniteSupportDistribution::<f64>::uniform(pts(2, 3)).unwrap();
        assert_eq!(d.point_prob(&Point::from_index(3, 5)).unwrap(), 0.0);
        assert!(d.point_prob(&Point::zeros(2)).is_err());
    }

    #[test]
    fn missing_mass_examples() {
        let two = pts(2, 2);
        let u = FiniteSupportDistribution::<f64>::uniform(two.clone()).unwrap();
        assert_eq!(u.missing_mass([&two[0]]), 0.5);
        assert_eq!(u.missing_mass(&two), 0.0);

        let three = pts(3, 2);
        let skew = FiniteSupportDistribution::<BigRational>::weighted(three.clone(), &[7, 2, 1]).unwrap();
        // direct summation: 0.2 + 0.1
        assert_eq!(skew.missing_mass([&three[0]]), BigRational::ratio(3, 10));
    }

    #[test]
    fn zero_probability_points_never_drawn() {
        let d = FiniteSupportDistribution::new(pts(3, 2), vec![0.0, 1.0, 0.0]).unwrap();
        for k in 0..200 {
            assert_eq!(d.draw_index(k), 1);
        }
    }
}
