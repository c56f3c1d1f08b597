use num_traits::pow;

use super::rng::{bernoulli_threshold, stream_u64};
use super::PointDistribution;
use crate::concepts::{tail_mask, words_for, Point, WORD_BITS};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Layout<T> {
    Dense(Vec<T>),
    /// `P_i ∈ P_{n,ε}`: coordinate `special` (0-based) is a fair coin,
    /// every other coordinate is Bernoulli(ε).
    OneFair { eps: T, special: usize },
}

/// Integer thresholds for the per-coordinate Bernoulli draws.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Thresholds {
    Dense(Vec<u128>),
    OneFair { base: u64, fair: u64, special: usize },
}

impl Thresholds {
    #[inline(always)]
    pub(crate) fn bit(&self, j: usize, u: u64) -> bool {
        match self {
            Self::Dense(t) => (u as u128) < t[j],
            Self::OneFair { base, fair, special } => u < if j == *special { *fair } else { *base },
        }
    }
}

/// A product distribution over `{0,1}^n` with independent Bernoulli
/// coordinates.
#[derive(Debug, Clone)]
pub struct ProductDistribution<T> {
    n: usize,
    layout: Layout<T>,
    thresholds: Thresholds,
}

impl<T: PartialEq> PartialEq for ProductDistribution<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.layout == other.layout
    }
}

impl<T: Scalar> ProductDistribution<T> {
    /// Product of Bernoulli(`marginals[j]`) coordinates.
    pub fn new(marginals: Vec<T>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(invalid("marginals", "need at least one coordinate"));
        }
        if let Some((j, p)) = marginals.iter().enumerate().find(|(_, p)| !p.is_probability()) {
            return Err(invalid("marginals", format!("marginal {} = {p:?} is not in [0,1]", j + 1)));
        }
        let thresholds = Thresholds::Dense(marginals.iter().map(|p| bernoulli_threshold(p.to_f64_lossy())).collect());
        Ok(Self { n: marginals.len(), layout: Layout::Dense(marginals), thresholds })
    }

    /// `P_i ∈ P_{n,ε}`: `Pr[X[i] = 1] = 1/2`, `Pr[X[j] = 1] = ε` otherwise.
    /// `i` is 1-based.
    pub fn pne(n: usize, eps: T, i: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", "need n >= 2"));
        }
        if !(eps > T::zero() && eps < T::half()) {
            return Err(invalid("eps", format!("{eps:?} is not in (0, 1/2)")));
        }
        if i == 0 || i > n {
            return Err(invalid("i", format!("{i} is not in 1..={n}")));
        }
        let base = bernoulli_threshold(eps.to_f64_lossy()) as u64;
        let thresholds = Thresholds::OneFair { base, fair: 1 << 63, special: i - 1 };
        Ok(Self { n, layout: Layout::OneFair { eps, special: i - 1 }, thresholds })
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `Pr[X[j] = 1]`, `j` 0-based.
    #[inline]
    pub fn marginal(&self, j: usize) -> T {
        match &self.layout {
            Layout::Dense(m) => m[j].clone(),
            Layout::OneFair { eps, special } => {
                if j == *special {
                    T::half()
                } else {
                    eps.clone()
                }
            }
        }
    }

    pub fn marginals(&self) -> Vec<T> {
        (0..self.n).map(|j| self.marginal(j)).collect()
    }

    /// `(ε, i)` with `i` 1-based when this is a member of `P_{n,ε}` built by
    /// [`ProductDistribution::pne`].
    pub fn pne_params(&self) -> Option<(T, usize)> {
        match &self.layout {
            Layout::OneFair { eps, special } => Some((eps.clone(), special + 1)),
            Layout::Dense(_) => None,
        }
    }

    pub(crate) fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    /// Exact `Pr[X = x]`.
    pub fn point_prob(&self, x: &Point) -> Result<T> {
        x.check_dim(self.n)?;
        match &self.layout {
            Layout::Dense(m) => Ok(m.iter().enumerate().fold(T::one(), |acc, (j, p)| {
                acc * if x.get(j) { p.clone() } else { T::one() - p.clone() }
            })),
            Layout::OneFair { eps, special } => {
                let others_on = x.weight() - usize::from(x.get(*special));
                let others_off = self.n - 1 - others_on;
                Ok(T::half() * pow(eps.clone(), others_on) * pow(T::one() - eps.clone(), others_off))
            }
        }
    }

    /// Coordinates `64w .. 64w+63` of the point keyed by `key`, packed.
    #[inline]
    pub(crate) fn draw_word(&self, key: u64, w: usize) -> u64 {
        draw_word(&self.thresholds, self.n, key, w)
    }
}

#[inline(always)]
pub(crate) fn draw_word(thresholds: &Thresholds, n: usize, key: u64, w: usize) -> u64 {
    let start = w * WORD_BITS;
    let len = (n - start).min(WORD_BITS);
    let mut word = 0u64;
    match thresholds {
        Thresholds::OneFair { base, fair, special } => {
            for b in 0..len {
                let j = start + b;
                let t = if j == *special { *fair } else { *base };
                word |= u64::from(stream_u64(key, j as u64) < t) << b;
            }
        }
        Thresholds::Dense(t) => {
            for b in 0..len {
                let j = start + b;
                word |= u64::from((stream_u64(key, j as u64) as u128) < t[j]) << b;
            }
        }
    }
    word
}

impl<T: Scalar> PointDistribution<T> for ProductDistribution<T> {
    fn dimension(&self) -> usize {
        self.n
    }

    fn point_prob(&self, x: &Point) -> Result<T> {
        ProductDistribution::point_prob(self, x)
    }

    /// Coordinate `j` is one iff the `j`-th uniform of the key's stream
    /// falls below `Pr[X[j] = 1]`.
    fn draw(&self, key: u64) -> Point {
        let words = (0..words_for(self.n)).map(|w| self.draw_word(key, w)).collect::<Vec<_>>();
        debug_assert!(words.last().is_none_or(|&l| l & !tail_mask(self.n) == 0));
        Point::from_words(self.n, words).expect("word count matches dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{sample_points, RngSeed};
    use num_rational::BigRational;

    #[test]
    fn pne_marginals() {
        let p = ProductDistribution::pne(3, 0.01, 2).unwrap();
        assert_eq!(p.marginals(), vec![0.01, 0.5, 0.01]);
        let p = ProductDistribution::pne(2, 0.25, 1).unwrap();
        assert_eq!(p.marginals(), vec![0.5, 0.25]);
        assert_eq!(p.pne_params(), Some((0.25, 1)));
    }

    #[test]
    fn pne_rejects_bad_parameters() {
        assert!(ProductDistribution::pne(3, 0.5, 1).is_err());
        assert!(ProductDistribution::pne(3, 0.0, 1).is_err());
        assert!(ProductDistribution::pne(3, 0.1, 0).is_err());
        assert!(ProductDistribution::pne(3, 0.1, 4).is_err());
        assert!(ProductDistribution::pne(1, 0.1, 1).is_err());
        assert!(ProductDistribution::new(vec![0.2, 1.5]).is_err());
    }

    #[test]
    fn point_prob_examples() {
        let p = ProductDistribution::pne(2, 0.25f64, 1).unwrap();
        assert!((p.point_prob(&"10".parse().unwrap()).unwrap() - 0.375).abs() < 1e-15);
        let u = ProductDistribution::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(u.point_prob(&"11".parse().unwrap()).unwrap(), 0.25);
        assert!(u.point_prob(&"1".parse().unwrap()).is_err());
    }

    #[test]
    fn pne_point_prob_matches_dense_exactly() {
        let eps = BigRational::ratio(1, 5);
        let compact = ProductDistribution::pne(6, eps.clone(), 4).unwrap();
        let dense = ProductDistribution::new(compact.marginals()).unwrap();
        for v in 0..64 {
            let x = Point::from_index(6, v);
            assert_eq!(compact.point_prob(&x).unwrap(), dense.point_prob(&x).unwrap());
        }
    }

    #[test]
    fn compact_and_dense_sample_identically() {
        let compact = ProductDistribution::pne(130, 0.2, 77).unwrap();
        let dense = ProductDistribution::new(compact.marginals()).unwrap();
        let seed = RngSeed::new(9, 3);
        assert_eq!(sample_points(&compact, 20, seed), sample_points(&dense, 20, seed));
    }

    #[test]
    fn degenerate_marginals() {
        let d = ProductDistribution::new(vec![1.0, 0.0, 1.0]).unwrap();
        for x in sample_points(&d, 50, RngSeed::new(1, 1)) {
            assert_eq!(x.to_string(), "101");
        }
    }
}
