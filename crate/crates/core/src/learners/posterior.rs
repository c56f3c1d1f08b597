//! Bayes-optimal prediction for the uniform prior over `(P_i, c_i)`,
//! `i ∈ {1..n}`, with `P_i ∈ P_{n,ε}`.
//!
//! Given the sample, the index `I` is uniform on `k(x, y)`, the columns of
//! the sample matrix equal to the label vector. For a query `z` with
//! `S = |{i ∈ k : z[i] = 1}|` and `K = |k|`,
//!
//! ```text
//! E[c_I(z) | x, y, z] = (1 - ε) / (1 - 2ε + K ε / S)   (S > 0)
//!                     = 0                               (S = 0)
//! ```

use super::erm::set_bits;
use super::sample::LabeledSample;
use crate::concepts::{ConceptId, Point};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Posterior over the projection index after seeing a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorState<T> {
    /// 0-based indices of the consistent columns, ascending.
    k_set: Vec<usize>,
    eps: T,
    m: usize,
    n: usize,
}

impl<T: Scalar> PosteriorState<T> {
    /// Posterior for dimension `n` and distribution parameter `eps`.
    pub fn from_sample(n: usize, eps: T, sample: &LabeledSample) -> Result<Self> {
        let alive = sample.consistent_columns(n)?;
        Self::from_columns(n, eps, sample.len(), set_bits(&alive).collect())
    }

    pub(crate) fn from_columns(n: usize, eps: T, m: usize, k_set: Vec<usize>) -> Result<Self> {
        if !(eps > T::zero() && eps < T::half()) {
            return Err(invalid("eps", format!("{eps:?} is not in (0, 1/2)")));
        }
        if k_set.is_empty() {
            return Err(Error::InconsistentSample);
        }
        Ok(Self { k_set, eps, m, n })
    }

    /// 0-based consistent columns.
    pub fn k_set(&self) -> &[usize] {
        &self.k_set
    }

    /// `K = |k(x, y)|`.
    pub fn k(&self) -> usize {
        self.k_set.len()
    }

    pub fn eps(&self) -> &T {
        &self.eps
    }

    pub fn sample_size(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `S(z) = |{i ∈ k : z[i] = 1}|`.
    pub fn s_of(&self, z: &Point) -> Result<usize> {
        z.check_dim(self.n)?;
        Ok(self.k_set.iter().filter(|&&i| z.get(i)).count())
    }

    /// Smallest `S` at which the predictor outputs 1, or `K + 1` if none.
    pub fn threshold(&self) -> usize {
        decision_threshold(self.k(), &self.eps)
    }
}

/// `E[c_I(Z) | X, Y, Z]` as a function of `K`, `S` and `ε`.
pub fn posterior_expectation<T: Scalar>(k: usize, s: usize, eps: &T) -> T {
    if s == 0 {
        return T::zero();
    }
    let one = T::one();
    let two = one.clone() + one.clone();
    let ratio = T::ratio(k as u64, s as u64) * eps.clone();
    (one.clone() - eps.clone()) / (one - two * eps.clone() + ratio)
}

/// The threshold rule: 1 iff `S > 0` and the posterior expectation is at
/// least `1/2` (ties predict 1).
pub fn predicts_one<T: Scalar>(k: usize, s: usize, eps: &T) -> bool {
    s > 0 && posterior_expectation(k, s, eps) >= T::half()
}

/// The expectation is increasing in `S`, so the rule is `S ≥ threshold`.
pub(crate) fn decision_threshold<T: Scalar>(k: usize, eps: &T) -> usize {
    let (mut lo, mut hi) = (1usize, k + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if predicts_one(k, mid, eps) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Bayes prediction at `z`.
pub fn bayes_posterior_predict<T: Scalar>(state: &PosteriorState<T>, z: &Point) -> Result<bool> {
    let s = state.s_of(z)?;
    Ok(predicts_one(state.k(), s, &state.eps))
}

/// `Pr[I = i | X, Y]`: uniform on the consistent columns (`n` is needed
/// when the sample is empty).
pub fn posterior_over_index<T: Scalar>(n: usize, sample: &LabeledSample) -> Result<Vec<(ConceptId, T)>> {
    let alive = sample.consistent_columns(n)?;
    let k: Vec<usize> = set_bits(&alive).collect();
    if k.is_empty() {
        return Err(Error::InconsistentSample);
    }
    let mass = T::ratio(1, k.len() as u64);
    Ok(k.into_iter().map(|i| (ConceptId::projection(i + 1), mass.clone())).collect())
}
