//! Scalar abstraction for probabilities and distances.
//!
//! Exact-arithmetic checks (missing-mass inequalities, single-bit Bayes
//! errors) run over big rationals; Monte Carlo and closed forms run over
//! `f64`. Everything that only needs field operations and ordering is
//! written against [`Scalar`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Field element used for probabilities.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Slack granted to comparisons that hold exactly in real arithmetic.
    /// Zero for exact types.
    fn rounding_slack() -> Self;

    /// `num / den` computed in this scalar type.
    fn ratio(num: u64, den: u64) -> Self {
        Self::from_u64(num).expect("u64 fits") / Self::from_u64(den).expect("u64 fits")
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    /// Best-effort conversion for sampling and reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_probability(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn rounding_slack() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn rounding_slack() -> Self {
        1e-5
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;
    fn rounding_slack() -> Self {
        Ratio::from_integer(0)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn rounding_slack() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}

/// Sum of a slice of scalars, left to right.
pub fn sum<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn ratio_is_exact_for_rationals() {
        let third = BigRational::ratio(1, 3);
        assert_eq!(third.clone() + third.clone() + third, BigRational::one());
    }

    #[test]
    fn half_matches_literal() {
        assert_eq!(f64::half(), 0.5);
        assert_eq!(Ratio::<i64>::half(), Ratio::new(1, 2));
    }
}
