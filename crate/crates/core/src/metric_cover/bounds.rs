//! Cover-size and sample-size bound formulas.

use num_bigint::BigUint;
use num_traits::{Float, One};
use serde::Serialize;

use crate::error::{invalid, Result};

/// `Σ_{i=0}^{d} C(K, i)`, exactly.
pub fn sauer_bound(k: u64, d: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 1..=d.min(k) {
        term = term * BigUint::from(k - i + 1) / BigUint::from(i);
        total += &term;
    }
    total
}

/// `(K e / d)^d`, valid for `K ≥ d ≥ 1`.
pub fn sauer_estimate(k: u64, d: u64) -> Result<f64> {
    if d == 0 || k < d {
        return Err(invalid("d", format!("need K >= d >= 1, got K={k}, d={d}")));
    }
    let (k, d) = (k as f64, d as f64);
    Ok((k * std::f64::consts::E / d).powf(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DudleyBound {
    /// May be `+∞` when it overflows.
    pub value: f64,
    pub ln_value: f64,
}

/// Cover-size bound `(4e/ε)^{d/(1 - 1/e)}` for VC dimension `d`.
pub fn dudley_cover_bound(eps: f64, d: u64) -> Result<DudleyBound> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("eps", format!("{eps} is not in (0, 1]")));
    }
    let exponent = d as f64 / (1.0 - (-1.0f64).exp());
    let ln_value = exponent * (4.0 * std::f64::consts::E / eps).ln();
    Ok(DudleyBound { value: ln_value.exp(), ln_value })
}

fn check_learning_params(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("eps", format!("{eps} is not in (0, 1]")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("{delta} is not in (0, 1)")));
    }
    Ok(())
}

/// Labeled sample size `⌈48 (ln N + ln(1/δ)) / ε⌉` for learning with an
/// `ε/2`-cover of size `N`.
pub fn benedek_itai_m(cover_size: u64, eps: f64, delta: f64) -> Result<u64> {
    if cover_size == 0 {
        return Err(invalid("N", "cover size must be at least 1"));
    }
    check_learning_params(eps, delta)?;
    Ok((48.0 * ((cover_size as f64).ln() + (1.0 / delta).ln()) / eps).ceil() as u64)
}

/// Labeled sample size `⌈12 ln(2/δ) / ε⌉` for `4ε`-learning `C_n` under
/// `P_{n,ε}` with its two-member cover.
pub fn corollary_m(eps: f64, delta: f64) -> Result<u64> {
    check_learning_params(eps, delta)?;
    Ok((12.0 * (2.0 / delta).ln() / eps).ceil() as u64)
}

/// `x ln(x/y) + (1-x) ln((1-x)/(1-y))` with `0 ln 0 = 0`; `+∞` when
/// `y ∈ {0, 1}` and `x ≠ y`.
pub fn kl_bernoulli<F: Float>(x: F, y: F) -> F {
    let term = |a: F, b: F| {
        if a == F::zero() {
            F::zero()
        } else if b == F::zero() {
            F::infinity()
        } else {
            a * (a / b).ln()
        }
    };
    term(x, y) + term(F::one() - x, F::one() - y)
}

/// Whether `KL(x‖y) ≥ (x - y)² / (2 max{x, y})`.
pub fn kl_lower_bound_check<F: Float>(x: F, y: F) -> bool {
    if x == y {
        return kl_bernoulli(x, y) >= F::zero();
    }
    let two = F::one() + F::one();
    kl_bernoulli(x, y) >= (x - y).powi(2) / (two * x.max(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sauer_examples() {
        assert_eq!(sauer_bound(10, 3), BigUint::from(176u32));
        assert_eq!(sauer_bound(10, 0), BigUint::one());
        assert_eq!(sauer_bound(3, 10), BigUint::from(8u32));
        let est = sauer_estimate(10, 3).unwrap();
        assert!((est - (10.0 * std::f64::consts::E / 3.0).powi(3)).abs() < 1e-9);
        assert!(176.0 <= est);
        assert!(sauer_estimate(2, 3).is_err());
        assert!(sauer_estimate(2, 0).is_err());
    }

    #[test]
    fn dudley_examples() {
        assert_eq!(dudley_cover_bound(0.3, 0).unwrap().value, 1.0);
        let b = dudley_cover_bound(1.0, 1).unwrap();
        let oracle = (4.0 * std::f64::consts::E).powf(1.0 / (1.0 - 1.0 / std::f64::consts::E));
        assert!((b.value - oracle).abs() < 1e-9);
        assert!((b.value - 43.6).abs() < 0.1);
        assert!(dudley_cover_bound(0.0, 1).is_err());
        assert!(dudley_cover_bound(1e-3, 10_000).unwrap().value.is_infinite());
    }

    #[test]
    fn sample_size_examples() {
        assert_eq!(benedek_itai_m(2, 0.2, 0.1).unwrap(), 719);
        assert_eq!(corollary_m(0.05, 0.1).unwrap(), 719);
        // N = 1 drops the ln N term.
        assert_eq!(benedek_itai_m(1, 1.0, 0.5).unwrap(), (48.0 * 2f64.ln()).ceil() as u64);
        assert!(benedek_itai_m(0, 0.2, 0.1).is_err());
        assert!(benedek_itai_m(2, 0.2, 1.0).is_err());
        assert!(corollary_m(1.5, 0.1).is_err());
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_bernoulli(0.3, 0.3), 0.0);
        let direct = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((kl_bernoulli(0.5, 0.25) - direct).abs() < 1e-15);
        assert!((direct - 0.1438).abs() < 1e-4);
        assert!(kl_bernoulli(0.5, 0.0).is_infinite());
        assert!(kl_bernoulli(0.5, 1.0).is_infinite());
        assert_eq!(kl_bernoulli(0.0, 0.0), 0.0);
        assert!(kl_lower_bound_check(0.5f32, 0.25f32));
    }
}
