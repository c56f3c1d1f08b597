use serde::{Deserialize, Serialize};

/// Two-sided Hoeffding radius for the mean of `trials` values in `[0,1]`
/// at confidence `1 - gamma`: `sqrt(ln(2/γ) / (2·trials))`.
pub fn hoeffding_radius(trials: u64, gamma: f64) -> f64 {
    ((2.0 / gamma).ln() / (2.0 * trials as f64)).sqrt()
}

/// A Monte Carlo probability estimate with its Hoeffding confidence radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub estimate: f64,
    pub radius: f64,
    pub trials: u64,
    pub gamma: f64,
}

impl EstimateWithCI {
    pub fn from_mean(estimate: f64, trials: u64, gamma: f64) -> Self {
        Self { estimate, radius: hoeffding_radius(trials, gamma), trials, gamma }
    }

    /// Fraction `hits / trials`.
    pub fn from_counts(hits: u64, trials: u64, gamma: f64) -> Self {
        Self::from_mean(hits as f64 / trials as f64, trials, gamma)
    }

    pub fn lower(&self) -> f64 {
        self.estimate - self.radius
    }

    pub fn upper(&self) -> f64 {
        self.estimate + self.radius
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.estimate - value).abs() <= self.radius
    }
}
