use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};

/// Joint law of `(U, V)` with `U` finite and `V` a bit: `rows[u] = [Pr[u, 0], Pr[u, 1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable<T> {
    rows: Vec<[T; 2]>,
}

impl<T: Scalar> JointTable<T> {
    pub fn new(rows: Vec<[T; 2]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::MalformedTable("no rows".into()));
        }
        if let Some(bad) = rows.iter().flatten().find(|p| p.is_negative()) {
            return Err(Error::MalformedTable(format!("negative entry {bad:?}")));
        }
        let total = sum(rows.iter().flatten().cloned());
        let gap = (total.clone() - T::one()).abs();
        if gap > T::rounding_slack() {
            return Err(Error::MalformedTable(format!("entries sum to {total:?}")));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[[T; 2]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The majority-vote rule for `V` given `U` and its error.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleBitBayes<T> {
    /// Prediction for each value of `U`.
    pub rule: Vec<bool>,
    pub error: T,
}

/// Predicts the more likely bit for each `u` (ties predict 1). The error is
/// `Σ_u min(Pr[u, 0], Pr[u, 1])`, the least achievable on this table.
pub fn bayes_bit_predictor<T: Scalar>(joint: &JointTable<T>) -> SingleBitBayes<T> {
    let rule: Vec<bool> = joint.rows.iter().map(|[p0, p1]| p1 >= p0).collect();
    let error = predictor_error(joint, &rule).expect("rule matches table");
    SingleBitBayes { rule, error }
}

/// `Pr[V ≠ rule(U)]`.
pub fn predictor_error<T: Scalar>(joint: &JointTable<T>, rule: &[bool]) -> Result<T> {
    if rule.len() != joint.len() {
        return Err(Error::DimensionMismatch { expected: joint.len(), found: rule.len() });
    }
    Ok(sum(joint.rows.iter().zip(rule).map(|([p0, p1], &r)| if r { p0.clone() } else { p1.clone() })))
}
