use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::posterior::{bayes_posterior_predict, PosteriorState};
use super::sample::LabeledSample;
use crate::concepts::{ConceptClass, ConceptId, Point};
use crate::distributions::FiniteSupportDistribution;
use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};

/// Output of a learner: a total map from points to bits.
#[derive(Debug, Clone, PartialEq)]
pub enum Predictor<T> {
    /// A member of the class.
    Concept(ConceptId),
    /// Sample labels on seen points, `default` elsewhere.
    Memorized { table: HashMap<Point, bool>, default: bool },
    /// The posterior threshold rule.
    Posterior(PosteriorState<T>),
}

impl<T: Scalar> Predictor<T> {
    /// `class` is consulted only by the `Concept` variant.
    pub fn predict(&self, class: &ConceptClass, x: &Point) -> Result<bool> {
        match self {
            Predictor::Concept(id) => class.eval(*id, x),
            Predictor::Memorized { table, default } => Ok(table.get(x).copied().unwrap_or(*default)),
            Predictor::Posterior(state) => bayes_posterior_predict(state, x),
        }
    }

    /// Exact `d_P(self, target)` by enumerating the support.
    pub fn disagreement(&self, class: &ConceptClass, target: ConceptId, dist: &FiniteSupportDistribution<T>) -> Result<T> {
        let mut terms = Vec::new();
        for (x, p) in dist.support().iter().zip(dist.probs()) {
            if self.predict(class, x)? != class.eval(target, x)? {
                terms.push(p.clone());
            }
        }
        Ok(sum(terms))
    }
}

/// Memorizes a self-consistent sample and answers `default` off it.
pub fn consistent_memorizer<T>(sample: &LabeledSample, default: bool) -> Result<Predictor<T>> {
    if let Some(x) = sample.first_conflict() {
        return Err(Error::NotSelfConsistent(x.to_string()));
    }
    let table = sample.iter().map(|(x, y)| (x.clone(), y)).collect();
    Ok(Predictor::Memorized { table, default })
}

/// Learner selector used in experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Erm,
    Cover,
    BayesPosterior,
    Memorizer,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 4] = [LearnerKind::Erm, LearnerKind::Cover, LearnerKind::BayesPosterior, LearnerKind::Memorizer];

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Erm => "erm",
            LearnerKind::Cover => "cover",
            LearnerKind::BayesPosterior => "bayes-posterior",
            LearnerKind::Memorizer => "memorizer",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown learner {s:?}; expected erm, cover, bayes-posterior or memorizer")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{full_universe, TableClass};
    use num_rational::BigRational;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn memorizer_examples() {
        let t = LabeledSample::new(vec![pt("01"), pt("10"), pt("01")], vec![true, false, true]).unwrap();
        let class = ConceptClass::projections(2).unwrap();
        let m: Predictor<f64> = consistent_memorizer(&t, false).unwrap();
        for (x, y) in t.iter() {
            assert_eq!(m.predict(&class, x).unwrap(), y);
        }
        assert!(!m.predict(&class, &pt("11")).unwrap());
        let m1: Predictor<f64> = consistent_memorizer(&t, true).unwrap();
        assert!(m1.predict(&class, &pt("00")).unwrap());

        let bad = LabeledSample::new(vec![pt("01"), pt("01")], vec![true, false]).unwrap();
        assert_eq!(consistent_memorizer::<f64>(&bad, false), Err(Error::NotSelfConsistent("01".into())));
    }

    #[test]
    fn memorizer_error_bounded_by_missing_mass_on_size_eight() {
        let domain = full_universe(3).unwrap();
        let class = ConceptClass::Table(TableClass::all_functions(domain.clone()).unwrap());
        let dist = FiniteSupportDistribution::<BigRational>::weighted(domain.clone(), &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        for target in class.ids() {
            for subset in 0u32..256 {
                let pts: Vec<Point> = (0..8).filter(|j| (subset >> j) & 1 == 1).map(|j| domain[j].clone()).collect();
                let t = LabeledSample::labeled_by(&class, target, pts).unwrap();
                let z = dist.missing_mass(t.points());
                for default in [false, true] {
                    let m = consistent_memorizer(&t, default).unwrap();
                    assert!(m.disagreement(&class, target, &dist).unwrap() <= z);
                }
            }
        }
    }

    #[test]
    fn learner_names_round_trip() {
        for k in LearnerKind::ALL {
            assert_eq!(k.name().parse::<LearnerKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!("bayes".parse::<LearnerKind>().is_err());
    }
}
