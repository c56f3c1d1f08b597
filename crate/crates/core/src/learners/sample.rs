use std::collections::HashMap;

use crate::concepts::{tail_mask, words_for, ConceptClass, ConceptId, Point};
use crate::error::{invalid, Error, Result};

/// `m` labeled examples: the rows of the sample matrix and the label vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledSample {
    points: Vec<Point>,
    labels: Vec<bool>,
}

impl LabeledSample {
    pub fn new(points: Vec<Point>, labels: Vec<bool>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(invalid("labels", format!("{} labels for {} points", labels.len(), points.len())));
        }
        if let Some(first) = points.first() {
            if let Some(p) = points.iter().find(|p| p.len() != first.len()) {
                return Err(Error::DimensionMismatch { expected: first.len(), found: p.len() });
            }
        }
        Ok(Self { points, labels })
    }

    /// Labels `points` with concept `target`.
    pub fn labeled_by(class: &ConceptClass, target: ConceptId, points: Vec<Point>) -> Result<Self> {
        let labels = points.iter().map(|x| class.eval(target, x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { points, labels })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, bool)> {
        self.points.iter().zip(self.labels.iter().copied())
    }

    /// Equal points carry equal labels.
    pub fn is_self_consistent(&self) -> bool {
        self.first_conflict().is_none()
    }

    pub(crate) fn first_conflict(&self) -> Option<&Point> {
        let mut seen: HashMap<&Point, bool> = HashMap::new();
        for (x, y) in self.iter() {
            if *seen.entry(x).or_insert(y) != y {
                return Some(x);
            }
        }
        None
    }

    /// Packed mask of the columns equal to the label vector (the set
    /// `k(x, y)`), for points of dimension `n`.
    pub fn consistent_columns(&self, n: usize) -> Result<Vec<u64>> {
        let mut alive = vec![u64::MAX; words_for(n)];
        if let Some(last) = alive.last_mut() {
            *last = tail_mask(n);
        }
        for (x, y) in self.iter() {
            x.check_dim(n)?;
            for (a, &w) in alive.iter_mut().zip(x.words()) {
                *a &= if y { w } else { !w };
            }
        }
        Ok(alive)
    }
}
