use super::sample::LabeledSample;
use crate::concepts::{BitIter, ConceptClass, ConceptId, WORD_BITS};
use crate::error::{Error, Result};
use crate::metric_cover::CoverResult;
use crate::scalar::Scalar;

/// Number of sample points where `id` disagrees with the label.
pub fn mistakes(class: &ConceptClass, id: ConceptId, sample: &LabeledSample) -> Result<u64> {
    let mut count = 0;
    for (x, y) in sample.iter() {
        if class.eval(id, x)? != y {
            count += 1;
        }
    }
    Ok(count)
}

/// `err_T(c)`: the fraction of mislabeled sample points; zero on an empty
/// sample.
pub fn empirical_error<T: Scalar>(class: &ConceptClass, id: ConceptId, sample: &LabeledSample) -> Result<T> {
    let wrong = mistakes(class, id, sample)?;
    if sample.is_empty() {
        return Ok(T::zero());
    }
    Ok(T::ratio(wrong, sample.len() as u64))
}

/// Empirical risk minimizer over the whole class; ties go to the lowest
/// index.
pub fn erm(class: &ConceptClass, sample: &LabeledSample) -> Result<ConceptId> {
    if class.is_empty() {
        return Err(Error::EmptyClass);
    }
    match class {
        ConceptClass::Projections(c) => {
            let n = c.dimension();
            let alive = sample.consistent_columns(n)?;
            if let Some(k) = first_set(&alive) {
                return Ok(class.concept(k));
            }
            // Not realizable: count column mismatches directly.
            let mut wrong = vec![0u64; n];
            for (x, y) in sample.iter() {
                for (j, w) in wrong.iter_mut().enumerate() {
                    *w += u64::from(x.get(j) != y);
                }
            }
            Ok(class.concept(argmin(&wrong)))
        }
        ConceptClass::Table(t) => {
            let rows = sample.iter().map(|(x, y)| Ok((t.domain_index(x)?, y))).collect::<Result<Vec<_>>>()?;
            let mut best = (u64::MAX, 0);
            for k in 0..t.len() {
                let mask = t.mask(k);
                let wrong = rows.iter().filter(|&&(j, y)| ((mask >> j) & 1 == 1) != y).count() as u64;
                if wrong < best.0 {
                    best = (wrong, k);
                    if wrong == 0 {
                        break;
                    }
                }
            }
            Ok(class.concept(best.1))
        }
    }
}

/// Minimizes empirical error over the cover members; ties go to the
/// lowest concept index.
pub fn cover_learner<T: Scalar>(cover: &CoverResult<T>, class: &ConceptClass, sample: &LabeledSample) -> Result<ConceptId> {
    let mut best: Option<(u64, ConceptId)> = None;
    for &member in &cover.members {
        let wrong = mistakes(class, member, sample)?;
        if best.is_none_or(|(w, id)| wrong < w || (wrong == w && member < id)) {
            best = Some((wrong, member));
        }
    }
    best.map(|(_, id)| id).ok_or(Error::EmptyCover)
}

pub(crate) fn first_set(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * WORD_BITS + w.trailing_zeros() as usize)
}

pub(crate) fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| BitIter(w).map(move |b| i * WORD_BITS + b))
}

fn argmin(values: &[u64]) -> usize {
    values.iter().enumerate().min_by_key(|&(i, v)| (*v, i)).map(|(i, _)| i).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{Point, TableClass};
    use crate::distributions::ProductDistribution;
    use crate::metric_cover::small_cover;
    use num_rational::BigRational;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn sample(rows: &[(&str, bool)]) -> LabeledSample {
        LabeledSample::new(rows.iter().map(|(p, _)| pt(p)).collect(), rows.iter().map(|r| r.1).collect()).unwrap()
    }

    #[test]
    fn empirical_error_examples() {
        let c4 = ConceptClass::projections(4).unwrap();
        let t = sample(&[("0100", true), ("1000", true)]);
        assert_eq!(empirical_error::<BigRational>(&c4, ConceptId::projection(2), &t).unwrap(), BigRational::ratio(1, 2));
        let own = LabeledSample::labeled_by(&c4, ConceptId::projection(3), vec![pt("0010"), pt("1101")]).unwrap();
        assert_eq!(empirical_error::<f64>(&c4, ConceptId::projection(3), &own).unwrap(), 0.0);
        let flipped = LabeledSample::new(own.points().to_vec(), own.labels().iter().map(|b| !b).collect()).unwrap();
        assert_eq!(empirical_error::<f64>(&c4, ConceptId::projection(3), &flipped).unwrap(), 1.0);
        assert_eq!(empirical_error::<f64>(&c4, ConceptId::projection(3), &LabeledSample::default()).unwrap(), 0.0);
    }

    #[test]
    fn erm_examples() {
        let c3 = ConceptClass::projections(3).unwrap();
        assert_eq!(erm(&c3, &sample(&[("101", true)])).unwrap(), ConceptId::projection(1));
        assert_eq!(erm(&c3, &LabeledSample::default()).unwrap(), ConceptId::projection(1));
        // Not realizable: c_2 misses once, the others twice.
        let t = sample(&[("010", true), ("101", false), ("011", false)]);
        assert_eq!(erm(&c3, &t).unwrap(), ConceptId::projection(2));
    }

    #[test]
    fn erm_on_tables() {
        let domain = vec![pt("00"), pt("01"), pt("10")];
        let class = ConceptClass::Table(TableClass::from_strings(domain, &["000", "110", "011"]).unwrap());
        let t = sample(&[("01", true), ("10", true)]);
        assert_eq!(erm(&class, &t).unwrap(), ConceptId::table(3));
        let empty = ConceptClass::Table(TableClass::new(vec![pt("0")], vec![]).unwrap());
        assert_eq!(erm(&empty, &t), Err(Error::EmptyClass));
    }

    #[test]
    fn cover_learner_examples() {
        let n = 10;
        let p = ProductDistribution::pne(n, 0.05, 4).unwrap();
        let cover = small_cover(&p).unwrap();
        let class = ConceptClass::projections(n).unwrap();
        assert_eq!(cover_learner(&cover, &class, &LabeledSample::default()).unwrap(), ConceptId::projection(1));
        // Column 1 disagrees with column 4 in the only row.
        let t = LabeledSample::labeled_by(&class, ConceptId::projection(4), vec![pt("0001000000")]).unwrap();
        assert_eq!(cover_learner(&cover, &class, &t).unwrap(), ConceptId::projection(4));
        let empty = CoverResult { members: vec![], level: 0.1, certificate: None };
        assert_eq!(cover_learner(&empty, &class, &t), Err(Error::EmptyCover));
    }
}
