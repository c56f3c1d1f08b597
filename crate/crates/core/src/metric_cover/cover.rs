use serde::Serialize;

use super::distance::DistanceOracle;
use crate::concepts::ConceptId;
use crate::distributions::ProductDistribution;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// A packing/cover of a finite class at some level.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult<T> {
    /// Members in scan order (ascending concept index).
    pub members: Vec<ConceptId>,
    pub level: T,
    /// `max_c min_{m ∈ members} d(c, m)`, when computed.
    pub certificate: Option<T>,
}

impl<T: Scalar> CoverResult<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// JSON-friendly view with 1-based member labels.
    pub fn summary(&self) -> CoverSummary {
        CoverSummary {
            members: self.members.iter().map(ConceptId::number).collect(),
            size: self.members.len(),
            level: self.level.to_f64_lossy(),
            certificate: self.certificate.as_ref().map(Scalar::to_f64_lossy),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverSummary {
    pub members: Vec<usize>,
    pub size: usize,
    pub level: f64,
    pub certificate: Option<f64>,
}

/// Greedy maximal packing at `level`, which is also a `level`-cover.
///
/// Concepts are scanned in ascending index order and admitted iff their
/// distance to every current member is strictly greater than `level`. A
/// second pass records the covering radius as the certificate.
pub fn greedy_packing_cover<T: Scalar, O: DistanceOracle<T> + ?Sized>(oracle: &O, level: T) -> Result<CoverResult<T>> {
    if level < T::zero() {
        return Err(invalid("level", format!("{level:?} is negative")));
    }
    let mut members: Vec<ConceptId> = Vec::new();
    for k in 0..oracle.concept_count() {
        let c = oracle.concept(k);
        let mut admit = true;
        for &m in &members {
            if oracle.distance(c, m)? <= level {
                admit = false;
                break;
            }
        }
        if admit {
            members.push(c);
        }
    }
    let certificate = covering_radius(oracle, &members)?;
    Ok(CoverResult { members, level, certificate })
}

/// `max_c min_{m ∈ members} d(c, m)`; `None` when there are no members.
pub fn covering_radius<T: Scalar, O: DistanceOracle<T> + ?Sized>(oracle: &O, members: &[ConceptId]) -> Result<Option<T>> {
    if members.is_empty() {
        return Ok(None);
    }
    let mut worst = T::zero();
    for k in 0..oracle.concept_count() {
        let c = oracle.concept(k);
        let mut best: Option<T> = None;
        for &m in members {
            let d = oracle.distance(c, m)?;
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
        let best = best.expect("members nonempty");
        if best > worst {
            worst = best;
        }
    }
    Ok(Some(worst))
}

/// Checks the packing (`> level` pairwise) and covering (`≤ level`)
/// properties exactly.
pub fn verify_cover<T: Scalar, O: DistanceOracle<T> + ?Sized>(oracle: &O, cover: &CoverResult<T>) -> Result<(bool, bool)> {
    let mut packing = true;
    for (i, &a) in cover.members.iter().enumerate() {
        for &b in &cover.members[i + 1..] {
            if oracle.distance(a, b)? <= cover.level {
                packing = false;
            }
        }
    }
    let covering = match covering_radius(oracle, &cover.members)? {
        Some(r) => r <= cover.level,
        None => oracle.concept_count() == 0,
    };
    Ok((packing, covering))
}

/// The two-member `2ε`-cover `{c_i, c_j}` of `C_n` under `P_i ∈ P_{n,ε}`,
/// with `j` the smallest index other than `i`. Members are returned in
/// ascending order, matching the greedy scan.
pub fn small_cover<T: Scalar>(dist: &ProductDistribution<T>) -> Result<CoverResult<T>> {
    let (eps, i) = dist.pne_params().ok_or_else(|| invalid("dist", "small cover needs a P_{n,eps} member"))?;
    let j = if i == 1 { 2 } else { 1 };
    let mut members = vec![ConceptId::projection(i), ConceptId::projection(j)];
    members.sort();
    let level = eps.clone() + eps.clone();
    // Same operation order as the closed-form metric, so the two agree bit for bit.
    let certificate = if dist.dimension() > 2 {
        eps.clone() * (T::one() - eps.clone()) + (T::one() - eps.clone()) * eps
    } else {
        T::zero()
    };
    Ok(CoverResult { members, level, certificate: Some(certificate) })
}
