//! Shattering checks and brute-force VC dimension.

use std::collections::HashSet;

use super::class::ConceptClass;
use super::point::{words_for, Point, WORD_BITS};
use crate::distributions::rng::RngSeed;
use crate::error::{invalid, Error, Result};

/// Exhaustive shatter checks enumerate `2^|S|` patterns.
pub const MAX_SHATTER_POINTS: usize = 30;

/// Largest dimension for which [`full_universe`] enumerates the cube.
pub const MAX_FULL_UNIVERSE_DIM: usize = 20;

/// The `⌊log₂ n⌋` points shattered by `C_n`.
///
/// Point `x_i` (1-based `i`) has coordinate `j` (1-based) equal to bit `i`
/// of `j - 1`, counting bit 1 as the least significant. Concept `c_{k+1}`
/// then labels the set with the binary digits of `k`.
pub fn build_shattered_set(n: usize) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(invalid("n", "need n >= 2"));
    }
    let d = n.ilog2() as usize;
    Ok((0..d)
        .map(|bit| {
            let mut x = Point::zeros(n);
            for j0 in 0..n {
                if (j0 >> bit) & 1 == 1 {
                    x.set(j0, true);
                }
            }
            x
        })
        .collect())
}

/// Label pattern of every concept on `points`: bit `s` of entry `k` is
/// concept `k` evaluated at `points[s]`.
fn traces(class: &ConceptClass, points: &[Point]) -> Result<Vec<u32>> {
    let mut out = vec![0u32; class.len()];
    match class {
        ConceptClass::Projections(c) => {
            for (s, x) in points.iter().enumerate() {
                x.check_dim(c.dimension())?;
                for k in x.ones() {
                    out[k] |= 1 << s;
                }
            }
        }
        ConceptClass::Table(t) => {
            let cols = points.iter().map(|x| t.domain_index(x)).collect::<Result<Vec<_>>>()?;
            for (k, slot) in out.iter_mut().enumerate() {
                let mask = t.mask(k);
                *slot = cols.iter().enumerate().fold(0, |acc, (s, &j)| acc | ((((mask >> j) & 1) as u32) << s));
            }
        }
    }
    Ok(out)
}

/// `true` iff every labeling of `points` is realized by some concept.
pub fn is_shattered(class: &ConceptClass, points: &[Point]) -> Result<bool> {
    if points.len() > MAX_SHATTER_POINTS {
        return Err(Error::TooManyPoints(points.len()));
    }
    let patterns = traces(class, points)?;
    let needed = 1usize << points.len();
    if needed > patterns.len() {
        return Ok(false);
    }
    let mut seen = vec![0u64; words_for(needed)];
    let mut distinct = 0usize;
    for p in patterns {
        let (w, b) = (p as usize / WORD_BITS, p as usize % WORD_BITS);
        if seen[w] >> b & 1 == 0 {
            seen[w] |= 1 << b;
            distinct += 1;
        }
    }
    Ok(distinct == needed)
}

/// Every point of `{0,1}^n`, in binary-counting order.
pub fn full_universe(n: usize) -> Result<Vec<Point>> {
    if n > MAX_FULL_UNIVERSE_DIM {
        return Err(Error::DomainTooLarge { size: n, limit: MAX_FULL_UNIVERSE_DIM });
    }
    Ok((0..1u64 << n).map(|v| Point::from_index(n, v)).collect())
}

/// Candidate universe for large `n`: the constructive shattered set plus
/// `extra` uniformly random points.
pub fn default_universe(n: usize, extra: usize, seed: RngSeed) -> Result<Vec<Point>> {
    let mut points = build_shattered_set(n)?;
    let uniform = crate::distributions::ProductDistribution::new(vec![0.5f64; n])?;
    points.extend(crate::distributions::sample_points(&uniform, extra, seed));
    Ok(points)
}

/// Size of the largest subset of `universe` shattered by `class`, capped
/// at `d_max`.
///
/// Depth-first search over subsets in universe order. A branch is cut when
/// some label cell holds fewer concepts than the remaining levels need
/// (`2^(target - |S|)`), which is necessary for shattering; subsets of
/// non-shattered sets are never extended. The search is therefore exact
/// over the supplied universe.
pub fn vc_dimension_bruteforce(class: &ConceptClass, universe: &[Point], d_max: usize) -> Result<usize> {
    if universe.is_empty() {
        return Err(Error::EmptyUniverse);
    }
    let mut points = universe.to_vec();
    points.sort();
    points.dedup();

    // Column `u` holds the values of every concept at points[u].
    let n_concepts = class.len();
    let columns: Vec<Vec<u64>> = points
        .iter()
        .map(|x| {
            let mut col = vec![0u64; words_for(n_concepts)];
            for (k, id) in class.ids().enumerate() {
                if class.eval(id, x)? {
                    col[k / WORD_BITS] |= 1 << (k % WORD_BITS);
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;

    let distinct: HashSet<Vec<bool>> =
        (0..n_concepts).map(|k| columns.iter().map(|c| c[k / WORD_BITS] >> (k % WORD_BITS) & 1 == 1).collect()).collect();
    let upper = d_max.min(points.len()).min(distinct.len().max(1).ilog2() as usize);

    let root: Vec<u32> = (0..n_concepts as u32).collect();
    for target in (1..=upper).rev() {
        if extend(&columns, vec![root.clone()], 0, target) {
            return Ok(target);
        }
    }
    Ok(0)
}

fn extend(columns: &[Vec<u64>], cells: Vec<Vec<u32>>, start: usize, remaining: usize) -> bool {
    if remaining == 0 {
        return true;
    }
    let need = 1usize << (remaining - 1);
    'points: for u in start..columns.len() {
        let col = &columns[u];
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in &cells {
            let (ones, zeros): (Vec<u32>, Vec<u32>) =
                cell.iter().partition(|&&k| col[k as usize / WORD_BITS] >> (k as usize % WORD_BITS) & 1 == 1);
            if ones.len() < need || zeros.len() < need {
                continue 'points;
            }
            next.push(ones);
            next.push(zeros);
        }
        if extend(columns, next, u + 1, remaining - 1) {
            return true;
        }
    }
    false
}
