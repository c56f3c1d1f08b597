//! Lazy view of the sample matrix under a product distribution.
//!
//! Entry `(r, j)` is regenerated from the counter-based stream of row `r`,
//! so columns can be tested against the labels without materializing the
//! `m × n` matrix. Results are bit-identical to [`sample_points`].
//!
//! [`sample_points`]: crate::distributions::sample_points

use crate::concepts::{tail_mask, words_for, BitIter, WORD_BITS};
use crate::distributions::rng::stream_u64;
use crate::distributions::{draw_word, ProductDistribution, RngSeed, Thresholds};

/// Below this many live columns a word is refined bit by bit.
const SPARSE_WORD: u32 = 12;

pub(crate) struct LazyColumns<'a> {
    thresholds: &'a Thresholds,
    n: usize,
    /// `(key, label)` per row, label-1 rows first.
    rows: Vec<(u64, bool)>,
}

impl<'a> LazyColumns<'a> {
    /// Rows `0..m` of the sample keyed by `seed`, labeled by column `target`.
    pub(crate) fn new(dist: &'a ProductDistribution<f64>, target: usize, m: usize, seed: RngSeed) -> Self {
        let thresholds = dist.thresholds();
        let mut rows: Vec<(u64, bool)> = (0..m as u64)
            .map(|r| {
                let key = seed.trial(r);
                (key, thresholds.bit(target, stream_u64(key, target as u64)))
            })
            .collect();
        // Rows labeled 1 kill most Bernoulli(ε) columns; AND order is free.
        rows.sort_by_key(|&(_, y)| !y);
        Self { thresholds, n: dist.dimension(), rows }
    }

    pub(crate) fn words(&self) -> usize {
        words_for(self.n)
    }

    #[inline]
    pub(crate) fn entry(&self, row: usize, j: usize) -> bool {
        self.thresholds.bit(j, stream_u64(self.rows[row].0, j as u64))
    }

    /// Columns `64w .. 64w+63` that agree with the labels on every row.
    pub(crate) fn alive_word(&self, w: usize) -> u64 {
        let mut alive = if w + 1 == self.words() { tail_mask(self.n) } else { u64::MAX };
        for &(key, y) in &self.rows {
            if alive == 0 {
                break;
            }
            if alive.count_ones() > SPARSE_WORD {
                let x = draw_word(self.thresholds, self.n, key, w);
                alive &= if y { x } else { !x };
            } else {
                for b in BitIter(alive) {
                    let j = w * WORD_BITS + b;
                    if self.thresholds.bit(j, stream_u64(key, j as u64)) != y {
                        alive &= !(1 << b);
                    }
                }
            }
        }
        alive
    }

    /// Packed `k(x, y)`.
    pub(crate) fn alive_mask(&self) -> Vec<u64> {
        (0..self.words()).map(|w| self.alive_word(w)).collect()
    }

    /// First column consistent with the sample.
    pub(crate) fn first_alive(&self) -> Option<usize> {
        (0..self.words()).find_map(|w| {
            let a = self.alive_word(w);
            (a != 0).then(|| w * WORD_BITS + a.trailing_zeros() as usize)
        })
    }

    /// Rows where column `j` disagrees with the label.
    pub(crate) fn mistakes(&self, j: usize) -> u64 {
        (0..self.rows.len()).filter(|&r| self.entry(r, j) != self.rows[r].1).count() as u64
    }
}
