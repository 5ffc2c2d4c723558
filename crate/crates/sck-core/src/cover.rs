//! Occurrences of Mon inside host words, maximal occurrences, the chart, and
//! minimal coverings (MinCov).
//!
//! Because Mon is closed under taking subwords, the match lengths at a fixed
//! start position form a contiguous range, every occurrence is contained in
//! the longest occurrence at its start, and clipping an occurrence to a
//! window of the host yields another occurrence. Those three facts drive the
//! linear maximality sweep and make the greedy interval cover exact.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::measure::{lambda, MeasureVariant, PieceTable, PieceVerdict};
use crate::relset::RelSet;
use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("the product W1*W2 cancels at the junction; covering bounds are only meaningful for no-cancellation products")]
    JunctionCancellation,
}

/// A positioned subword of a host word that belongs to Mon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub start: usize,
    pub length: usize,
    pub word: Word,
}

impl Occurrence {
    /// One past the last host position covered.
    pub fn end(&self) -> usize {
        self.start + self.length
    }

    /// Whether `other` lies within this occurrence.
    pub fn contains(&self, other: &Occurrence) -> bool {
        self.start <= other.start && other.end() <= self.end()
    }
}

/// Every nonempty occurrence of a Mon member in `a`, sorted by start then
/// length.
pub fn occurrences(a: &Word, rs: &RelSet) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for start in 0..a.len() {
        let max = rs.mon_prefix_len(&a.letters()[start..]);
        for length in 1..=max {
            out.push(Occurrence {
                start,
                length,
                word: a.subword(start, start + length),
            });
        }
    }
    out
}

/// The occurrences contained in no other occurrence, sorted by start.
///
/// Only the longest occurrence at each start can be maximal, and it is
/// maximal exactly when it reaches past every earlier occurrence's end.
pub fn maximal_occurrences(a: &Word, rs: &RelSet) -> Vec<Occurrence> {
    let mut out: Vec<Occurrence> = Vec::new();
    let mut best_end = 0;
    for start in 0..a.len() {
        let max = rs.mon_prefix_len(&a.letters()[start..]);
        if max == 0 {
            continue;
        }
        let end = start + max;
        if end > best_end {
            out.push(Occurrence {
                start,
                length: max,
                word: a.subword(start, end),
            });
            best_end = end;
        }
    }
    out
}

/// Maximal occurrences of a host word together with the subset whose measure
/// reaches the table's τ (the chart).
#[derive(Debug, Clone)]
pub struct Chart {
    pub host: Word,
    pub maximal_occurrences: Vec<Occurrence>,
    pub chart_members: Vec<Occurrence>,
    pub variant: MeasureVariant,
}

impl Chart {
    pub fn is_empty(&self) -> bool {
        self.chart_members.is_empty()
    }

    /// Count of chart members. This is only a coarse proxy for finer chart
    /// statistics (virtual occurrences) that this library does not model;
    /// consumers must treat it as nothing more than the member count.
    pub fn nvirt_proxy(&self) -> usize {
        self.chart_members.len()
    }
}

/// Builds the chart of `a`: maximal occurrences whose piece measure (per
/// `variant`) is at least `pt.tau()`.
pub fn chart(a: &Word, pt: &PieceTable, rs: &RelSet, variant: MeasureVariant) -> Chart {
    let maximal = maximal_occurrences(a, rs);
    let tau = pt.tau();
    let chart_members = maximal
        .iter()
        .filter(|o| match lambda(&o.word, pt, variant) {
            crate::measure::LambdaValue::Finite(t) => t >= tau,
            crate::measure::LambdaValue::Infinite => true,
        })
        .cloned()
        .collect();
    Chart {
        host: a.clone(),
        maximal_occurrences: maximal,
        chart_members,
        variant,
    }
}

/// A minimal covering of the Mon-covered letters of a host word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub host: Word,
    /// Host positions lying inside at least one occurrence.
    pub covered_letter_positions: BTreeSet<usize>,
    pub min_cov: usize,
    /// A minimum-cardinality selection of maximal occurrences covering every
    /// covered position.
    pub witness: Vec<Occurrence>,
}

/// Computes MinCov: the least number of maximal occurrences covering every
/// host letter that lies in some occurrence.
///
/// Greedy sweep — repeatedly take the occurrence reaching furthest right past
/// the leftmost uncovered position — is optimal for interval covering.
pub fn min_cov(a: &Word, rs: &RelSet) -> CoverReport {
    let maximal = maximal_occurrences(a, rs);
    let covered: BTreeSet<usize> = maximal
        .iter()
        .flat_map(|o| o.start..o.end())
        .collect();
    let mut witness: Vec<Occurrence> = Vec::new();
    let mut cursor = covered.iter().next().copied();
    while let Some(pos) = cursor {
        // Every covered position lies in some maximal occurrence, so the pick
        // below always exists; ties resolve to the earliest list entry.
        let pick = maximal
            .iter()
            .filter(|o| o.start <= pos && pos < o.end())
            .max_by_key(|o| o.end())
            .expect("covered position must lie in a maximal occurrence")
            .clone();
        let reach = pick.end();
        witness.push(pick);
        cursor = covered.range(reach..).next().copied();
    }
    CoverReport {
        host: a.clone(),
        covered_letter_positions: covered,
        min_cov: witness.len(),
        witness,
    }
}

/// Outcome of [`min_cov_bounds_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCovBounds {
    pub min_cov_w1: usize,
    pub min_cov_w2: usize,
    pub min_cov_product: usize,
    /// MinCov(W₁) + MinCov(W₂) − 1 ≤ MinCov(W₁W₂)
    pub lower_holds: bool,
    /// MinCov(W₁W₂) ≤ MinCov(W₁) + MinCov(W₂)
    pub upper_holds: bool,
    pub subwords_checked: usize,
    /// Subwords of W₁W₂ whose MinCov exceeds the product's (always empty for
    /// a correct implementation; Mon subword-closure guarantees monotonicity).
    pub subword_violations: Vec<Word>,
}

impl MinCovBounds {
    pub fn all_hold(&self) -> bool {
        self.lower_holds && self.upper_holds && self.subword_violations.is_empty()
    }
}

/// Evaluates both covering inequalities for a no-cancellation product W₁W₂
/// and spot-checks that MinCov never increases on subwords. Subwords are
/// enumerated exhaustively for short products and sampled (seeded) otherwise.
pub fn min_cov_bounds_check(
    w1: &Word,
    w2: &Word,
    rs: &RelSet,
    seed: u64,
) -> Result<MinCovBounds, CoverError> {
    let (product, cancelled) = w1.mul(w2);
    if cancelled > 0 {
        return Err(CoverError::JunctionCancellation);
    }
    let m1 = min_cov(w1, rs).min_cov;
    let m2 = min_cov(w2, rs).min_cov;
    let m12 = min_cov(&product, rs).min_cov;
    let mut subword_violations = Vec::new();
    let mut checked = 0;
    let mut check = |i: usize, j: usize| {
        let sub = product.subword(i, j);
        checked += 1;
        if min_cov(&sub, rs).min_cov > m12 {
            subword_violations.push(sub);
        }
    };
    let n = product.len();
    if n <= 16 {
        for i in 0..=n {
            for j in i..=n {
                check(i, j);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..64 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(i + 1..=n);
            check(i, j);
        }
    }
    Ok(MinCovBounds {
        min_cov_w1: m1,
        min_cov_w2: m2,
        min_cov_product: m12,
        lower_holds: m1 + m2 <= m12 + 1,
        upper_holds: m12 <= m1 + m2,
        subwords_checked: checked,
        subword_violations,
    })
}

/// Adjacent maximal occurrences may overlap only in a small piece; returns
/// every adjacent overlapping pair whose overlap has a definite non-piece
/// verdict (a presentation anomaly).
pub fn overlap_anomalies(
    a: &Word,
    pt: &PieceTable,
    rs: &RelSet,
) -> Vec<(Occurrence, Occurrence, Word)> {
    let maximal = maximal_occurrences(a, rs);
    let mut anomalies = Vec::new();
    for pair in maximal.windows(2) {
        if pair[1].start < pair[0].end() {
            let overlap = a.subword(pair[1].start, pair[0].end());
            if pt.verdict(&overlap) == PieceVerdict::NotPiece {
                anomalies.push((pair[0].clone(), pair[1].clone(), overlap));
            }
        }
    }
    anomalies
}
