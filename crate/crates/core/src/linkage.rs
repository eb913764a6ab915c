//! Linkages of nail intervals and their pure sublinkages.
//!
//! Two intervals with distinct endpoints, the first starting earlier, are in
//! series (`l1 < r1 < l2 < r2`), nested (`l1 < l2 < r2 < r1`) or crossing
//! (`l1 < l2 < r1 < r2`). A linkage is pure when all its pairs share one
//! class.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkageError {
    #[error("intervals[{0}]: left end must be below right end")]
    Reversed(usize),
    #[error("endpoint {0} is used twice")]
    SharedEndpoint(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PurityClass {
    Series,
    Nested,
    Crossing,
}

impl fmt::Display for PurityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PurityClass::Series => "series",
            PurityClass::Nested => "nested",
            PurityClass::Crossing => "crossing",
        })
    }
}

pub type Interval = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub intervals: Vec<Interval>,
}

impl Linkage {
    /// Checks `left < right` and that all endpoints are distinct.
    pub fn new(intervals: Vec<Interval>) -> Result<Self, LinkageError> {
        let mut ends = Vec::with_capacity(2 * intervals.len());
        for (i, &(l, r)) in intervals.iter().enumerate() {
            if l >= r {
                return Err(LinkageError::Reversed(i));
            }
            ends.extend([l, r]);
        }
        ends.sort_unstable();
        if let Some(w) = ends.windows(2).find(|w| w[0] == w[1]) {
            return Err(LinkageError::SharedEndpoint(w[0]));
        }
        Ok(Linkage { intervals })
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// The common class of all pairs, if there is one. Linkages with fewer
    /// than two intervals are reported as series.
    pub fn purity(&self) -> Option<PurityClass> {
        let mut class = None;
        for (i, &p) in self.intervals.iter().enumerate() {
            for &q in &self.intervals[i + 1..] {
                let c = classify_pair(p, q).ok()?;
                if class.is_some_and(|k| k != c) {
                    return None;
                }
                class = Some(c);
            }
        }
        Some(class.unwrap_or(PurityClass::Series))
    }
}

pub fn classify_pair(p: Interval, q: Interval) -> Result<PurityClass, LinkageError> {
    let (a, b) = if p.0 < q.0 { (p, q) } else { (q, p) };
    for x in [a.0, a.1] {
        if x == b.0 || x == b.1 {
            return Err(LinkageError::SharedEndpoint(x));
        }
    }
    Ok(if a.1 < b.0 {
        PurityClass::Series
    } else if b.1 < a.1 {
        PurityClass::Nested
    } else {
        PurityClass::Crossing
    })
}

/// Indices of a longest strictly increasing subsequence of `keys`.
fn longest_increasing(keys: &[i64]) -> Vec<usize> {
    // tails[k]: index ending the best subsequence of length k+1.
    let mut tails: Vec<usize> = Vec::new();
    let mut parent = vec![usize::MAX; keys.len()];
    for i in 0..keys.len() {
        let pos = tails.partition_point(|&t| keys[t] < keys[i]);
        if pos > 0 {
            parent[i] = tails[pos - 1];
        }
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(i);
        cur = (parent[i] != usize::MAX).then(|| parent[i]);
    }
    out.reverse();
    out
}

fn series(sorted: &[Interval]) -> Vec<Interval> {
    let mut by_right = sorted.to_vec();
    by_right.sort_by_key(|&(_, r)| r);
    let mut out: Vec<Interval> = Vec::new();
    for iv in by_right {
        if out.last().is_none_or(|last| last.1 < iv.0) {
            out.push(iv);
        }
    }
    out
}

fn nested(sorted: &[Interval]) -> Vec<Interval> {
    let keys: Vec<i64> = sorted.iter().map(|&(_, r)| -r).collect();
    longest_increasing(&keys).into_iter().map(|i| sorted[i]).collect()
}

/// Pairwise crossing sets are not a chain of one order: besides increasing
/// lefts and rights, every left must precede the first right. So the first
/// member is fixed in turn and the rest is a longest increasing run of
/// rights among the intervals crossing it from the right.
fn crossing(sorted: &[Interval]) -> Vec<Interval> {
    let mut best: Vec<Interval> = Vec::new();
    for (i, &first) in sorted.iter().enumerate() {
        let cands: Vec<Interval> =
            sorted[i + 1..].iter().copied().filter(|&(l, r)| l < first.1 && first.1 < r).collect();
        if cands.len() < best.len() {
            continue;
        }
        let keys: Vec<i64> = cands.iter().map(|&(_, r)| r).collect();
        let mut run = vec![first];
        run.extend(longest_increasing(&keys).into_iter().map(|k| cands[k]));
        if run.len() > best.len() {
            best = run;
        }
    }
    best
}

/// A largest pure subset, with ties going to series, then nested, then
/// crossing. Members are listed by left end.
pub fn max_pure_sublinkage(l: &Linkage) -> (PurityClass, Linkage) {
    let mut sorted = l.intervals.clone();
    sorted.sort_unstable();
    let mut best = (PurityClass::Series, series(&sorted));
    for (class, found) in [(PurityClass::Nested, nested(&sorted)), (PurityClass::Crossing, crossing(&sorted))] {
        if found.len() > best.1.len() {
            best = (class, found);
        }
    }
    let mut intervals = best.1;
    intervals.sort_unstable();
    (best.0, Linkage { intervals })
}
