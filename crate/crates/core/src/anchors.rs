//! Anchor vertices of a terminal set `B` and their path weights.
//!
//! A vertex is an anchor when it has three paths to `B \ {v}` that share only
//! `v`. If every B-path has weight 0, all paths from an anchor to `B` carry
//! one common weight of order at most 2; this module checks that claim
//! exhaustively.

use crate::graph::{paths_between, paths_from, terminal_paths, Filter, GraphError, LabelledGraph, PathWitness};
use crate::group::GroupElement;
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnchorError {
    #[error("B is empty")]
    EmptyB,
    #[error("B[{index}]: vertex {id} out of range (vertices = {count})")]
    OutOfRange { index: usize, id: usize, count: usize },
    #[error("hypothesis fails: B-path {:?} has weight {}", .0.vertices, .0.weight)]
    NonZeroBPath(PathWitness),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn b_mask(g: &LabelledGraph, b: &[usize]) -> Result<Vec<bool>, AnchorError> {
    if b.is_empty() {
        return Err(AnchorError::EmptyB);
    }
    let mut mask = vec![false; g.vertex_count()];
    for (index, &id) in b.iter().enumerate() {
        if id >= g.vertex_count() {
            return Err(AnchorError::OutOfRange { index, id, count: g.vertex_count() });
        }
        mask[id] = true;
    }
    Ok(mask)
}

/// Unit-capacity residual network on the split graph: vertex `x` becomes
/// `2x -> 2x+1`, every edge `u-w` gives `2u+1 -> 2w` and `2w+1 -> 2u`.
struct Flow {
    head: Vec<usize>,
    cap: Vec<u8>,
    adj: Vec<Vec<usize>>,
}

impl Flow {
    fn new(nodes: usize) -> Self {
        Flow { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn arc(&mut self, from: usize, to: usize) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(1);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = a;
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut y = t;
        while y != s {
            let a = via[y];
            self.cap[a] -= 1;
            self.cap[a ^ 1] += 1;
            y = self.head[a ^ 1];
        }
        true
    }
}

/// Number of paths from `v` to `B \ {v}` sharing only `v`, capped at `limit`.
/// Paths stop at their first vertex of `B`.
pub fn disjoint_paths_to(g: &LabelledGraph, in_b: &[bool], v: usize, limit: usize) -> usize {
    let n = g.vertex_count();
    let sink = 2 * n;
    let mut f = Flow::new(2 * n + 1);
    for x in 0..n {
        if x == v {
            continue;
        }
        if in_b[x] {
            f.arc(2 * x, sink);
        } else {
            f.arc(2 * x, 2 * x + 1);
        }
    }
    for e in g.edges() {
        for (a, b) in [(e.u, e.v), (e.v, e.u)] {
            if b != v && (a == v || !in_b[a]) {
                f.arc(2 * a + 1, 2 * b);
            }
        }
    }
    let mut flow = 0;
    while flow < limit && f.augment(2 * v + 1, sink) {
        flow += 1;
    }
    flow
}

/// Vertices (inside or outside `B`) with three paths to `B \ {v}` that
/// pairwise share only `v`.
pub fn compute_anchors(g: &LabelledGraph, b: &[usize]) -> Result<Vec<usize>, AnchorError> {
    let mask = b_mask(g, b)?;
    Ok((0..g.vertex_count()).filter(|&v| disjoint_paths_to(g, &mask, v, 3) >= 3).collect())
}

/// The first non-zero B-path, or `None` when every B-path has weight 0.
pub fn verify_all_b_paths_zero(g: &LabelledGraph, b: &[usize]) -> Result<Option<PathWitness>, AnchorError> {
    let mask = b_mask(g, b)?;
    let all = terminal_paths(g, &mask, &Filter::new(None, 0))?;
    Ok(all.into_iter().find(|p| !g.group().is_zero(&p.weight)))
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorConflict {
    pub vertex: usize,
    /// Two paths of different weight, or one path whose weight has order
    /// above 2.
    pub paths: Vec<PathWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnchorReport {
    #[serde(rename = "M")]
    pub m: Vec<usize>,
    /// `(anchor, common weight of its paths to B)`.
    pub weights: Vec<(usize, GroupElement)>,
    pub consistent: bool,
    pub conflict: Option<AnchorConflict>,
}

impl AnchorReport {
    pub fn weight_of(&self, v: usize) -> Option<&GroupElement> {
        self.weights.iter().find(|(x, _)| *x == v).map(|(_, w)| w)
    }
}

enum Anchor {
    Weight(GroupElement),
    Conflict(Vec<PathWitness>),
}

fn anchor_weight(g: &LabelledGraph, mask: &[bool], v: usize) -> Result<Anchor, AnchorError> {
    let mut targets = mask.to_vec();
    targets[v] = false;
    let paths = paths_from(g, v, &targets, &vec![false; g.vertex_count()], &Filter::new(None, 0))?;
    let first = paths.first().expect("anchors reach B").clone();
    if let Some(other) = paths.iter().find(|p| p.weight != first.weight) {
        return Ok(Anchor::Conflict(vec![first, other.clone()]));
    }
    let group = g.group();
    if !group.is_zero(&group.add(&first.weight, &first.weight)) {
        return Ok(Anchor::Conflict(vec![first]));
    }
    Ok(Anchor::Weight(first.weight))
}

/// Checks the B-path hypothesis, computes the anchors and the common weight
/// of each anchor's paths to `B`, using up to `jobs` threads.
pub fn anchor_weights(g: &LabelledGraph, b: &[usize], jobs: usize) -> Result<AnchorReport, AnchorError> {
    if let Some(p) = verify_all_b_paths_zero(g, b)? {
        return Err(AnchorError::NonZeroBPath(p));
    }
    let mask = b_mask(g, b)?;
    let m = compute_anchors(g, b)?;
    let chunk = m.len().div_ceil(jobs.max(1)).max(1);
    let results: Vec<Result<Anchor, AnchorError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = m
            .chunks(chunk)
            .map(|part| {
                let mask = &mask;
                scope.spawn(move || part.iter().map(|&v| anchor_weight(g, mask, v)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("anchor worker panicked")).collect()
    });
    let mut report = AnchorReport { m: m.clone(), weights: Vec::new(), consistent: true, conflict: None };
    for (&v, r) in m.iter().zip(results) {
        match r? {
            Anchor::Weight(w) => report.weights.push((v, w)),
            Anchor::Conflict(paths) => {
                report.consistent = false;
                report.conflict.get_or_insert(AnchorConflict { vertex: v, paths });
            }
        }
    }
    Ok(report)
}

/// For anchors `v`, `w` whose paths to `B` all have weight 0, every simple
/// `v-w` path must have weight 0. Returns the first violation.
pub fn zero_anchor_pairs(
    g: &LabelledGraph,
    report: &AnchorReport,
) -> Result<Option<(usize, usize, PathWitness)>, AnchorError> {
    let zeros: Vec<usize> =
        report.weights.iter().filter(|(_, w)| g.group().is_zero(w)).map(|&(v, _)| v).collect();
    for (i, &v) in zeros.iter().enumerate() {
        for &w in &zeros[i + 1..] {
            let paths = paths_between(g, v, w, &Filter::new(None, 0))?;
            if let Some(p) = paths.into_iter().find(|p| !g.group().is_zero(&p.weight)) {
                return Ok(Some((v, w, p)));
            }
        }
    }
    Ok(None)
}
