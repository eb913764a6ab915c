//! Reduction from A-paths of weight γ to A-paths of weight 0.
//!
//! Edges inside `A` are handled combinatorially: those of weight γ are
//! single-edge γ-paths (matched and covered exactly), the rest can
//! never lie on a γ-path. Once no edge joins two terminals, every A-path has
//! exactly two edges at `A`, so adding δ with `2δ = -γ` to those edges
//! shifts every A-path weight by exactly `-γ`.

use crate::graph::{enumerate_a_paths, GraphError, LabelledGraph};
use crate::group::{halve_negate, GroupElement, GroupError};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no δ with 2δ = -{0} exists in this group")]
    NoDelta(GroupElement),
    #[error("edge {0} still joins two vertices of A")]
    TerminalEdge(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone)]
pub struct Pruned {
    /// Input without any edge joining two terminals.
    pub graph: LabelledGraph,
    /// Input edge indices of all removed A-A edges.
    pub removed: Vec<usize>,
    /// A maximum matching among the A-A edges of weight γ (input indices).
    pub matching: Vec<usize>,
    /// A minimum vertex set meeting every A-A edge of weight γ.
    pub cover: Vec<usize>,
}

fn max_matching(edges: &[(usize, usize)], used: &mut Vec<usize>, chosen: &mut Vec<usize>, best: &mut Vec<usize>, from: usize) {
    if chosen.len() + (edges.len() - from) <= best.len() {
        return;
    }
    if from == edges.len() {
        *best = chosen.clone();
        return;
    }
    let (u, v) = edges[from];
    if !used.contains(&u) && !used.contains(&v) {
        used.extend([u, v]);
        chosen.push(from);
        max_matching(edges, used, chosen, best, from + 1);
        chosen.pop();
        used.truncate(used.len() - 2);
    }
    max_matching(edges, used, chosen, best, from + 1);
}

fn min_vertex_cover(edges: &[(usize, usize)], chosen: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
    if best.as_ref().is_some_and(|b| chosen.len() >= b.len()) {
        return;
    }
    let Some(&(u, v)) = edges.iter().find(|(u, v)| !chosen.contains(u) && !chosen.contains(v)) else {
        *best = Some(chosen.clone());
        return;
    };
    for x in [u, v] {
        chosen.push(x);
        min_vertex_cover(edges, chosen, best);
        chosen.pop();
    }
}

/// Drops every edge inside `A`, recording a maximum matching and a minimum
/// vertex cover of those with label `target`. Both are exhaustive searches.
pub fn prune_and_match(g: &LabelledGraph, target: &GroupElement) -> Result<Pruned, ReductionError> {
    g.group().check(target)?;
    let inside: Vec<usize> =
        (0..g.edges().len()).filter(|&i| g.is_in_a(g.edge(i).u) && g.is_in_a(g.edge(i).v)).collect();
    let gamma: Vec<usize> = inside.iter().copied().filter(|&i| g.edge(i).label == *target).collect();
    let pairs: Vec<(usize, usize)> = gamma.iter().map(|&i| (g.edge(i).u, g.edge(i).v)).collect();
    let mut best = Vec::new();
    max_matching(&pairs, &mut Vec::new(), &mut Vec::new(), &mut best, 0);
    let mut cover = None;
    min_vertex_cover(&pairs, &mut Vec::new(), &mut cover);
    let mut cover = cover.unwrap_or_default();
    cover.sort_unstable();
    let graph = g.rebuild(&g.a_set(), |i, e| (!inside.contains(&i)).then(|| e.label.clone()))?;
    Ok(Pruned { graph, removed: inside, matching: best.iter().map(|&k| gamma[k]).collect(), cover })
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub h: LabelledGraph,
    pub delta: GroupElement,
    pub removed_a_edges: Vec<usize>,
    pub a_matching: Vec<usize>,
    pub a_cover: Vec<usize>,
}

/// Adds δ (with `2δ = -target`) to every edge with exactly one end in `A`.
/// The input must have no edge inside `A`.
pub fn gamma_to_zero(g: &LabelledGraph, target: &GroupElement) -> Result<(LabelledGraph, GroupElement), ReductionError> {
    if let Some(i) = (0..g.edges().len()).find(|&i| g.is_in_a(g.edge(i).u) && g.is_in_a(g.edge(i).v)) {
        return Err(ReductionError::TerminalEdge(i));
    }
    let group = g.group();
    let delta = halve_negate(group, target)?.ok_or_else(|| ReductionError::NoDelta(target.clone()))?;
    let h = g.rebuild(&g.a_set(), |_, e| {
        Some(if g.is_in_a(e.u) != g.is_in_a(e.v) { group.add(&e.label, &delta) } else { e.label.clone() })
    })?;
    Ok((h, delta))
}

/// Prunes, then relabels.
pub fn reduce(g: &LabelledGraph, target: &GroupElement) -> Result<ReductionResult, ReductionError> {
    let pruned = prune_and_match(g, target)?;
    let (h, delta) = gamma_to_zero(&pruned.graph, target)?;
    Ok(ReductionResult {
        h,
        delta,
        removed_a_edges: pruned.removed,
        a_matching: pruned.matching,
        a_cover: pruned.cover,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub equal: bool,
    pub discrepancy: Option<String>,
}

/// Compares the multiset of vertex sequences of `target`-weight A-paths of
/// `g` with that of zero-weight A-paths of `h`.
pub fn verify_reduction(g: &LabelledGraph, h: &LabelledGraph, target: &GroupElement) -> Result<ReductionCheck, ReductionError> {
    let mut count: HashMap<Vec<usize>, i64> = HashMap::new();
    for p in enumerate_a_paths(g, Some(target), 0)? {
        *count.entry(p.vertices).or_default() += 1;
    }
    for p in enumerate_a_paths(h, Some(&h.group().zero()), 0)? {
        *count.entry(p.vertices).or_default() -= 1;
    }
    let mut bad: Vec<(&Vec<usize>, &i64)> = count.iter().filter(|(_, &c)| c != 0).collect();
    bad.sort();
    Ok(match bad.first() {
        None => ReductionCheck { equal: true, discrepancy: None },
        Some((seq, &c)) => ReductionCheck {
            equal: false,
            discrepancy: Some(if c > 0 {
                format!("A-path {seq:?} has weight γ in g but is not a zero A-path of h")
            } else {
                format!("A-path {seq:?} is a zero A-path of h but does not have weight γ in g")
            }),
        },
    })
}
