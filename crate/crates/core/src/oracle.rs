//! Exact packing (ν) and covering (τ) numbers for weight-filtered A-paths and
//! cycles.
//!
//! Witnesses are enumerated, turned into vertex sets, deduplicated and
//! reduced to the inclusion-minimal ones. A packing of minimal sets can
//! always replace a packing of arbitrary witnesses and a vertex set meets
//! every witness iff it meets every minimal one, so both numbers are
//! unchanged. ν is a maximum set packing and τ a minimum hitting set, both
//! by branch and bound with deterministic branch orders.

use crate::graph::{
    enumerate_a_paths_with, enumerate_cycles_with, Filter, GraphError, LabelledGraph, PathWitness,
    DEFAULT_WITNESS_CAP,
};
use crate::group::GroupElement;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("n = {n}: {reason}")]
    Family { n: usize, reason: String },
    #[error("unknown witness kind {0:?} (expected a-paths or cycles)")]
    Kind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    APaths,
    Cycles,
}

impl FromStr for WitnessKind {
    type Err = OracleError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a-paths" => Ok(WitnessKind::APaths),
            "cycles" => Ok(WitnessKind::Cycles),
            other => Err(OracleError::Kind(other.to_string())),
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::APaths => "a-paths",
            WitnessKind::Cycles => "cycles",
        })
    }
}

/// What to pack and cover.
#[derive(Debug, Clone)]
pub struct Query {
    pub kind: WitnessKind,
    pub weight: GroupElement,
    /// Minimum number of edges; 0 means the kind's default (1 for paths,
    /// 3 for cycles).
    pub min_length: usize,
    pub cap: usize,
    /// Abort a search after this many branch nodes and report the best
    /// values found with `exhaustive = false`.
    pub node_limit: Option<u64>,
}

impl Query {
    pub fn new(kind: WitnessKind, weight: GroupElement) -> Self {
        Query { kind, weight, min_length: 0, cap: DEFAULT_WITNESS_CAP, node_limit: None }
    }

    pub fn min_length(mut self, l: usize) -> Self {
        self.min_length = l;
        self
    }

    fn effective_min_length(&self) -> usize {
        match (self.kind, self.min_length) {
            (WitnessKind::Cycles, 0) => 3,
            (_, l) => l,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub nu: usize,
    pub packing: Vec<PathWitness>,
    pub tau: usize,
    pub cover: Vec<usize>,
    pub exhaustive: bool,
    /// Number of enumerated witnesses before the minimality reduction.
    pub witnesses: usize,
}

/// All target witnesses of the query.
pub fn witnesses(g: &LabelledGraph, q: &Query) -> Result<Vec<PathWitness>, OracleError> {
    let filter = Filter::new(Some(q.weight.clone()), q.effective_min_length()).with_cap(q.cap);
    Ok(match q.kind {
        WitnessKind::APaths => enumerate_a_paths_with(g, &filter)?,
        WitnessKind::Cycles => enumerate_cycles_with(g, &filter)?,
    })
}

/// Fixed-width vertex bitsets stored back to back.
struct Family {
    words: usize,
    data: Vec<u64>,
    /// Index of one witness realising each set.
    origin: Vec<usize>,
}

impl Family {
    fn set(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn len(&self) -> usize {
        self.origin.len()
    }
}

fn popcount(s: &[u64]) -> u32 {
    s.iter().map(|w| w.count_ones()).sum()
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

fn has(s: &[u64], v: usize) -> bool {
    s[v / 64] >> (v % 64) & 1 == 1
}

fn members(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + b)
        })
    })
}

/// Deduplicated, inclusion-minimal vertex sets of the witnesses, in order of
/// first appearance among sets of equal size (sizes ascending).
fn minimal_family(vertex_count: usize, ws: &[PathWitness]) -> Family {
    let words = vertex_count.div_ceil(64).max(1);
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut sets: Vec<(u32, usize, Vec<u64>)> = Vec::new();
    for (i, w) in ws.iter().enumerate() {
        let mut s = vec![0u64; words];
        for &v in &w.vertices {
            s[v / 64] |= 1 << (v % 64);
        }
        if seen.insert(s.clone(), i).is_none() {
            sets.push((popcount(&s), i, s));
        }
    }
    sets.sort_by_key(|&(size, i, _)| (size, i));

    // contains[v]: bitset over kept sets that contain v.
    let mut contains: Vec<Vec<u64>> = vec![Vec::new(); vertex_count];
    let mut fam = Family { words, data: Vec::new(), origin: Vec::new() };
    for (_, origin, s) in sets {
        let kept = fam.len();
        let kw = kept.div_ceil(64);
        // Kept sets avoiding every vertex outside s are subsets of s.
        let mut cand = vec![u64::MAX; kw];
        if !kept.is_multiple_of(64) {
            cand[kw - 1] = (1u64 << (kept % 64)) - 1;
        }
        for v in 0..vertex_count {
            if has(&s, v) {
                continue;
            }
            let c = &contains[v];
            for (k, word) in cand.iter_mut().enumerate() {
                *word &= !c.get(k).copied().unwrap_or(0);
            }
            if cand.iter().all(|&x| x == 0) {
                break;
            }
        }
        if cand.iter().any(|&x| x != 0) {
            continue;
        }
        for v in members(&s) {
            let c = &mut contains[v];
            c.resize(kept / 64 + 1, 0);
            c[kept / 64] |= 1 << (kept % 64);
        }
        fam.data.extend_from_slice(&s);
        fam.origin.push(origin);
    }
    fam
}

struct Budget {
    nodes: u64,
    limit: Option<u64>,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.limit.is_none_or(|l| self.nodes <= l)
    }

    fn exhausted(&self) -> bool {
        self.limit.is_some_and(|l| self.nodes > l)
    }
}

struct Packer<'a> {
    fam: &'a Family,
    a_mask: Option<Vec<u64>>,
    best: Vec<usize>,
    chosen: Vec<usize>,
    budget: Budget,
}

impl Packer<'_> {
    fn bound(&self, cands: &[usize]) -> usize {
        let w = self.fam.words;
        let mut union = vec![0u64; w];
        let mut min_size = u32::MAX;
        for &i in cands {
            let s = self.fam.set(i);
            for (u, x) in union.iter_mut().zip(s) {
                *u |= x;
            }
            min_size = min_size.min(popcount(s));
        }
        let mut b = (popcount(&union) / min_size.max(1)) as usize;
        if let Some(a) = &self.a_mask {
            let ends: u32 = union.iter().zip(a).map(|(x, y)| (x & y).count_ones()).sum();
            b = b.min(ends as usize / 2);
        }
        b.min(cands.len())
    }

    fn search(&mut self, cands: Vec<usize>) {
        if !self.budget.tick() {
            return;
        }
        if cands.is_empty() {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + self.bound(&cands) <= self.best.len() {
            return;
        }
        // Branch on the vertex lying in the fewest candidate sets.
        let mut count: HashMap<usize, usize> = HashMap::new();
        for &i in &cands {
            for v in members(self.fam.set(i)) {
                *count.entry(v).or_default() += 1;
            }
        }
        let v = count.iter().min_by_key(|&(&v, &c)| (c, v)).map(|(&v, _)| v).expect("non-empty");
        let with_v: Vec<usize> = cands.iter().copied().filter(|&i| has(self.fam.set(i), v)).collect();
        for s in with_v {
            let next: Vec<usize> =
                cands.iter().copied().filter(|&i| disjoint(self.fam.set(i), self.fam.set(s))).collect();
            self.chosen.push(s);
            self.search(next);
            self.chosen.pop();
        }
        let next: Vec<usize> = cands.into_iter().filter(|&i| !has(self.fam.set(i), v)).collect();
        self.search(next);
    }
}

struct Coverer<'a> {
    fam: &'a Family,
    best: Vec<usize>,
    chosen: Vec<usize>,
    budget: Budget,
}

impl Coverer<'_> {
    fn allowed(&self, i: usize, forbidden: &[u64]) -> Vec<u64> {
        self.fam.set(i).iter().zip(forbidden).map(|(x, f)| x & !f).collect()
    }

    /// Size of a greedy family of pairwise disjoint allowed parts.
    fn lower_bound(&self, uncovered: &[usize], forbidden: &[u64]) -> usize {
        let mut parts: Vec<Vec<u64>> = uncovered.iter().map(|&i| self.allowed(i, forbidden)).collect();
        parts.sort_by_key(|p| popcount(p));
        let mut used = vec![0u64; self.fam.words];
        let mut k = 0;
        for p in parts {
            if disjoint(&p, &used) {
                for (u, x) in used.iter_mut().zip(&p) {
                    *u |= x;
                }
                k += 1;
            }
        }
        k
    }

    fn search(&mut self, uncovered: Vec<usize>, forbidden: Vec<u64>) {
        if !self.budget.tick() {
            return;
        }
        if uncovered.is_empty() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + self.lower_bound(&uncovered, &forbidden) >= self.best.len() {
            return;
        }
        let part = uncovered
            .iter()
            .map(|&i| self.allowed(i, &forbidden))
            .min_by_key(|p| popcount(p))
            .expect("non-empty");
        if popcount(&part) == 0 {
            return;
        }
        let mut order: Vec<(usize, usize)> = members(&part)
            .map(|v| (uncovered.iter().filter(|&&i| has(self.fam.set(i), v)).count(), v))
            .collect();
        order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut local = forbidden;
        for (_, v) in order {
            let next: Vec<usize> = uncovered.iter().copied().filter(|&i| !has(self.fam.set(i), v)).collect();
            self.chosen.push(v);
            self.search(next, local.clone());
            self.chosen.pop();
            local[v / 64] |= 1 << (v % 64);
        }
    }
}

fn greedy_packing(fam: &Family) -> Vec<usize> {
    let mut used = vec![0u64; fam.words];
    let mut out = Vec::new();
    for i in 0..fam.len() {
        if disjoint(fam.set(i), &used) {
            for (u, x) in used.iter_mut().zip(fam.set(i)) {
                *u |= x;
            }
            out.push(i);
        }
    }
    out
}

fn greedy_cover(fam: &Family, vertex_count: usize) -> Vec<usize> {
    let mut uncovered: Vec<usize> = (0..fam.len()).collect();
    let mut cover = Vec::new();
    while !uncovered.is_empty() {
        let mut count = vec![0usize; vertex_count];
        for &i in &uncovered {
            for v in members(fam.set(i)) {
                count[v] += 1;
            }
        }
        let v = (0..vertex_count).max_by_key(|&v| (count[v], std::cmp::Reverse(v))).expect("vertices");
        cover.push(v);
        uncovered.retain(|&i| !has(fam.set(i), v));
    }
    cover
}

fn pack_family(g: &LabelledGraph, fam: &Family, kind: WitnessKind, limit: Option<u64>) -> (Vec<usize>, bool) {
    let a_mask = (kind == WitnessKind::APaths).then(|| {
        let mut m = vec![0u64; fam.words];
        for v in g.a_set() {
            m[v / 64] |= 1 << (v % 64);
        }
        m
    });
    let mut p = Packer {
        fam,
        a_mask,
        best: greedy_packing(fam),
        chosen: Vec::new(),
        budget: Budget { nodes: 0, limit },
    };
    p.search((0..fam.len()).collect());
    let exhaustive = !p.budget.exhausted();
    let mut best = p.best;
    best.sort_unstable();
    (best, exhaustive)
}

fn cover_family(g: &LabelledGraph, fam: &Family, limit: Option<u64>) -> (Vec<usize>, bool) {
    let mut c = Coverer {
        fam,
        best: greedy_cover(fam, g.vertex_count()),
        chosen: Vec::new(),
        budget: Budget { nodes: 0, limit },
    };
    c.search((0..fam.len()).collect(), vec![0u64; fam.words]);
    let exhaustive = !c.budget.exhausted();
    let mut best = c.best;
    best.sort_unstable();
    (best, exhaustive)
}

/// Maximum number of pairwise vertex-disjoint target witnesses, with one
/// optimal packing.
pub fn max_packing(g: &LabelledGraph, q: &Query) -> Result<(usize, Vec<PathWitness>), OracleError> {
    let ws = witnesses(g, q)?;
    let fam = minimal_family(g.vertex_count(), &ws);
    let (best, _) = pack_family(g, &fam, q.kind, q.node_limit);
    Ok((best.len(), best.iter().map(|&i| ws[fam.origin[i]].clone()).collect()))
}

/// Minimum number of vertices meeting every target witness, with one
/// optimal cover. Terminals may be used.
pub fn min_cover(g: &LabelledGraph, q: &Query) -> Result<(usize, Vec<usize>), OracleError> {
    let ws = witnesses(g, q)?;
    let fam = minimal_family(g.vertex_count(), &ws);
    let (best, _) = cover_family(g, &fam, q.node_limit);
    Ok((best.len(), best))
}

/// Both numbers from one enumeration.
pub fn certify(g: &LabelledGraph, q: &Query) -> Result<Certificate, OracleError> {
    let ws = witnesses(g, q)?;
    let fam = minimal_family(g.vertex_count(), &ws);
    let (packing, pe) = pack_family(g, &fam, q.kind, q.node_limit);
    let (cover, ce) = cover_family(g, &fam, q.node_limit);
    Ok(Certificate {
        nu: packing.len(),
        packing: packing.iter().map(|&i| ws[fam.origin[i]].clone()).collect(),
        tau: cover.len(),
        cover,
        exhaustive: pe && ce,
        witnesses: ws.len(),
    })
}

/// Re-checks a certificate from scratch: the packing is pairwise disjoint
/// and made of valid target witnesses, and deleting the cover leaves none.
pub fn verify_certificate(g: &LabelledGraph, q: &Query, c: &Certificate) -> Result<(), String> {
    let mut used = vec![false; g.vertex_count()];
    for w in &c.packing {
        match q.kind {
            WitnessKind::APaths => crate::graph::check_a_path(g, w)?,
            WitnessKind::Cycles => crate::graph::check_cycle(g, w)?,
        }
        if w.weight != q.weight || w.edges.len() < q.effective_min_length().max(1) {
            return Err("packing member does not match the query".into());
        }
        for &v in &w.vertices {
            if std::mem::replace(&mut used[v], true) {
                return Err(format!("packing members share vertex {v}"));
            }
        }
    }
    let rest = g.without_vertices(&c.cover);
    let left = witnesses(&rest, q).map_err(|e| e.to_string())?;
    if let Some(w) = left.first() {
        return Err(format!("cover misses witness {:?}", w.vertices));
    }
    if c.nu > c.tau {
        return Err(format!("nu = {} exceeds tau = {}", c.nu, c.tau));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub nu: usize,
    pub tau: usize,
    pub runtime_ms: u128,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// ν stays at most 1 while τ grows somewhere in the range.
    CounterexamplePattern,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CounterexamplePattern => "counterexample-pattern",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

pub fn verdict(rows: &[SweepRow]) -> Verdict {
    let bounded = rows.iter().all(|r| r.nu <= 1);
    let grows = rows.windows(2).any(|w| w[1].tau > w[0].tau);
    if bounded && grows {
        Verdict::CounterexamplePattern
    } else {
        Verdict::Inconclusive
    }
}

/// Certifies `build(n)` for every `n` in `ns`, using up to `jobs` threads.
/// Rows come back in the order of `ns`.
pub fn sweep<F>(ns: &[usize], jobs: usize, build: F) -> Result<(Vec<SweepRow>, Verdict), OracleError>
where
    F: Fn(usize) -> Result<(LabelledGraph, Query), String> + Sync,
{
    let run = |n: usize| -> Result<SweepRow, OracleError> {
        let start = Instant::now();
        let (g, q) = build(n).map_err(|reason| OracleError::Family { n, reason })?;
        let c = certify(&g, &q).map_err(|e| OracleError::Family { n, reason: e.to_string() })?;
        Ok(SweepRow { n, nu: c.nu, tau: c.tau, runtime_ms: start.elapsed().as_millis(), exhaustive: c.exhaustive })
    };
    let jobs = jobs.max(1);
    let mut results: Vec<Option<Result<SweepRow, OracleError>>> = vec![None; ns.len()];
    for chunk in (0..ns.len()).collect::<Vec<_>>().chunks(jobs) {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunk.iter().map(|&k| (k, scope.spawn(move || run(ns[k])))).collect();
            for (k, h) in handles {
                results[k] = Some(h.join().expect("sweep worker panicked"));
            }
        });
    }
    let rows = results.into_iter().map(|r| r.expect("every slot filled")).collect::<Result<Vec<_>, _>>()?;
    let v = verdict(&rows);
    Ok((rows, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{counterexample_for, zero_grid, zero_triangles};
    use crate::group::Group;

    #[test]
    fn two_disjoint_terminal_edges() {
        let g = Group::new(&[3]).unwrap();
        let one = g.element(&[1]).unwrap();
        let graph = LabelledGraph::new(g.clone(), 4, &[0, 1, 2, 3], vec![(0, 1, one.clone()), (2, 3, one.clone())]).unwrap();
        let q = Query::new(WitnessKind::APaths, one);
        let c = certify(&graph, &q).unwrap();
        assert_eq!((c.nu, c.tau), (2, 2));
        verify_certificate(&graph, &q, &c).unwrap();
    }

    #[test]
    fn single_path_and_empty() {
        let g = Group::new(&[5]).unwrap();
        let two = g.element(&[2]).unwrap();
        let one = g.element(&[1]).unwrap();
        let graph = LabelledGraph::new(g.clone(), 3, &[0, 2], vec![(0, 1, one.clone()), (1, 2, one)]).unwrap();
        assert_eq!(min_cover(&graph, &Query::new(WitnessKind::APaths, two)).unwrap().0, 1);
        assert_eq!(min_cover(&graph, &Query::new(WitnessKind::APaths, g.zero())).unwrap(), (0, vec![]));
    }

    #[test]
    fn zero_triangles_pack_and_cover() {
        let g = Group::new(&[2]).unwrap();
        let q = Query::new(WitnessKind::Cycles, g.zero());
        let c = certify(&zero_triangles(&g, 3), &q).unwrap();
        assert_eq!((c.nu, c.tau), (3, 3));
    }

    #[test]
    fn z4_counterexample_n3() {
        let g = Group::new(&[4]).unwrap();
        let gamma = g.element(&[1]).unwrap();
        let cx = counterexample_for(&g, &gamma, 3).unwrap();
        let q = Query::new(WitnessKind::APaths, gamma);
        let c = certify(&cx.graph, &q).unwrap();
        assert_eq!(c.nu, 1);
        assert!(c.exhaustive);
        verify_certificate(&cx.graph, &q, &c).unwrap();
    }

    #[test]
    fn minimal_family_drops_supersets() {
        let zero = Group::new(&[2]).unwrap().zero();
        let w = |vs: &[usize]| PathWitness { vertices: vs.to_vec(), edges: vec![], weight: zero.clone() };
        let fam = minimal_family(5, &[w(&[0, 1, 2]), w(&[0, 2]), w(&[2, 0]), w(&[3, 4]), w(&[0, 2, 3, 4])]);
        assert_eq!(fam.len(), 2);
    }

    #[test]
    fn zero_grid_sweep() {
        let g = Group::new(&[2]).unwrap();
        let (rows, v) = sweep(&[2, 3], 2, |n| Ok((zero_grid(&g, n), Query::new(WitnessKind::APaths, g.zero())))).unwrap();
        assert!(rows.iter().all(|r| r.nu == r.tau && r.nu >= 1));
        assert!(rows[1].nu > rows[0].nu);
        assert_eq!(v, Verdict::Inconclusive);
    }

    #[test]
    fn node_limit_marks_inexhaustive() {
        let g = Group::new(&[2]).unwrap();
        let mut q = Query::new(WitnessKind::APaths, g.zero());
        q.node_limit = Some(1);
        let c = certify(&zero_grid(&g, 4), &q).unwrap();
        assert!(!c.exhaustive);
    }
}
