//! Group-labelled multigraphs with a terminal set `A`, path weights and
//! exhaustive enumeration of A-paths and cycles.
//!
//! The weight of a path or cycle is the plain sum of its edge labels, so it
//! does not depend on the direction of traversal.

use crate::group::{Code, Group, GroupElement, GroupError};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

/// Default limit on the number of witnesses one enumeration may return.
pub const DEFAULT_WITNESS_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edges[{edge}]: loop at vertex {vertex}")]
    Loop { edge: usize, vertex: usize },
    #[error("{field}: vertex {id} out of range (vertices = {count})")]
    VertexOutOfRange { field: String, id: usize, count: usize },
    #[error("edges[{edge}][2]: {source}")]
    Label { edge: usize, source: GroupError },
    #[error("edge index {0} out of range")]
    EdgeIndex(usize),
    #[error("more than {0} witnesses; raise the cap or shrink the instance")]
    WitnessCap(usize),
    #[error("{0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: GroupElement,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph without loops; every edge carries a group label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    group: Group,
    in_a: Vec<bool>,
    edges: Vec<Edge>,
    codes: Vec<Code>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl LabelledGraph {
    /// Validates and builds a graph. Duplicate entries of `a` are merged.
    pub fn new(
        group: Group,
        vertex_count: usize,
        a: &[usize],
        edges: Vec<(usize, usize, GroupElement)>,
    ) -> Result<Self, GraphError> {
        let mut in_a = vec![false; vertex_count];
        for (i, &x) in a.iter().enumerate() {
            if x >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    field: format!("A[{i}]"),
                    id: x,
                    count: vertex_count,
                });
            }
            in_a[x] = true;
        }
        let mut adj = vec![Vec::new(); vertex_count];
        let mut codes = Vec::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for (i, (u, v, label)) in edges.into_iter().enumerate() {
            for (slot, x) in [(0, u), (1, v)] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        field: format!("edges[{i}][{slot}]"),
                        id: x,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::Loop { edge: i, vertex: u });
            }
            group.check(&label).map_err(|source| GraphError::Label { edge: i, source })?;
            codes.push(group.encode(&label));
            adj[u].push((v, i));
            adj[v].push((u, i));
            out.push(Edge { u, v, label });
        }
        Ok(LabelledGraph { group, in_a, edges: out, codes, adj })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.in_a.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn edge_code(&self, i: usize) -> Code {
        self.codes[i]
    }

    pub fn is_in_a(&self, v: usize) -> bool {
        self.in_a[v]
    }

    pub fn a_mask(&self) -> &[bool] {
        &self.in_a
    }

    pub fn a_set(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.in_a[v]).collect()
    }

    /// `(neighbour, edge index)` pairs in edge order.
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Same graph with a different terminal set.
    pub fn with_terminals(&self, a: &[usize]) -> Result<Self, GraphError> {
        self.rebuild(a, |_, e| Some(e.label.clone()))
    }

    /// Same vertex ids, with every edge touching `removed` dropped.
    pub fn without_vertices(&self, removed: &[usize]) -> Self {
        let mut gone = vec![false; self.vertex_count()];
        for &v in removed {
            gone[v] = true;
        }
        self.rebuild(&self.a_set(), |_, e| (!gone[e.u] && !gone[e.v]).then(|| e.label.clone()))
            .expect("subgraph of a valid graph")
    }

    /// Rebuilds the graph keeping edge `i` with the label returned by `f`, or
    /// dropping it on `None`.
    pub fn rebuild(
        &self,
        a: &[usize],
        mut f: impl FnMut(usize, &Edge) -> Option<GroupElement>,
    ) -> Result<Self, GraphError> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| f(i, e).map(|l| (e.u, e.v, l)))
            .collect();
        LabelledGraph::new(self.group.clone(), self.vertex_count(), a, edges)
    }

    /// Group sum of the labels of the listed edges; the empty list weighs 0.
    pub fn walk_weight(&self, edge_indices: &[usize]) -> Result<GroupElement, GraphError> {
        let mut acc = 0;
        for &i in edge_indices {
            let c = *self.codes.get(i).ok_or(GraphError::EdgeIndex(i))?;
            acc = self.group.add_codes(acc, c);
        }
        Ok(self.group.decode(acc))
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            group: self.group.clone(),
            vertices: self.vertex_count(),
            a: self.a_set(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.u, e.v, e.label.residues().iter().map(|&r| i64::from(r)).collect()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        file.build()
    }

    /// Graphviz rendering; terminals are drawn as double circles.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.vertex_count() {
            if self.in_a[v] {
                let _ = writeln!(s, "  {v} [shape=doublecircle];");
            } else {
                let _ = writeln!(s, "  {v};");
            }
        }
        for e in &self.edges {
            let label: Vec<String> = e.label.residues().iter().map(u32::to_string).collect();
            let _ = writeln!(s, "  {} -- {} [label=\"({})\"];", e.u, e.v, label.join(","));
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk graph format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub group: Group,
    pub vertices: usize,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub edges: Vec<(usize, usize, Vec<i64>)>,
}

impl GraphFile {
    pub fn build(self) -> Result<LabelledGraph, GraphError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, (u, v, r)) in self.edges.into_iter().enumerate() {
            let label =
                self.group.element(&r).map_err(|source| GraphError::Label { edge: i, source })?;
            edges.push((u, v, label));
        }
        LabelledGraph::new(self.group, self.vertices, &self.a, edges)
    }
}

/// A path (or cycle) in a labelled graph. For a cycle the first vertex is not
/// repeated at the end and `edges.len() == vertices.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathWitness {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub weight: GroupElement,
}

/// Enumeration knobs shared by the path and cycle enumerators.
#[derive(Debug, Clone)]
pub struct Filter {
    pub weight: Option<GroupElement>,
    pub min_length: usize,
    pub cap: usize,
}

impl Filter {
    pub fn new(weight: Option<GroupElement>, min_length: usize) -> Self {
        Filter { weight, min_length, cap: DEFAULT_WITNESS_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

struct Search<'a> {
    g: &'a LabelledGraph,
    want: Option<Code>,
    min_edges: usize,
    cap: usize,
    on_path: Vec<bool>,
    verts: Vec<usize>,
    edges: Vec<usize>,
    out: Vec<PathWitness>,
}

impl<'a> Search<'a> {
    fn new(g: &'a LabelledGraph, filter: &Filter, floor: usize) -> Result<Self, GraphError> {
        let want = match &filter.weight {
            Some(w) => {
                g.group.check(w).map_err(|source| GraphError::Label { edge: usize::MAX, source })?;
                Some(g.group.encode(w))
            }
            None => None,
        };
        Ok(Search {
            g,
            want,
            min_edges: filter.min_length.max(floor),
            cap: filter.cap,
            on_path: vec![false; g.vertex_count()],
            verts: Vec::new(),
            edges: Vec::new(),
            out: Vec::new(),
        })
    }

    fn record(&mut self, weight: Code) -> Result<(), GraphError> {
        if self.edges.len() < self.min_edges || self.want.is_some_and(|w| w != weight) {
            return Ok(());
        }
        if self.out.len() >= self.cap {
            return Err(GraphError::WitnessCap(self.cap));
        }
        self.out.push(PathWitness {
            vertices: self.verts.clone(),
            edges: self.edges.clone(),
            weight: self.g.group.decode(weight),
        });
        Ok(())
    }

    fn push(&mut self, v: usize, e: usize) {
        self.on_path[v] = true;
        self.verts.push(v);
        self.edges.push(e);
    }

    fn pop(&mut self) {
        let v = self.verts.pop().expect("non-empty path");
        self.edges.pop();
        self.on_path[v] = false;
    }

    /// Extends a path ending at a non-terminal vertex (or at the start).
    /// Paths stop at the first terminal; `accept(end)` decides whether a
    /// terminal end is reported (canonical orientation, target sets).
    fn terminal_paths(
        &mut self,
        terminal: &[bool],
        forbidden: &[bool],
        accept: &dyn Fn(usize, usize) -> bool,
        weight: Code,
    ) -> Result<(), GraphError> {
        let g = self.g;
        let at = *self.verts.last().expect("path has a start");
        let start = self.verts[0];
        for &(w, e) in g.neighbours(at) {
            if self.on_path[w] || forbidden[w] {
                continue;
            }
            let nw = g.group.add_codes(weight, g.codes[e]);
            self.push(w, e);
            if terminal[w] {
                if accept(start, w) {
                    self.record(nw)?;
                }
            } else {
                self.terminal_paths(terminal, forbidden, accept, nw)?;
            }
            self.pop();
        }
        Ok(())
    }

    fn cycles_from(&mut self, s: usize, weight: Code) -> Result<(), GraphError> {
        let g = self.g;
        let at = *self.verts.last().expect("path has a start");
        for &(w, e) in g.neighbours(at) {
            if w == s {
                // Close the cycle once per orientation class.
                if !self.edges.is_empty() && self.edges[0] < e {
                    let nw = g.group.add_codes(weight, g.codes[e]);
                    self.edges.push(e);
                    self.record(nw)?;
                    self.edges.pop();
                }
                continue;
            }
            if w < s || self.on_path[w] {
                continue;
            }
            let nw = g.group.add_codes(weight, g.codes[e]);
            self.push(w, e);
            self.cycles_from(s, nw)?;
            self.pop();
        }
        Ok(())
    }
}

/// All A-paths (at least one edge, distinct ends in A, interior outside A)
/// with at least `min_length` edges and, if given, the filtered weight.
/// Each path is reported once, oriented from its smaller end.
pub fn enumerate_a_paths(
    g: &LabelledGraph,
    weight: Option<&GroupElement>,
    min_length: usize,
) -> Result<Vec<PathWitness>, GraphError> {
    enumerate_a_paths_with(g, &Filter::new(weight.cloned(), min_length))
}

pub fn enumerate_a_paths_with(
    g: &LabelledGraph,
    filter: &Filter,
) -> Result<Vec<PathWitness>, GraphError> {
    terminal_paths(g, g.a_mask(), filter)
}

/// Paths between distinct members of `terminal` whose interior avoids it.
pub fn terminal_paths(
    g: &LabelledGraph,
    terminal: &[bool],
    filter: &Filter,
) -> Result<Vec<PathWitness>, GraphError> {
    let mut search = Search::new(g, filter, 1)?;
    let forbidden = vec![false; g.vertex_count()];
    let accept = |s: usize, t: usize| s < t;
    for s in 0..g.vertex_count() {
        if !terminal[s] {
            continue;
        }
        search.on_path[s] = true;
        search.verts.push(s);
        search.terminal_paths(terminal, &forbidden, &accept, 0)?;
        search.verts.pop();
        search.on_path[s] = false;
    }
    Ok(search.out)
}

/// Paths from `source` to a vertex of `targets` whose interior avoids both
/// `targets` and `forbidden`. With `source` in `targets` the trivial path is
/// not reported.
pub fn paths_from(
    g: &LabelledGraph,
    source: usize,
    targets: &[bool],
    forbidden: &[bool],
    filter: &Filter,
) -> Result<Vec<PathWitness>, GraphError> {
    let mut search = Search::new(g, filter, 1)?;
    let accept = |_: usize, _: usize| true;
    search.on_path[source] = true;
    search.verts.push(source);
    search.terminal_paths(targets, forbidden, &accept, 0)?;
    Ok(search.out)
}

/// Every simple path between `s` and `t` (no interior restriction).
pub fn paths_between(
    g: &LabelledGraph,
    s: usize,
    t: usize,
    filter: &Filter,
) -> Result<Vec<PathWitness>, GraphError> {
    let mut targets = vec![false; g.vertex_count()];
    targets[t] = true;
    paths_from(g, s, &targets, &vec![false; g.vertex_count()], filter)
}

/// All simple cycles with at least `max(2, min_length)` edges, each reported
/// once: it starts at its smallest vertex and its first edge index is below
/// its closing edge index.
pub fn enumerate_cycles(
    g: &LabelledGraph,
    weight: Option<&GroupElement>,
    min_length: usize,
) -> Result<Vec<PathWitness>, GraphError> {
    enumerate_cycles_with(g, &Filter::new(weight.cloned(), min_length))
}

pub fn enumerate_cycles_with(
    g: &LabelledGraph,
    filter: &Filter,
) -> Result<Vec<PathWitness>, GraphError> {
    let mut search = Search::new(g, filter, 2)?;
    for s in 0..g.vertex_count() {
        search.on_path[s] = true;
        search.verts.push(s);
        search.cycles_from(s, 0)?;
        search.verts.pop();
        search.on_path[s] = false;
    }
    Ok(search.out)
}

/// Independent re-check of a path witness: incidences, simplicity, weight.
pub fn check_path(g: &LabelledGraph, p: &PathWitness) -> Result<(), String> {
    if p.vertices.len() != p.edges.len() + 1 {
        return Err("vertex/edge count mismatch".into());
    }
    check_walk(g, &p.vertices, &p.edges, false)?;
    check_weight(g, p)
}

/// Path check plus the A-path conditions.
pub fn check_a_path(g: &LabelledGraph, p: &PathWitness) -> Result<(), String> {
    check_path(g, p)?;
    let (first, last) = (p.vertices[0], *p.vertices.last().expect("non-empty"));
    if p.edges.is_empty() || !g.is_in_a(first) || !g.is_in_a(last) {
        return Err("ends are not two distinct vertices of A".into());
    }
    if p.vertices[1..p.vertices.len() - 1].iter().any(|&v| g.is_in_a(v)) {
        return Err("interior meets A".into());
    }
    Ok(())
}

pub fn check_cycle(g: &LabelledGraph, c: &PathWitness) -> Result<(), String> {
    if c.vertices.len() != c.edges.len() || c.edges.len() < 2 {
        return Err("not a closed walk of length >= 2".into());
    }
    let mut closed = c.vertices.clone();
    closed.push(c.vertices[0]);
    check_walk(g, &closed, &c.edges, true)?;
    check_weight(g, c)
}

fn check_walk(g: &LabelledGraph, verts: &[usize], edges: &[usize], closed: bool) -> Result<(), String> {
    let body = if closed { &verts[..verts.len() - 1] } else { verts };
    let mut seen = vec![false; g.vertex_count()];
    for &v in body {
        if v >= g.vertex_count() || std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} repeated or out of range"));
        }
    }
    let mut used = std::collections::HashSet::new();
    for (k, &e) in edges.iter().enumerate() {
        let edge = g.edges().get(e).ok_or(format!("edge {e} out of range"))?;
        let (a, b) = (verts[k], verts[k + 1]);
        if !((edge.u == a && edge.v == b) || (edge.u == b && edge.v == a)) {
            return Err(format!("edge {e} does not join {a} and {b}"));
        }
        if !used.insert(e) {
            return Err(format!("edge {e} repeated"));
        }
    }
    Ok(())
}

fn check_weight(g: &LabelledGraph, p: &PathWitness) -> Result<(), String> {
    let w = g.walk_weight(&p.edges).map_err(|e| e.to_string())?;
    if w != p.weight {
        return Err(format!("weight {} recorded, {} summed", p.weight, w));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: i64) -> Group {
        Group::new(&[m]).unwrap()
    }

    fn graph(m: i64, n: usize, a: &[usize], edges: &[(usize, usize, i64)]) -> LabelledGraph {
        let g = z(m);
        let edges = edges.iter().map(|&(u, v, l)| (u, v, g.element(&[l]).unwrap())).collect();
        LabelledGraph::new(g, n, a, edges).unwrap()
    }

    #[test]
    fn build_graph_examples() {
        let g2 = z(2);
        assert!(LabelledGraph::new(g2.clone(), 2, &[0, 1], vec![(0, 1, g2.zero())]).is_ok());
        assert_eq!(
            LabelledGraph::new(g2.clone(), 2, &[0, 1], vec![(0, 0, g2.zero())]),
            Err(GraphError::Loop { edge: 0, vertex: 0 })
        );
        let err = GraphFile {
            group: g2.clone(),
            vertices: 2,
            a: vec![0, 1],
            edges: vec![(0, 1, vec![3])],
        }
        .build()
        .unwrap_err();
        assert!(matches!(err, GraphError::Label { edge: 0, .. }), "{err}");
        assert!(LabelledGraph::new(g2.clone(), 2, &[5], vec![]).is_err());
    }

    #[test]
    fn walk_weight_examples() {
        let g3 = graph(3, 3, &[], &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(g3.walk_weight(&[]).unwrap(), z(3).zero());
        assert_eq!(g3.walk_weight(&[0, 1]).unwrap(), z(3).element(&[2]).unwrap());
        let g2 = graph(2, 3, &[], &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(g2.walk_weight(&[0, 1]).unwrap(), z(2).zero());
        assert_eq!(g2.walk_weight(&[7]), Err(GraphError::EdgeIndex(7)));
    }

    #[test]
    fn a_path_examples() {
        // a=0, u=1, b=2
        let g = graph(5, 3, &[0, 2], &[(0, 1, 1), (1, 2, 1)]);
        let two = z(5).element(&[2]).unwrap();
        let found = enumerate_a_paths(&g, Some(&two), 0).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices, vec![0, 1, 2]);
        assert_eq!(found[0].weight, two);
        assert!(enumerate_a_paths(&g, Some(&z(5).zero()), 0).unwrap().is_empty());

        // Triangle a=0, b=1, outside x=2, all zero in Z2.
        let t = graph(2, 3, &[0, 1], &[(0, 1, 0), (0, 2, 0), (2, 1, 0)]);
        let all = enumerate_a_paths(&t, Some(&z(2).zero()), 0).unwrap();
        assert_eq!(all.len(), 2);
        let long = enumerate_a_paths(&t, Some(&z(2).zero()), 2).unwrap();
        assert_eq!(long.len(), 1);
        assert_eq!(long[0].vertices, vec![0, 2, 1]);
    }

    #[test]
    fn cycle_examples() {
        let tri3 = graph(3, 3, &[], &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        assert_eq!(enumerate_cycles(&tri3, Some(&z(3).zero()), 3).unwrap().len(), 1);
        let tri2 = graph(2, 3, &[], &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        assert!(enumerate_cycles(&tri2, Some(&z(2).zero()), 3).unwrap().is_empty());
        let sq = graph(4, 4, &[], &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]);
        let cycles = enumerate_cycles(&sq, Some(&z(4).zero()), 3).unwrap();
        assert_eq!(cycles.len(), 1);
        check_cycle(&sq, &cycles[0]).unwrap();
    }

    #[test]
    fn parallel_edges_give_digons_and_distinct_paths() {
        let g = graph(3, 2, &[0, 1], &[(0, 1, 1), (0, 1, 2)]);
        assert_eq!(enumerate_a_paths(&g, None, 0).unwrap().len(), 2);
        let digons = enumerate_cycles(&g, None, 2).unwrap();
        assert_eq!(digons.len(), 1);
        assert_eq!(digons[0].weight, z(3).zero());
        assert!(enumerate_cycles(&g, None, 3).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let g = graph(2, 4, &[0, 1, 2, 3], &[(0, 1, 0), (1, 2, 0), (2, 3, 0)]);
        let f = Filter::new(None, 0).with_cap(2);
        assert_eq!(enumerate_a_paths_with(&g, &f), Err(GraphError::WitnessCap(2)));
    }

    #[test]
    fn json_and_dot_round_trip() {
        let g = graph(4, 3, &[0, 2], &[(0, 1, 3), (1, 2, 1)]);
        let back = LabelledGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let dot = g.to_dot();
        assert!(dot.contains("0 [shape=doublecircle];"));
        assert!(dot.contains("0 -- 1 [label=\"(3)\"];"));
        assert!(LabelledGraph::from_json("{\"group\":{\"moduli\":[1]}}").is_err());
    }
}
