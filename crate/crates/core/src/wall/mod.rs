//! Walls: subdivisions of elementary walls embedded in a labelled host graph.
//!
//! Coordinates are 0-based. An `n x m` elementary wall has vertex rows
//! `0..=n` and positions `0..=2m+1` in each row. Consecutive positions of a
//! row are joined, and `(i, j)` is joined to `(i+1, j)` when `j` and `i` have
//! the same parity. Deleting degree-1 vertices removes `(0, 2m+1)` and one
//! bottom corner: `(n, 2m+1)` for odd `n`, `(n, 0)` for even `n`.
//!
//! Brick column `c` is made of positions `2c` and `2c+1`, so there are `m+1`
//! of them. A [`Wall`] maps every skeleton position to a host vertex and every
//! skeleton edge to a host path; the host graph may contain more than the wall.

mod extract;

pub use extract::{
    diagonal_normalize, diagonal_walk, extract_zero_subwall, row_normalize, DiagonalPass,
    ExtractionReport, ExtractionResult, PassStats, RowPass,
};

use crate::graph::{GraphError, GraphFile, LabelledGraph};
use crate::group::{Code, Group};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

/// Skeleton position `(row, position)`.
pub type Pos = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error("a wall needs at least {min} rows and columns, got {rows}x{cols}")]
    Degenerate { rows: usize, cols: usize, min: usize },
    #[error("invalid wall: {0}")]
    Invalid(String),
    #[error("row {0} does not exist")]
    RowOutOfRange(usize),
    #[error("column {0} does not exist")]
    ColumnOutOfRange(usize),
    #[error("row {0} is interior; only the first and last row can be removed without shearing the bricks")]
    InteriorRow(usize),
    #[error("largest class keeps {kept} but {keep} are required")]
    Pigeonhole { kept: usize, keep: usize },
    #[error("{0}")]
    Diagonal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Json(String),
}

/// A host path; `vertices.len() == edges.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HostPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl HostPath {
    fn reversed(&self) -> HostPath {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        HostPath { vertices, edges }
    }

    fn append(&mut self, other: &HostPath) {
        if self.vertices.is_empty() {
            self.vertices.extend_from_slice(&other.vertices);
        } else {
            debug_assert_eq!(self.vertices.last(), other.vertices.first());
            self.vertices.extend_from_slice(&other.vertices[1..]);
        }
        self.edges.extend_from_slice(&other.edges);
    }
}

/// Geometry of the `n x m` elementary wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Skeleton {
    pub n: usize,
    pub m: usize,
}

impl Skeleton {
    pub fn width(&self) -> usize {
        2 * self.m + 2
    }

    pub fn index(&self, (i, j): Pos) -> usize {
        i * self.width() + j
    }

    pub fn exists(&self, (i, j): Pos) -> bool {
        if i > self.n || j >= self.width() {
            return false;
        }
        let last = self.width() - 1;
        !((i == 0 && j == last)
            || (i == self.n && self.n % 2 == 1 && j == last)
            || (i == self.n && self.n.is_multiple_of(2) && j == 0))
    }

    /// Whether `(i, j) - (i, j+1)` is a skeleton edge.
    pub fn has_horizontal(&self, (i, j): Pos) -> bool {
        self.exists((i, j)) && self.exists((i, j + 1))
    }

    /// Whether `(i, j) - (i+1, j)` is a skeleton edge.
    pub fn has_vertical(&self, (i, j): Pos) -> bool {
        i < self.n && j % 2 == i % 2 && self.exists((i, j)) && self.exists((i + 1, j))
    }

    pub fn neighbours(&self, (i, j): Pos) -> Vec<Pos> {
        let mut out = Vec::with_capacity(3);
        if j > 0 && self.has_horizontal((i, j - 1)) {
            out.push((i, j - 1));
        }
        if self.has_horizontal((i, j)) {
            out.push((i, j + 1));
        }
        if i > 0 && self.has_vertical((i - 1, j)) {
            out.push((i - 1, j));
        }
        if self.has_vertical((i, j)) {
            out.push((i + 1, j));
        }
        out
    }

    pub fn degree(&self, p: Pos) -> usize {
        if self.exists(p) {
            self.neighbours(p).len()
        } else {
            0
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..=self.n).flat_map(move |i| (0..self.width()).map(move |j| (i, j))).filter(|&p| self.exists(p))
    }

    /// First and last position of row `i`.
    pub fn row_span(&self, i: usize) -> (usize, usize) {
        let first = if self.exists((i, 0)) { 0 } else { 1 };
        let last = if self.exists((i, self.width() - 1)) { self.width() - 1 } else { self.width() - 2 };
        (first, last)
    }

    /// Skeleton edges as `(a, b)` with `b` right of or below `a`.
    pub fn edges(&self) -> Vec<(Pos, Pos)> {
        let mut out = Vec::new();
        for p @ (i, j) in self.positions() {
            if self.has_horizontal(p) {
                out.push((p, (i, j + 1)));
            }
            if self.has_vertical(p) {
                out.push((p, (i + 1, j)));
            }
        }
        out
    }
}

/// A wall embedded in a labelled host graph.
#[derive(Debug, Clone)]
pub struct Wall {
    host: Arc<LabelledGraph>,
    skel: Skeleton,
    nodes: Vec<Option<usize>>,
    horiz: Vec<Option<HostPath>>,
    vert: Vec<Option<HostPath>>,
}

impl Wall {
    /// The identity subdivision of the `n x m` elementary wall, all labels 0.
    /// Host vertices are numbered row-major over existing positions.
    pub fn elementary(group: &Group, n: usize, m: usize) -> Result<Wall, WallError> {
        if n == 0 || m == 0 {
            return Err(WallError::Degenerate { rows: n, cols: m, min: 1 });
        }
        let skel = Skeleton { n, m };
        let size = (n + 1) * skel.width();
        let mut nodes = vec![None; size];
        let mut count = 0;
        for p in skel.positions() {
            nodes[skel.index(p)] = Some(count);
            count += 1;
        }
        let mut edges = Vec::new();
        let mut horiz = vec![None; size];
        let mut vert = vec![None; size];
        for (a, b) in skel.edges() {
            let (u, v) = (nodes[skel.index(a)].unwrap(), nodes[skel.index(b)].unwrap());
            let path = HostPath { vertices: vec![u, v], edges: vec![edges.len()] };
            edges.push((u, v, group.zero()));
            if a.0 == b.0 {
                horiz[skel.index(a)] = Some(path);
            } else {
                vert[skel.index(a)] = Some(path);
            }
        }
        let host = LabelledGraph::new(group.clone(), count, &[], edges)?;
        Ok(Wall { host: Arc::new(host), skel, nodes, horiz, vert })
    }

    /// Assembles and validates a wall from explicit parts.
    pub fn from_parts(
        host: Arc<LabelledGraph>,
        n: usize,
        m: usize,
        nodes: Vec<Option<usize>>,
        horiz: Vec<Option<HostPath>>,
        vert: Vec<Option<HostPath>>,
    ) -> Result<Wall, WallError> {
        let w = Wall { host, skel: Skeleton { n, m }, nodes, horiz, vert };
        w.validate()?;
        Ok(w)
    }

    /// Checks the embedding: one host vertex per position, one simple host
    /// path per skeleton edge, interiors pairwise disjoint and free of
    /// branch-grid vertices.
    pub fn validate(&self) -> Result<(), WallError> {
        let s = self.skel;
        if s.n == 0 || s.m == 0 {
            return Err(WallError::Degenerate { rows: s.n, cols: s.m, min: 1 });
        }
        let size = (s.n + 1) * s.width();
        if self.nodes.len() != size || self.horiz.len() != size || self.vert.len() != size {
            return Err(WallError::Invalid("table sizes do not match the dimensions".into()));
        }
        let hv = self.host.vertex_count();
        let mut used = vec![false; hv];
        for i in 0..=s.n {
            for j in 0..s.width() {
                let p = (i, j);
                match (s.exists(p), self.nodes[s.index(p)]) {
                    (true, Some(v)) => {
                        if v >= hv || std::mem::replace(&mut used[v], true) {
                            return Err(WallError::Invalid(format!("position {p:?}: host vertex {v} repeated or out of range")));
                        }
                    }
                    (false, None) => {}
                    (true, None) => return Err(WallError::Invalid(format!("position {p:?} has no vertex"))),
                    (false, Some(_)) => return Err(WallError::Invalid(format!("position {p:?} is not in the skeleton"))),
                }
                let expected = [(s.has_horizontal(p), &self.horiz[s.index(p)], (i, j + 1)), (s.has_vertical(p), &self.vert[s.index(p)], (i + 1, j))];
                for (present, path, q) in expected {
                    match (present, path) {
                        (true, Some(_)) | (false, None) => {}
                        _ => return Err(WallError::Invalid(format!("skeleton edge {p:?}-{q:?} mismatch"))),
                    }
                }
            }
        }
        for (a, b) in s.edges() {
            let path = self.path(a, b).expect("checked above");
            let (u, v) = (self.node(a).unwrap(), self.node(b).unwrap());
            if path.vertices.len() != path.edges.len() + 1 || path.edges.is_empty() {
                return Err(WallError::Invalid(format!("edge {a:?}-{b:?}: malformed path")));
            }
            if path.vertices[0] != u || *path.vertices.last().unwrap() != v {
                return Err(WallError::Invalid(format!("edge {a:?}-{b:?}: path ends do not match")));
            }
            for (k, &e) in path.edges.iter().enumerate() {
                let edge = self.host.edges().get(e).ok_or_else(|| WallError::Invalid(format!("edge {a:?}-{b:?}: host edge {e} out of range")))?;
                let (x, y) = (path.vertices[k], path.vertices[k + 1]);
                if !((edge.u == x && edge.v == y) || (edge.u == y && edge.v == x)) {
                    return Err(WallError::Invalid(format!("edge {a:?}-{b:?}: host edge {e} does not join {x} and {y}")));
                }
            }
            for &x in &path.vertices[1..path.vertices.len() - 1] {
                if x >= hv || std::mem::replace(&mut used[x], true) {
                    return Err(WallError::Invalid(format!("edge {a:?}-{b:?}: interior vertex {x} reused")));
                }
            }
        }
        Ok(())
    }

    pub fn host(&self) -> &Arc<LabelledGraph> {
        &self.host
    }

    pub fn group(&self) -> &Group {
        self.host.group()
    }

    pub fn skeleton(&self) -> Skeleton {
        self.skel
    }

    /// Number of brick rows `n` (vertex rows are `0..=n`).
    pub fn rows(&self) -> usize {
        self.skel.n
    }

    /// Number of brick columns `m` (column indices are `0..=m`).
    pub fn cols(&self) -> usize {
        self.skel.m
    }

    pub fn size(&self) -> usize {
        self.skel.n.min(self.skel.m)
    }

    pub fn node(&self, p: Pos) -> Option<usize> {
        if p.0 > self.skel.n || p.1 >= self.skel.width() {
            return None;
        }
        self.nodes[self.skel.index(p)]
    }

    /// Host path of the skeleton edge `a - b`, oriented from `a`.
    pub fn path(&self, a: Pos, b: Pos) -> Option<HostPath> {
        let s = self.skel;
        if !s.exists(a) || !s.exists(b) {
            return None;
        }
        let stored = |p: Pos, horizontal: bool| {
            if horizontal {
                self.horiz[s.index(p)].as_ref()
            } else {
                self.vert[s.index(p)].as_ref()
            }
        };
        if a.0 == b.0 && b.1 == a.1 + 1 {
            stored(a, true).cloned()
        } else if a.0 == b.0 && a.1 == b.1 + 1 {
            stored(b, true).map(HostPath::reversed)
        } else if a.1 == b.1 && b.0 == a.0 + 1 {
            stored(a, false).cloned()
        } else if a.1 == b.1 && a.0 == b.0 + 1 {
            stored(b, false).map(HostPath::reversed)
        } else {
            None
        }
    }

    /// Concatenated host path of a skeleton walk.
    pub fn walk_path(&self, walk: &[Pos]) -> Result<HostPath, WallError> {
        let mut out = HostPath::default();
        if let Some(&p) = walk.first() {
            let v = self.node(p).ok_or_else(|| WallError::Invalid(format!("walk leaves the wall at {p:?}")))?;
            out.vertices.push(v);
        }
        for pair in walk.windows(2) {
            let step = self
                .path(pair[0], pair[1])
                .ok_or_else(|| WallError::Invalid(format!("no skeleton edge {:?}-{:?}", pair[0], pair[1])))?;
            out.append(&step);
        }
        Ok(out)
    }

    /// Weight code of a skeleton walk.
    pub fn walk_code(&self, walk: &[Pos]) -> Result<Code, WallError> {
        let g = self.group();
        let mut acc = 0;
        for pair in walk.windows(2) {
            let step = self
                .step_path(pair[0], pair[1])
                .ok_or_else(|| WallError::Invalid(format!("no skeleton edge {:?}-{:?}", pair[0], pair[1])))?;
            for &e in &step.edges {
                acc = g.add_codes(acc, self.host.edge_code(e));
            }
        }
        Ok(acc)
    }

    fn step_path(&self, a: Pos, b: Pos) -> Option<&HostPath> {
        let s = self.skel;
        if !s.exists(a) || !s.exists(b) {
            return None;
        }
        if a.0 == b.0 && a.1.abs_diff(b.1) == 1 {
            self.horiz[s.index((a.0, a.1.min(b.1)))].as_ref()
        } else if a.1 == b.1 && a.0.abs_diff(b.0) == 1 {
            self.vert[s.index((a.0.min(b.0), a.1))].as_ref()
        } else {
            None
        }
    }

    /// Skeleton walk along row `i` from its first to its last position.
    pub fn row_walk(&self, i: usize) -> Vec<Pos> {
        let (a, b) = self.skel.row_span(i);
        (a..=b).map(|j| (i, j)).collect()
    }

    /// Host vertices of degree 3 in the wall.
    pub fn branch_vertices(&self) -> Vec<usize> {
        self.skel.positions().filter(|&p| self.skel.degree(p) == 3).filter_map(|p| self.node(p)).collect()
    }

    /// Degree-2 vertices of the top row, except the first and last vertex.
    pub fn nails(&self) -> Vec<usize> {
        let row = self.walk_path(&self.row_walk(0)).expect("top row exists");
        let branch: std::collections::HashSet<usize> = self.branch_vertices().into_iter().collect();
        let inner = &row.vertices[1..row.vertices.len() - 1];
        inner.iter().copied().filter(|v| !branch.contains(v)).collect()
    }

    /// Subdivided edges: maximal skeleton walks whose interior positions have
    /// degree 2, between degree-3 positions. Each is listed once.
    pub fn subdivided_edges(&self) -> Vec<Vec<Pos>> {
        let s = self.skel;
        let mut out = Vec::new();
        for p in s.positions().filter(|&p| s.degree(p) == 3) {
            for q in s.neighbours(p) {
                let mut walk = vec![p, q];
                while s.degree(*walk.last().unwrap()) == 2 {
                    let cur = *walk.last().unwrap();
                    let prev = walk[walk.len() - 2];
                    let next = s.neighbours(cur).into_iter().find(|&x| x != prev).expect("degree 2");
                    walk.push(next);
                }
                let (first, last) = (walk[0], *walk.last().unwrap());
                let key = |a: Pos, b: Pos| (s.index(a), s.index(b));
                if key(first, walk[1]) < key(last, walk[walk.len() - 2]) {
                    out.push(walk);
                }
            }
        }
        out
    }

    /// First subdivided edge with non-zero weight, if any.
    pub fn nonzero_subdivided_edge(&self) -> Option<Vec<Pos>> {
        self.subdivided_edges().into_iter().find(|w| self.walk_code(w).expect("skeleton walk") != 0)
    }

    /// True iff every subdivided edge has weight 0.
    pub fn is_zero_wall(&self) -> bool {
        self.nonzero_subdivided_edge().is_none()
    }

    /// Mask of host edges used by the wall.
    pub fn used_edges(&self) -> Vec<bool> {
        let mut used = vec![false; self.host.edges().len()];
        for path in self.horiz.iter().chain(&self.vert).flatten() {
            for &e in &path.edges {
                used[e] = true;
            }
        }
        used
    }

    /// Whether every host edge of `self` is also an edge of `parent`, with
    /// both walls living in the same host graph.
    pub fn is_subwall_of(&self, parent: &Wall) -> bool {
        if !(Arc::ptr_eq(&self.host, &parent.host) || *self.host == *parent.host) {
            return false;
        }
        let theirs = parent.used_edges();
        self.used_edges().iter().zip(theirs).all(|(&mine, theirs)| !mine || theirs)
    }

    /// Builds an `n x m` wall over the same host: `node_of` maps each new
    /// position to an old one and `route` gives, for every new skeleton edge
    /// `a - b`, the old skeleton walk from `node_of(a)` to `node_of(b)`.
    pub fn compose(
        &self,
        n: usize,
        m: usize,
        node_of: impl Fn(Pos) -> Pos,
        route: impl Fn(Pos, Pos) -> Vec<Pos>,
    ) -> Result<Wall, WallError> {
        let skel = Skeleton { n, m };
        let size = (n + 1) * skel.width();
        let mut nodes = vec![None; size];
        for p in skel.positions() {
            let old = node_of(p);
            nodes[skel.index(p)] =
                Some(self.node(old).ok_or_else(|| WallError::Invalid(format!("{p:?} maps to missing {old:?}")))?);
        }
        let mut horiz = vec![None; size];
        let mut vert = vec![None; size];
        for (a, b) in skel.edges() {
            let walk = route(a, b);
            if walk.first() != Some(&node_of(a)) || walk.last() != Some(&node_of(b)) {
                return Err(WallError::Invalid(format!("route for {a:?}-{b:?} has wrong ends")));
            }
            let path = self.walk_path(&walk)?;
            if a.0 == b.0 {
                horiz[skel.index(a)] = Some(path);
            } else {
                vert[skel.index(a)] = Some(path);
            }
        }
        Wall::from_parts(Arc::clone(&self.host), n, m, nodes, horiz, vert)
    }

    /// Keeps the listed brick columns (strictly increasing, at least two) and
    /// drops the others; horizontal paths across dropped columns are joined.
    pub fn select_columns(&self, kept: &[usize]) -> Result<Wall, WallError> {
        if let Some(&c) = kept.iter().find(|&&c| c > self.skel.m) {
            return Err(WallError::ColumnOutOfRange(c));
        }
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(WallError::Invalid("columns must be strictly increasing".into()));
        }
        if kept.len() < 2 {
            return Err(WallError::Degenerate { rows: self.skel.n, cols: kept.len().saturating_sub(1), min: 1 });
        }
        let map = |j: usize| 2 * kept[j / 2] + j % 2;
        self.compose(
            self.skel.n,
            kept.len() - 1,
            |(i, j)| (i, map(j)),
            |a, b| {
                if a.0 == b.0 {
                    (map(a.1)..=map(b.1)).map(|j| (a.0, j)).collect()
                } else {
                    vec![(a.0, map(a.1)), (b.0, map(b.1))]
                }
            },
        )
    }

    /// Removes brick column `c`. The result must keep at least two rows and
    /// columns.
    pub fn remove_column(&self, c: usize) -> Result<Wall, WallError> {
        if c > self.skel.m {
            return Err(WallError::ColumnOutOfRange(c));
        }
        if self.skel.m - 1 < 2 || self.skel.n < 2 {
            return Err(WallError::Degenerate { rows: self.skel.n, cols: self.skel.m - 1, min: 2 });
        }
        let kept: Vec<usize> = (0..=self.skel.m).filter(|&k| k != c).collect();
        self.select_columns(&kept)
    }

    /// Removes vertex row `r`, which must be the first or the last one. The
    /// top row is removed by mirroring so the bricks keep their orientation.
    pub fn remove_row(&self, r: usize) -> Result<Wall, WallError> {
        let Skeleton { n, m } = self.skel;
        if r > n {
            return Err(WallError::RowOutOfRange(r));
        }
        if n - 1 < 2 || m < 2 {
            return Err(WallError::Degenerate { rows: n - 1, cols: m, min: 2 });
        }
        if r == n {
            self.compose(n - 1, m, |p| p, |a, b| vec![a, b])
        } else if r == 0 {
            let last = 2 * m + 1;
            let f = move |(i, j): Pos| (i + 1, last - j);
            self.compose(n - 1, m, f, |a, b| vec![f(a), f(b)])
        } else {
            Err(WallError::InteriorRow(r))
        }
    }

    /// Same embedding over a relabelled copy of the host (same vertices and
    /// edge order).
    pub fn with_host(&self, host: LabelledGraph) -> Result<Wall, WallError> {
        if host.vertex_count() != self.host.vertex_count() || host.edges().len() != self.host.edges().len() {
            return Err(WallError::Invalid("relabelled host has a different shape".into()));
        }
        let mut w = self.clone();
        w.host = Arc::new(host);
        w.validate()?;
        Ok(w)
    }

    pub fn to_file(&self) -> WallFile {
        let s = self.skel;
        let nodes = s.positions().map(|p| (p.0, p.1, self.node(p).unwrap())).collect();
        let paths = s
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let p = self.path(a, b).unwrap();
                WallEdgeFile { from: a, to: b, vertices: p.vertices, edges: p.edges }
            })
            .collect();
        WallFile { rows: s.n, cols: s.m, host: self.host.to_file(), nodes, paths }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("wall serializes")
    }

    pub fn from_json(text: &str) -> Result<Wall, WallError> {
        let file: WallFile = serde_json::from_str(text).map_err(|e| WallError::Json(e.to_string()))?;
        file.build()
    }

    /// Graphviz rendering of the wall's own vertices and edges; branch
    /// vertices are boxes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph W {\n");
        let branch: std::collections::HashSet<usize> = self.branch_vertices().into_iter().collect();
        let mut seen = vec![false; self.host.vertex_count()];
        for path in self.horiz.iter().chain(&self.vert).flatten() {
            for &v in &path.vertices {
                if !std::mem::replace(&mut seen[v], true) {
                    let shape = if branch.contains(&v) { "box" } else { "point" };
                    let _ = writeln!(s, "  {v} [shape={shape}];");
                }
            }
        }
        let used = self.used_edges();
        for (k, e) in self.host.edges().iter().enumerate().filter(|(k, _)| used[*k]) {
            let label: Vec<String> = e.label.residues().iter().map(u32::to_string).collect();
            let _ = writeln!(s, "  {} -- {} [label=\"({})\", id=e{k}];", e.u, e.v, label.join(","));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallEdgeFile {
    pub from: Pos,
    pub to: Pos,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// On-disk wall format: dimensions, host graph, branch grid, edge paths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallFile {
    pub rows: usize,
    pub cols: usize,
    pub host: GraphFile,
    pub nodes: Vec<(usize, usize, usize)>,
    pub paths: Vec<WallEdgeFile>,
}

impl WallFile {
    pub fn build(self) -> Result<Wall, WallError> {
        let host = self.host.build()?;
        let skel = Skeleton { n: self.rows, m: self.cols };
        let size = (skel.n + 1) * skel.width();
        let mut nodes = vec![None; size];
        for (k, &(i, j, v)) in self.nodes.iter().enumerate() {
            if !skel.exists((i, j)) {
                return Err(WallError::Invalid(format!("nodes[{k}]: position ({i}, {j}) is not in the skeleton")));
            }
            nodes[skel.index((i, j))] = Some(v);
        }
        let mut horiz = vec![None; size];
        let mut vert = vec![None; size];
        for (k, e) in self.paths.into_iter().enumerate() {
            let (a, b) = (e.from, e.to);
            let path = HostPath { vertices: e.vertices, edges: e.edges };
            if a.0 == b.0 && b.1 == a.1 + 1 && skel.has_horizontal(a) {
                horiz[skel.index(a)] = Some(path);
            } else if a.1 == b.1 && b.0 == a.0 + 1 && skel.has_vertical(a) {
                vert[skel.index(a)] = Some(path);
            } else {
                return Err(WallError::Invalid(format!("paths[{k}]: {a:?}-{b:?} is not a skeleton edge")));
            }
        }
        Wall::from_parts(Arc::new(host), skel.n, skel.m, nodes, horiz, vert)
    }
}
