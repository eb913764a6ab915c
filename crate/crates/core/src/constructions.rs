//! Counterexample grids, elementary walls and labelling strategies.

use crate::graph::{Edge, GraphError, LabelledGraph};
use crate::group::{epp_condition, Group, GroupElement, GroupError};
use crate::wall::{Skeleton, Wall, WallError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("size {0} is too small (need at least 2)")]
    Size(usize),
    #[error("the group condition holds for {target} in {group}; no counterexample exists")]
    ConditionHolds { group: Group, target: GroupElement },
    #[error("need {needed} elements of order at most 2 but {group} has {available}")]
    NotEnoughInvolutions { group: Group, needed: usize, available: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Wall(#[from] WallError),
}

/// Which graph carries the counterexample's attachments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Core {
    /// `n x n` square lattice.
    #[default]
    Grid,
    /// Elementary wall with `n` vertex rows and `n` brick columns.
    Wall,
}

#[derive(Debug, Clone)]
pub struct GridCounterexample {
    pub n: usize,
    /// Labels of the top row, the left attachments and the right attachments.
    pub alphas: [GroupElement; 3],
    pub graph: LabelledGraph,
}

impl GridCounterexample {
    pub fn left(&self) -> Vec<usize> {
        let base = self.graph.vertex_count() - 2 * self.n;
        (base..base + self.n).collect()
    }

    pub fn right(&self) -> Vec<usize> {
        let base = self.graph.vertex_count() - self.n;
        (base..base + self.n).collect()
    }
}

/// The `n x n` grid with top-row edges labelled `alpha1`, `n` left terminals
/// attached to the first column (label `alpha2`) and `n` right terminals
/// attached to the last column (label `alpha3`); every other edge is 0.
/// Grid vertex `(r, c)` is `r * n + c`, then the left terminals top-down,
/// then the right terminals top-down.
pub fn grid_counterexample(
    g: &Group,
    n: usize,
    alpha1: &GroupElement,
    alpha2: &GroupElement,
    alpha3: &GroupElement,
) -> Result<GridCounterexample, ConstructionError> {
    let labels = vec![alpha2.clone(); n];
    let right = vec![alpha3.clone(); n];
    attach(g, n, alpha1, &labels, &right, Core::Grid).map(|graph| GridCounterexample {
        n,
        alphas: [alpha1.clone(), alpha2.clone(), alpha3.clone()],
        graph,
    })
}

/// Same construction on a chosen core.
pub fn grid_counterexample_on(
    g: &Group,
    n: usize,
    alphas: [GroupElement; 3],
    core: Core,
) -> Result<GridCounterexample, ConstructionError> {
    let left = vec![alphas[1].clone(); n];
    let right = vec![alphas[2].clone(); n];
    let graph = attach(g, n, &alphas[0], &left, &right, core)?;
    Ok(GridCounterexample { n, alphas, graph })
}

fn attach(
    g: &Group,
    n: usize,
    top: &GroupElement,
    left: &[GroupElement],
    right: &[GroupElement],
    core: Core,
) -> Result<LabelledGraph, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::Size(n));
    }
    for x in [top].into_iter().chain(left).chain(right) {
        g.check(x)?;
    }
    let zero = g.zero();
    let mut edges = Vec::new();
    // Per row: the first and last vertex, for the attachments.
    let mut ends = Vec::with_capacity(n);
    let core_vertices;
    match core {
        Core::Grid => {
            for r in 0..n {
                for c in 0..n {
                    let v = r * n + c;
                    if c + 1 < n {
                        edges.push((v, v + 1, if r == 0 { top.clone() } else { zero.clone() }));
                    }
                    if r + 1 < n {
                        edges.push((v, v + n, zero.clone()));
                    }
                }
                ends.push((r * n, r * n + n - 1));
            }
            core_vertices = n * n;
        }
        Core::Wall => {
            let skel = Skeleton { n: n - 1, m: n };
            let mut id = vec![usize::MAX; (skel.n + 1) * skel.width()];
            let mut count = 0;
            for p in skel.positions() {
                id[skel.index(p)] = count;
                count += 1;
            }
            for (a, b) in skel.edges() {
                let label = if a.0 == 0 && b.0 == 0 { top.clone() } else { zero.clone() };
                edges.push((id[skel.index(a)], id[skel.index(b)], label));
            }
            for r in 0..n {
                let (first, last) = skel.row_span(r);
                ends.push((id[skel.index((r, first))], id[skel.index((r, last))]));
            }
            core_vertices = count;
        }
    }
    for (i, x) in left.iter().enumerate() {
        edges.push((core_vertices + i, ends[i].0, x.clone()));
    }
    for (i, x) in right.iter().enumerate() {
        edges.push((core_vertices + n + i, ends[i].1, x.clone()));
    }
    let a: Vec<usize> = (core_vertices..core_vertices + 2 * n).collect();
    Ok(LabelledGraph::new(g.clone(), core_vertices + 2 * n, &a, edges)?)
}

/// Counterexample for A-paths of weight `target`, built from the canonical
/// witness `(x, y)` of the failed group condition: top row `y`, left `x`,
/// right `target - x - y`.
pub fn counterexample_for(
    g: &Group,
    target: &GroupElement,
    n: usize,
) -> Result<GridCounterexample, ConstructionError> {
    let verdict = epp_condition(g, target)?;
    let Some(w) = verdict.witness else {
        return Err(ConstructionError::ConditionHolds { group: g.clone(), target: target.clone() });
    };
    let alpha3 = g.sub(&g.sub(target, &w.x), &w.y);
    grid_counterexample(g, n, &w.y, &w.x, &alpha3)
}

/// Zero-weight counterexample: top row 0, left terminal `i` labelled `x_i`
/// and right terminal `i` labelled `x_{n-1-i}`, where `x_0, x_1, ...` are the
/// elements of order at most 2 in lexicographic order.
pub fn boolean_counterexample(g: &Group, n: usize) -> Result<LabelledGraph, ConstructionError> {
    let xs = g.gamma2();
    if xs.len() < n {
        return Err(ConstructionError::NotEnoughInvolutions {
            group: g.clone(),
            needed: n,
            available: xs.len(),
        });
    }
    let left = &xs[..n];
    let right: Vec<GroupElement> = left.iter().rev().cloned().collect();
    attach(g, n, &g.zero(), left, &right, Core::Grid)
}

/// The `n_rows x n_cols` elementary wall over `g`, all labels 0.
pub fn elementary_wall(g: &Group, n_rows: usize, n_cols: usize) -> Result<Wall, ConstructionError> {
    if n_rows < 2 || n_cols < 2 {
        return Err(ConstructionError::Size(n_rows.min(n_cols)));
    }
    Ok(Wall::elementary(g, n_rows, n_cols)?)
}

/// How to label the edges of a host graph.
pub enum Labelling<'a> {
    Constant(GroupElement),
    /// Independent uniform labels from a ChaCha8 stream seeded with the value.
    Random(u64),
    /// Each edge independently non-zero with probability `p` (uniform among
    /// the non-zero elements), from a seeded stream.
    Sparse { seed: u64, p: f64 },
    PerEdge(&'a dyn Fn(usize, &Edge) -> GroupElement),
}

/// Relabels every edge of `g` with the given strategy.
pub fn label_graph(g: &LabelledGraph, strategy: &Labelling<'_>) -> Result<LabelledGraph, ConstructionError> {
    let group = g.group().clone();
    let order = group.order();
    let mut rng = match strategy {
        Labelling::Random(seed) | Labelling::Sparse { seed, .. } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut failure = None;
    let out = g.rebuild(&g.a_set(), |i, e| {
        let label = match strategy {
            Labelling::Constant(c) => c.clone(),
            Labelling::Random(_) => group.decode(rng.as_mut().unwrap().gen_range(0..order)),
            Labelling::Sparse { p, .. } => {
                let rng = rng.as_mut().unwrap();
                if order > 1 && rng.gen_bool(p.clamp(0.0, 1.0)) {
                    group.decode(rng.gen_range(1..order))
                } else {
                    group.zero()
                }
            }
            Labelling::PerEdge(f) => f(i, e),
        };
        if let Err(err) = group.check(&label) {
            failure.get_or_insert(err);
            return Some(group.zero());
        }
        Some(label)
    })?;
    match failure {
        Some(err) => Err(err.into()),
        None => Ok(out),
    }
}

/// Relabels the host of a wall; the embedding is unchanged.
pub fn label_wall(w: &Wall, strategy: &Labelling<'_>) -> Result<Wall, ConstructionError> {
    Ok(w.with_host(label_graph(w.host(), strategy)?)?)
}

/// `k` vertex-disjoint triangles with all labels 0 and no terminals.
pub fn zero_triangles(g: &Group, k: usize) -> LabelledGraph {
    let mut edges = Vec::new();
    for t in 0..k {
        let b = 3 * t;
        for (u, v) in [(b, b + 1), (b + 1, b + 2), (b + 2, b)] {
            edges.push((u, v, g.zero()));
        }
    }
    LabelledGraph::new(g.clone(), 3 * k, &[], edges).expect("valid triangles")
}

/// `n x n` grid, all labels 0, with every boundary vertex in A.
pub fn zero_grid(g: &Group, n: usize) -> LabelledGraph {
    let mut edges = Vec::new();
    let mut a = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let v = r * n + c;
            if c + 1 < n {
                edges.push((v, v + 1, g.zero()));
            }
            if r + 1 < n {
                edges.push((v, v + n, g.zero()));
            }
            if r == 0 || c == 0 || r + 1 == n || c + 1 == n {
                a.push(v);
            }
        }
    }
    LabelledGraph::new(g.clone(), n * n, &a, edges).expect("valid grid")
}

/// Random multigraph without loops: `edges` uniform vertex pairs with
/// uniform labels, and a uniformly random terminal set of size `terminals`.
pub fn random_graph(
    g: &Group,
    vertices: usize,
    edges: usize,
    terminals: usize,
    seed: u64,
) -> Result<LabelledGraph, ConstructionError> {
    if vertices < 2 {
        return Err(ConstructionError::Size(vertices));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut list = Vec::with_capacity(edges);
    for _ in 0..edges {
        let u = rng.gen_range(0..vertices);
        let mut v = rng.gen_range(0..vertices - 1);
        if v >= u {
            v += 1;
        }
        list.push((u, v, g.decode(rng.gen_range(0..g.order()))));
    }
    let mut pool: Vec<usize> = (0..vertices).collect();
    let mut a = Vec::new();
    for _ in 0..terminals.min(vertices) {
        let k = rng.gen_range(0..pool.len());
        a.push(pool.swap_remove(k));
    }
    a.sort_unstable();
    Ok(LabelledGraph::new(g.clone(), vertices, &a, list)?)
}
