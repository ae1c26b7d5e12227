use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{SpanningTree, WeightedGraph};
use crate::numerics::Scalar;

/// Per-vertex cumulative edge weights for weighted random-walk steps.
#[derive(Debug, Clone)]
pub struct WalkTable {
    cumulative: Vec<Vec<f64>>,
    edges: Vec<Vec<usize>>,
    heads: Vec<Vec<usize>>,
}

impl WalkTable {
    pub fn new(g: &WeightedGraph) -> Self {
        let n = g.vertex_count();
        let mut cumulative = Vec::with_capacity(n);
        let mut edges = Vec::with_capacity(n);
        let mut heads = Vec::with_capacity(n);
        for v in 0..n {
            let mut acc = 0.0;
            let mut c = Vec::new();
            for &e in g.incident(v) {
                acc += Scalar::to_f64(&g.edge(e).weight);
                c.push(acc);
            }
            cumulative.push(c);
            edges.push(g.incident(v).to_vec());
            heads.push(g.incident(v).iter().map(|&e| g.edge(e).other(v)).collect());
        }
        WalkTable { cumulative, edges, heads }
    }

    /// One weighted step from `v`: `(edge id, neighbour)`.
    pub fn step<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> (usize, usize) {
        let c = &self.cumulative[v];
        let total = *c.last().expect("connected graph has no isolated vertex");
        let x = rng.random::<f64>() * total;
        let i = c.partition_point(|&t| t <= x).min(c.len() - 1);
        (self.edges[v][i], self.heads[v][i])
    }
}

/// Loop-erased random walk from `start` until it enters `targets`. Returns
/// the vertex path, ending in the target vertex hit.
pub fn lerw<R: Rng + ?Sized>(
    g: &WeightedGraph,
    table: &WalkTable,
    start: usize,
    targets: &[usize],
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    let mut is_target = vec![false; n];
    for &t in targets {
        if t >= n {
            return Err(Error::IndexOutOfRange { index: t, dim: n });
        }
        is_target[t] = true;
    }
    if targets.is_empty() || n == 1 {
        return Err(Error::UnreachableTarget);
    }
    if is_target[start] {
        return Err(Error::StartInTarget);
    }
    let mut pos = vec![usize::MAX; n];
    let mut path = vec![start];
    pos[start] = 0;
    let mut x = start;
    loop {
        let (_, y) = table.step(x, rng);
        if is_target[y] {
            path.push(y);
            return Ok(path);
        }
        if pos[y] != usize::MAX {
            for &z in &path[pos[y] + 1..] {
                pos[z] = usize::MAX;
            }
            path.truncate(pos[y] + 1);
        } else {
            pos[y] = path.len();
            path.push(y);
        }
        x = y;
    }
}

/// Wilson's algorithm: a spanning arborescence towards `root` drawn with
/// probability proportional to the product of its edge weights.
pub fn wilson_ust<R: Rng + ?Sized>(g: &WeightedGraph, table: &WalkTable, root: usize, rng: &mut R) -> SpanningTree {
    let n = g.vertex_count();
    let mut in_tree = vec![false; n];
    let mut next = vec![None; n];
    in_tree[root] = true;
    for start in 0..n {
        let mut x = start;
        while !in_tree[x] {
            let (e, y) = table.step(x, rng);
            next[x] = Some(e);
            x = y;
        }
        let mut x = start;
        while !in_tree[x] {
            in_tree[x] = true;
            x = g.edge(next[x].expect("walked")).other(x);
        }
    }
    next[root] = None;
    SpanningTree { root, parent_edge: next }
}
