//! Weighted undirected multigraphs, planar embeddings and duals.

mod embed;
pub mod io;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numerics::{is_positive, rational_to_string, Field, Rational};

pub use embed::{DualGraph, Embedded, RotationSystem};

/// An undirected edge. Its id is its position in [`WeightedGraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

impl Edge {
    /// The endpoint opposite `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Connected, loop-free weighted multigraph with an optional sink.
///
/// Vertices are dense indices `0..n` carrying string labels. The value is
/// immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    sink: Option<usize>,
    incidence: Vec<Vec<usize>>,
}

impl WeightedGraph {
    /// Builds and validates a graph from labelled vertices and edges.
    pub fn new<L: AsRef<str>>(
        vertices: &[L],
        edges: &[(L, L, Rational)],
        sink: Option<&str>,
    ) -> Result<Self> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let lookup = |edge: usize, l: &str| {
            index.get(l).copied().ok_or_else(|| Error::UnknownEndpoint { edge, vertex: l.to_string() })
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for (id, (u, v, w)) in edges.iter().enumerate() {
            indexed.push((lookup(id, u.as_ref())?, lookup(id, v.as_ref())?, w.clone()));
        }
        let sink = match sink {
            Some(s) => Some(index.get(s).copied().ok_or_else(|| Error::InvalidArgument(format!("sink {s:?} is not a vertex")))?),
            None => None,
        };
        Self::assemble(labels, index, indexed, sink)
    }

    /// Builds a graph on vertices `0..n`, labelled by their decimal index.
    pub fn from_indexed(n: usize, edges: Vec<(usize, usize, Rational)>, sink: Option<usize>) -> Result<Self> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::from_labelled(labels, edges, sink)
    }

    /// Builds a graph with the given labels and index-based edges.
    pub fn from_labelled(labels: Vec<String>, edges: Vec<(usize, usize, Rational)>, sink: Option<usize>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        for (id, &(u, v, _)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::UnknownEndpoint { edge: id, vertex: x.to_string() });
                }
            }
        }
        if let Some(s) = sink {
            if s >= n {
                return Err(Error::InvalidArgument(format!("sink index {s} out of range")));
            }
        }
        Self::assemble(labels, index, edges, sink)
    }

    /// Unit-weight convenience constructor.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::from_indexed(n, edges.iter().map(|&(u, v)| (u, v, Rational::one())).collect(), None)
    }

    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<(usize, usize, Rational)>,
        sink: Option<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut incidence = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        for (id, (u, v, w)) in edges.into_iter().enumerate() {
            if u == v {
                return Err(Error::SelfLoop { edge: id, vertex: labels[u].clone() });
            }
            if !is_positive(&w) {
                return Err(Error::NonPositiveWeight { edge: id, weight: rational_to_string(&w) });
            }
            incidence[u].push(id);
            incidence[v].push(id);
            out.push(Edge { u, v, weight: w });
        }
        let graph = WeightedGraph { labels, index, edges: out, sink, incidence };
        if n == 0 || !graph.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(graph)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &e in &self.incidence[x] {
                let y = self.edges[e].other(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    /// Sink, or an error naming its absence.
    pub fn require_sink(&self) -> Result<usize> {
        self.sink.ok_or(Error::MissingSink)
    }

    /// Same graph with a different sink.
    pub fn with_sink(&self, sink: usize) -> Self {
        assert!(sink < self.vertex_count());
        WeightedGraph { sink: Some(sink), ..self.clone() }
    }

    /// Edge ids incident to `v`, ascending.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Number of incident edge ends (multiplicity counted).
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn weighted_degree(&self, v: usize) -> Rational {
        self.incidence[v].iter().fold(Rational::zero(), |acc, &e| acc + &self.edges[e].weight)
    }

    pub fn total_weight(&self) -> Rational {
        self.edges.iter().fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    /// Mean weighted degree `2 Σ w / |V|`.
    pub fn mean_weighted_degree(&self) -> Rational {
        self.total_weight() * Rational::from_i64(2) / Rational::from_i64(self.vertex_count() as i64)
    }

    /// `true` when every edge carries the same weight.
    pub fn is_uniformly_weighted(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].weight == w[1].weight)
    }

    /// Edge ids whose removal disconnects the graph. Parallel edges are
    /// never bridges.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = Vec::new();
        let mut timer = 0;
        // iterative DFS: (vertex, parent edge, next incidence position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
        disc[0] = 0;
        low[0] = 0;
        while let Some(&mut (x, pe, ref mut pos)) = stack.last_mut() {
            if *pos < self.incidence[x].len() {
                let e = self.incidence[x][*pos];
                *pos += 1;
                if e == pe {
                    continue;
                }
                let y = self.edges[e].other(x);
                if disc[y] == usize::MAX {
                    timer += 1;
                    disc[y] = timer;
                    low[y] = timer;
                    stack.push((y, e, 0));
                } else {
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[x]);
                    if low[x] > disc[p] {
                        out.push(pe);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Identifies `set` to one new sink vertex appended after the surviving
    /// vertices. Edges inside the set are dropped; the others are kept in
    /// their original order.
    pub fn merge_vertices(&self, set: &[usize]) -> Result<WeightedGraph> {
        if set.is_empty() {
            return Err(Error::EmptyMergeSet);
        }
        let n = self.vertex_count();
        let mut merged = vec![false; n];
        for &v in set {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, dim: n });
            }
            merged[v] = true;
        }
        let mut map = vec![0; n];
        let mut labels = Vec::new();
        for v in 0..n {
            if !merged[v] {
                map[v] = labels.len();
                labels.push(self.labels[v].clone());
            }
        }
        let sink = labels.len();
        let mut sink_label = "sink".to_string();
        while labels.contains(&sink_label) {
            sink_label.push('\'');
        }
        labels.push(sink_label);
        for v in 0..n {
            if merged[v] {
                map[v] = sink;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| !(merged[e.u] && merged[e.v]))
            .map(|e| (map[e.u], map[e.v], e.weight.clone()))
            .collect();
        WeightedGraph::from_labelled(labels, edges, Some(sink))
    }
}

/// Spanning arborescence towards `root`, stored as the edge each vertex
/// uses to step towards the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    pub root: usize,
    pub parent_edge: Vec<Option<usize>>,
}

impl SpanningTree {
    /// Checks that the parent edges form a spanning arborescence of `graph`.
    pub fn validate(&self, graph: &WeightedGraph) -> Result<()> {
        let n = graph.vertex_count();
        if self.parent_edge.len() != n || self.root >= n {
            return Err(Error::NotATree(format!("expected {n} entries")));
        }
        for (v, pe) in self.parent_edge.iter().enumerate() {
            match (v == self.root, pe) {
                (true, Some(_)) => return Err(Error::NotATree("root has a parent".into())),
                (false, None) => return Err(Error::NotATree(format!("vertex {v} has no parent"))),
                (false, Some(e)) if *e >= graph.edge_count() || (graph.edge(*e).u != v && graph.edge(*e).v != v) => {
                    return Err(Error::NotATree(format!("edge {e} is not incident to vertex {v}")))
                }
                _ => {}
            }
        }
        // every vertex must reach the root within n steps
        let mut state = vec![0u8; n];
        state[self.root] = 2;
        for start in 0..n {
            let mut path = Vec::new();
            let mut x = start;
            while state[x] == 0 {
                state[x] = 1;
                path.push(x);
                x = self.parent(graph, x).expect("non-root has a parent");
            }
            if state[x] == 1 {
                return Err(Error::NotATree("parent pointers contain a cycle".into()));
            }
            for p in path {
                state[p] = 2;
            }
        }
        Ok(())
    }

    pub fn parent(&self, graph: &WeightedGraph, v: usize) -> Option<usize> {
        self.parent_edge[v].map(|e| graph.edge(e).other(v))
    }

    /// Tree edge ids, ascending.
    pub fn edge_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.parent_edge.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids
    }

    /// Product of the tree's edge weights.
    pub fn weight(&self, graph: &WeightedGraph) -> Rational {
        self.parent_edge.iter().flatten().fold(Rational::one(), |acc, &e| acc * &graph.edge(e).weight)
    }

    /// Orients an undirected spanning tree, given as edge ids, towards `root`.
    pub fn from_edges(graph: &WeightedGraph, edges: &[usize], root: usize) -> Result<SpanningTree> {
        let n = graph.vertex_count();
        if edges.len() + 1 != n {
            return Err(Error::NotATree(format!("{} edges for {n} vertices", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &e in edges {
            let ed = graph.edge(e);
            adj[ed.u].push(e);
            adj[ed.v].push(e);
        }
        let mut parent_edge = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &e in &adj[x] {
                let y = graph.edge(e).other(x);
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = Some(e);
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotATree("edge set does not span".into()));
        }
        Ok(SpanningTree { root, parent_edge })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;

    fn k3() -> WeightedGraph {
        WeightedGraph::new(
            &["1", "2", "3"],
            &[("1", "2", rational(1, 1)), ("2", "3", rational(1, 1)), ("1", "3", rational(1, 1))],
            None,
        )
        .unwrap()
    }

    #[test]
    fn triangle_has_mean_degree_two() {
        assert_eq!(k3().mean_weighted_degree(), rational(2, 1));
    }

    #[test]
    fn construction_errors() {
        let e = WeightedGraph::new::<&str>(&["1", "2"], &[], None).unwrap_err();
        assert_eq!(e, Error::DisconnectedGraph);
        let e = WeightedGraph::new(&["1"], &[("1", "1", rational(1, 1))], None).unwrap_err();
        assert!(matches!(e, Error::SelfLoop { .. }));
        let e = WeightedGraph::new(&["1", "2"], &[("1", "2", rational(0, 1))], None).unwrap_err();
        assert!(matches!(e, Error::NonPositiveWeight { .. }));
        let e = WeightedGraph::new(&["1", "2"], &[("1", "3", rational(1, 1))], None).unwrap_err();
        assert!(matches!(e, Error::UnknownEndpoint { .. }));
    }

    #[test]
    fn bridges_ignore_parallel_edges() {
        let g = WeightedGraph::unweighted(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(g.bridges(), vec![3]);
        let g = WeightedGraph::unweighted(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(g.bridges().is_empty());
        let g = WeightedGraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.bridges(), vec![0, 1]);
    }

    #[test]
    fn merging_adjacent_triangle_vertices() {
        let g = k3().merge_vertices(&[0, 1]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.sink(), Some(1));
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn merging_a_singleton_relabels_only() {
        let g = k3().merge_vertices(&[1]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(k3().merge_vertices(&[]).unwrap_err(), Error::EmptyMergeSet);
    }

    #[test]
    fn wired_three_by_three_grid_has_one_interior_vertex() {
        let g = crate::families::grid(3, 3);
        let boundary: Vec<usize> = (0..9).filter(|&v| v != 4).collect();
        let w = g.merge_vertices(&boundary).unwrap();
        assert_eq!(w.vertex_count(), 2);
        assert_eq!(w.degree(0), 4);
    }

    #[test]
    fn tree_validation() {
        let g = k3();
        let t = SpanningTree::from_edges(&g, &[0, 1], 2).unwrap();
        t.validate(&g).unwrap();
        assert_eq!(t.parent(&g, 0), Some(1));
        let bad = SpanningTree { root: 2, parent_edge: vec![Some(0), Some(0), None] };
        assert!(matches!(bad.validate(&g), Err(Error::NotATree(_))));
    }
}
