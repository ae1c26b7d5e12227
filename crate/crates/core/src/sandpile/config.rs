use std::collections::VecDeque;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Grain counts, indexed by vertex id. The sink entry is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SandpileConfig {
    pub heights: Vec<u64>,
}

impl SandpileConfig {
    pub fn total(&self) -> u64 {
        self.heights.iter().sum()
    }
}

/// A graph with a sink, read as a multigraph: edge weights are edge
/// multiplicities and must be positive integers.
#[derive(Debug, Clone)]
pub struct Sandpile {
    graph: WeightedGraph,
    sink: usize,
    degree: Vec<u64>,
    /// `(neighbour, multiplicity)`, sink excluded, parallel edges combined.
    neighbours: Vec<Vec<(usize, u64)>>,
    /// Multiplicity of the edges from each vertex to the sink.
    to_sink: Vec<u64>,
    edge_total: u64,
}

pub(crate) fn multiplicity(g: &WeightedGraph, e: usize) -> Result<u64> {
    let w = &g.edge(e).weight;
    if !w.is_integer() {
        return Err(Error::NonIntegerWeight { edge: e, weight: w.to_string() });
    }
    w.to_integer().to_u64().ok_or_else(|| Error::NonIntegerWeight { edge: e, weight: w.to_string() })
}

impl Sandpile {
    pub fn new(graph: &WeightedGraph) -> Result<Self> {
        let sink = graph.sink().ok_or(Error::MissingSink)?;
        let n = graph.vertex_count();
        let mut degree = vec![0u64; n];
        let mut neighbours: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        let mut to_sink = vec![0u64; n];
        let mut edge_total = 0;
        for (e, ed) in graph.edges().iter().enumerate() {
            let m = multiplicity(graph, e)?;
            edge_total += m;
            degree[ed.u] += m;
            degree[ed.v] += m;
            for (a, b) in [(ed.u, ed.v), (ed.v, ed.u)] {
                if b == sink {
                    to_sink[a] += m;
                } else if let Some(slot) = neighbours[a].iter_mut().find(|(x, _)| *x == b) {
                    slot.1 += m;
                } else {
                    neighbours[a].push((b, m));
                }
            }
        }
        Ok(Sandpile { graph: graph.clone(), sink, degree, neighbours, to_sink, edge_total })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn vertex_count(&self) -> usize {
        self.degree.len()
    }

    /// Degree counted with multiplicity.
    pub fn degree(&self, v: usize) -> u64 {
        self.degree[v]
    }

    /// `|E|` counted with multiplicity.
    pub fn edge_total(&self) -> u64 {
        self.edge_total
    }

    /// Non-sink vertices in id order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&v| v != self.sink)
    }

    /// Builds a configuration, zeroing the sink entry.
    pub fn config(&self, mut heights: Vec<u64>) -> Result<SandpileConfig> {
        if heights.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch { expected: self.vertex_count(), found: heights.len() });
        }
        heights[self.sink] = 0;
        Ok(SandpileConfig { heights })
    }

    /// Largest stable configuration, `deg(v) - 1` everywhere.
    pub fn max_stable(&self) -> SandpileConfig {
        let mut heights: Vec<u64> = self.degree.iter().map(|d| d.saturating_sub(1)).collect();
        heights[self.sink] = 0;
        SandpileConfig { heights }
    }

    pub fn is_stable(&self, c: &SandpileConfig) -> bool {
        self.vertices().all(|v| c.heights[v] < self.degree[v])
    }

    fn first_unstable(&self, c: &SandpileConfig) -> Option<usize> {
        self.vertices().find(|&v| c.heights[v] >= self.degree[v])
    }

    /// Fires `v` once; grains sent to the sink are lost.
    pub fn topple(&self, c: &SandpileConfig, v: usize) -> Result<SandpileConfig> {
        if v >= self.vertex_count() {
            return Err(Error::IndexOutOfRange { index: v, dim: self.vertex_count() });
        }
        if v == self.sink || c.heights[v] < self.degree[v] {
            return Err(Error::VertexStable(v));
        }
        let mut out = c.clone();
        out.heights[v] -= self.degree[v];
        for &(u, m) in &self.neighbours[v] {
            out.heights[u] += m;
        }
        Ok(out)
    }

    /// Stabilizes with a FIFO worklist, firing each vertex as often as it
    /// can on every visit. Returns the stable configuration and the number
    /// of times each vertex fired.
    pub fn stabilize(&self, c: &SandpileConfig) -> (SandpileConfig, Vec<u64>) {
        let order: Vec<usize> = self.vertices().collect();
        self.stabilize_in_order(c, &order)
    }

    /// As [`Sandpile::stabilize`], with the initial worklist in the given
    /// vertex order.
    pub fn stabilize_in_order(&self, c: &SandpileConfig, order: &[usize]) -> (SandpileConfig, Vec<u64>) {
        let n = self.vertex_count();
        let mut h = c.heights.clone();
        let mut fired = vec![0u64; n];
        let mut queued = vec![false; n];
        let mut work = VecDeque::new();
        for &v in order {
            if v != self.sink && !queued[v] && h[v] >= self.degree[v] {
                queued[v] = true;
                work.push_back(v);
            }
        }
        while let Some(v) = work.pop_front() {
            queued[v] = false;
            let t = h[v] / self.degree[v];
            if t == 0 {
                continue;
            }
            h[v] -= t * self.degree[v];
            fired[v] += t;
            for &(u, m) in &self.neighbours[v] {
                h[u] += t * m;
                if !queued[u] && h[u] >= self.degree[u] {
                    queued[u] = true;
                    work.push_back(u);
                }
            }
        }
        (SandpileConfig { heights: h }, fired)
    }

    /// Burning test: add the grains the sink would send, stabilize, and
    /// check that every vertex fired exactly once.
    pub fn is_recurrent(&self, c: &SandpileConfig) -> Result<bool> {
        if let Some(v) = self.first_unstable(c) {
            return Err(Error::Unstable(v));
        }
        Ok(self.burn(c))
    }

    pub(crate) fn burn(&self, c: &SandpileConfig) -> bool {
        let mut fired = c.clone();
        for v in self.vertices() {
            fired.heights[v] += self.to_sink[v];
        }
        let (_, counts) = self.stabilize(&fired);
        self.vertices().all(|v| counts[v] == 1)
    }

    /// `sum of heights - |E| + deg(s)`.
    pub fn level(&self, c: &SandpileConfig) -> i64 {
        c.total() as i64 - self.edge_total as i64 + self.degree[self.sink] as i64
    }

    /// Adds one grain at `v` and stabilizes.
    pub fn add_grain(&self, c: &SandpileConfig, v: usize) -> Result<(SandpileConfig, Vec<u64>)> {
        if v >= self.vertex_count() {
            return Err(Error::IndexOutOfRange { index: v, dim: self.vertex_count() });
        }
        let mut next = c.clone();
        if v != self.sink {
            next.heights[v] += 1;
        }
        Ok(self.stabilize(&next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numerics::rational;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn house() -> Sandpile {
        Sandpile::new(families::house().graph()).unwrap()
    }

    #[test]
    fn topple_on_the_house() {
        let p = house();
        let c = p.config(vec![2, 2, 0]).unwrap();
        assert_eq!(p.topple(&c, 0).unwrap().heights, vec![0, 3, 0]);
        let s = p.config(vec![1, 0, 0]).unwrap();
        assert_eq!(p.topple(&s, 0).unwrap_err(), Error::VertexStable(0));
    }

    #[test]
    fn single_vertex_patch_sends_everything_to_the_sink() {
        let g = WeightedGraph::unweighted(2, &[(0, 1), (0, 1), (0, 1), (0, 1)]).unwrap().with_sink(1);
        let p = Sandpile::new(&g).unwrap();
        let c = p.config(vec![4, 0]).unwrap();
        assert_eq!(p.topple(&c, 0).unwrap().heights, vec![0, 0]);
    }

    #[test]
    fn stabilize_on_the_house() {
        let p = house();
        let (s, fired) = p.stabilize(&p.config(vec![2, 2, 0]).unwrap());
        assert_eq!(s.heights, vec![1, 1, 0]);
        assert_eq!(fired, vec![1, 1, 0]);
        let (same, none) = p.stabilize(&s);
        assert_eq!(same, s);
        assert!(none.iter().all(|&f| f == 0));
    }

    #[test]
    fn burning_test_on_the_house() {
        let p = house();
        let mut recurrent = 0;
        for a in 0..2 {
            for b in 0..2 {
                if p.is_recurrent(&p.config(vec![a, b, 0]).unwrap()).unwrap() {
                    recurrent += 1;
                }
            }
        }
        assert_eq!(recurrent, 3);
        assert!(!p.is_recurrent(&p.config(vec![0, 0, 0]).unwrap()).unwrap());
        assert_eq!(p.is_recurrent(&p.config(vec![2, 0, 0]).unwrap()).unwrap_err(), Error::Unstable(0));
    }

    #[test]
    fn weights_are_multiplicities() {
        let g = WeightedGraph::from_indexed(2, vec![(0, 1, rational(3, 1))], Some(1)).unwrap();
        assert_eq!(Sandpile::new(&g).unwrap().degree(0), 3);
        let h = WeightedGraph::from_indexed(2, vec![(0, 1, rational(1, 2))], Some(1)).unwrap();
        assert!(matches!(Sandpile::new(&h), Err(Error::NonIntegerWeight { .. })));
        assert_eq!(Sandpile::new(&families::cycle(3)).unwrap_err(), Error::MissingSink);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn stabilization_is_abelian(seed in any::<u64>(), grains in proptest::collection::vec(0u64..12, 9)) {
            let g = families::grid(3, 4).with_sink(11);
            let p = Sandpile::new(&g).unwrap();
            let mut h = grains;
            h.extend([0, 0, 0]);
            let c = p.config(h).unwrap();
            let (fifo, f1) = p.stabilize(&c);
            let mut order: Vec<usize> = p.vertices().collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let (other, f2) = p.stabilize_in_order(&c, &order);
            prop_assert_eq!(&fifo, &other);
            prop_assert_eq!(f1, f2);
            prop_assert!(p.is_stable(&fifo));
            // one-at-a-time toppling agrees too
            let mut slow = c.clone();
            while let Some(v) = p.first_unstable(&slow) {
                slow = p.topple(&slow, v).unwrap();
            }
            prop_assert_eq!(slow, fifo);
        }
    }
}
