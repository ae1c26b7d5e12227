use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

use super::walk::{wilson_ust, WalkTable};

/// A loop erased by the walk observed from `X0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopEvent {
    /// Number of edges on the erased cycle.
    pub length: usize,
    /// `true` when the walk stepped straight back along the edge it came
    /// in on. Every other loop counts towards `tau`.
    pub backtrack: bool,
}

/// Marked oriented cycle-rooted spanning tree: every vertex has one
/// outgoing edge, and the mark sits on the unique cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedCrst {
    out: Vec<usize>,
    mark: usize,
    observer: usize,
}

impl MarkedCrst {
    /// Builds and validates a state. `out[v]` is the edge id leaving `v`.
    pub fn new(g: &WeightedGraph, out: Vec<usize>, mark: usize, observer: usize) -> Result<Self> {
        let n = g.vertex_count();
        if out.len() != n || mark >= n || observer >= n {
            return Err(Error::InvalidArgument("state does not match the graph".into()));
        }
        for (v, &e) in out.iter().enumerate() {
            if e >= g.edge_count() || (g.edge(e).u != v && g.edge(e).v != v) {
                return Err(Error::InvalidArgument(format!("edge {e} does not leave vertex {v}")));
            }
        }
        let state = MarkedCrst { out, mark, observer };
        let cycle = state.cycle(g);
        if !cycle.contains(&mark) {
            return Err(Error::InvalidArgument("mark is not on the cycle".into()));
        }
        // a functional graph with one cycle: every vertex reaches this cycle
        let mut on_cycle = vec![false; n];
        for &c in &cycle {
            on_cycle[c] = true;
        }
        for v in 0..n {
            let mut x = v;
            for _ in 0..n {
                if on_cycle[x] {
                    break;
                }
                x = state.next(g, x);
            }
            if !on_cycle[x] {
                return Err(Error::InvalidArgument("more than one cycle".into()));
            }
        }
        Ok(state)
    }

    /// Stationary start: Wilson tree rooted at `root`, plus a weighted
    /// outgoing edge at the root, which carries the mark.
    pub fn initial<R: Rng + ?Sized>(g: &WeightedGraph, table: &WalkTable, root: usize, observer: usize, rng: &mut R) -> Self {
        let tree = wilson_ust(g, table, root, rng);
        let (e, _) = table.step(root, rng);
        let out = tree.parent_edge.iter().map(|p| p.unwrap_or(e)).collect();
        MarkedCrst { out, mark: root, observer }
    }

    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn observer(&self) -> usize {
        self.observer
    }

    pub fn out_edges(&self) -> &[usize] {
        &self.out
    }

    fn next(&self, g: &WeightedGraph, v: usize) -> usize {
        g.edge(self.out[v]).other(v)
    }

    /// Cycle through the mark, starting at the mark.
    pub fn cycle(&self, g: &WeightedGraph) -> Vec<usize> {
        let n = g.vertex_count();
        let mut seen = vec![usize::MAX; n];
        let mut walk = Vec::new();
        let mut x = self.mark;
        while seen[x] == usize::MAX {
            seen[x] = walk.len();
            walk.push(x);
            x = self.next(g, x);
        }
        walk.split_off(seen[x])
    }

    /// One chain step: redraw the mark's outgoing edge by weight, then move
    /// the mark to its head. Reports a loop event when the walk from the
    /// observer now meets the cycle only at the mark.
    pub fn step<R: Rng + ?Sized>(&mut self, g: &WeightedGraph, table: &WalkTable, path: &mut Vec<usize>, rng: &mut R) -> Option<LoopEvent> {
        let m = self.mark;
        let (e, x) = table.step(m, rng);
        // observer's path to the mark, which ends at m
        path.clear();
        let mut y = self.observer;
        let mut hit = None;
        loop {
            if y == x {
                hit = Some(path.len());
            }
            path.push(y);
            if y == m {
                break;
            }
            y = self.next(g, y);
        }
        let event = hit.map(|i| LoopEvent { length: path.len() - i, backtrack: self.out[x] == e });
        self.out[m] = e;
        self.mark = x;
        event
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::sampler::RngStream;

    #[test]
    fn doubled_edge_alternates_deterministically() {
        let g = WeightedGraph::unweighted(2, &[(0, 1), (0, 1)]).unwrap();
        let t = WalkTable::new(&g);
        let mut rng = RngStream::new(5);
        let mut s = MarkedCrst::new(&g, vec![0, 0], 0, 0).unwrap();
        let mut path = Vec::new();
        // the walk seen from vertex 0 closes a 2-cycle every second step
        for i in 0..50 {
            let ev = s.step(&g, &t, &mut path, &mut rng);
            assert_eq!(s.mark(), (i + 1) % 2);
            assert_eq!(s.cycle(&g).len(), 2);
            assert_eq!(ev.map(|e| e.length), if i % 2 == 1 { Some(2) } else { None });
        }
    }

    #[test]
    fn validation_rejects_bad_states() {
        let g = families::complete(3);
        // edge 2 = (1,2) does not leave vertex 0
        assert!(MarkedCrst::new(&g, vec![2, 0, 1], 0, 0).is_err());
        // 0 -> 1 -> 0 cycle, mark at 2 is off the cycle
        assert!(MarkedCrst::new(&g, vec![0, 0, 1], 2, 0).is_err());
        assert!(MarkedCrst::new(&g, vec![0, 0, 1], 1, 0).is_ok());
    }

    #[test]
    fn chain_preserves_the_invariants() {
        let g = families::grid(3, 3);
        let t = WalkTable::new(&g);
        let mut rng = RngStream::new(9);
        let mut s = MarkedCrst::initial(&g, &t, 4, 0, &mut rng);
        let mut path = Vec::new();
        for _ in 0..500 {
            let ev = s.step(&g, &t, &mut path, &mut rng);
            let checked = MarkedCrst::new(&g, s.out_edges().to_vec(), s.mark(), 0).unwrap();
            if let Some(ev) = ev {
                assert_eq!(ev.length, checked.cycle(&g).len());
            }
        }
    }
}
