//! Exhaustive enumerators over edge subsets. Independent of the linear
//! algebra in the parent module; used only to check it.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::numerics::{Field, Rational};

/// Largest edge count the enumerators accept.
pub const MAX_ORACLE_EDGES: usize = 24;

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn check_size(g: &WeightedGraph) -> Result<()> {
    if g.edge_count() > MAX_ORACLE_EDGES {
        return Err(Error::TooLarge(format!(
            "{} edges exceeds the oracle limit of {MAX_ORACLE_EDGES}",
            g.edge_count()
        )));
    }
    Ok(())
}

/// Calls `f` with every `m`-bit subset of `0..e` (Gosper's hack).
fn for_each_subset(e: usize, m: usize, mut f: impl FnMut(u32)) {
    if m > e {
        return;
    }
    if m == 0 {
        f(0);
        return;
    }
    let limit: u64 = 1 << e;
    let mut s: u64 = (1 << m) - 1;
    while s < limit {
        f(s as u32);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

fn mask_weight(g: &WeightedGraph, mask: u32) -> Rational {
    let mut w = Rational::one();
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        w *= &g.edge(e).weight;
        m &= m - 1;
    }
    w
}

/// Number of connected components of the spanning subgraph `mask`, or
/// `None` if it contains a cycle.
fn forest_components(g: &WeightedGraph, mask: u32) -> Option<usize> {
    let mut dsu = Dsu::new(g.vertex_count());
    let mut comps = g.vertex_count();
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        let ed = g.edge(e);
        if !dsu.union(ed.u, ed.v) {
            return None;
        }
        comps -= 1;
        m &= m - 1;
    }
    Some(comps)
}

fn is_connected(g: &WeightedGraph, mask: u32) -> bool {
    let mut dsu = Dsu::new(g.vertex_count());
    let mut comps = g.vertex_count();
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        if dsu.union(g.edge(e).u, g.edge(e).v) {
            comps -= 1;
        }
        m &= m - 1;
    }
    comps == 1
}

/// `F_k` by summing over all acyclic edge sets of size `|V| - k`.
pub fn brute_force_forests(g: &WeightedGraph, k: usize) -> Result<Rational> {
    check_size(g)?;
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Ok(Rational::zero());
    }
    let mut total = Rational::zero();
    for_each_subset(g.edge_count(), n - k, |mask| {
        if forest_components(g, mask) == Some(k) {
            total = total.clone() + mask_weight(g, mask);
        }
    });
    Ok(total)
}

/// Weighted sum of spanning unicycles (connected spanning subgraphs with
/// `|V|` edges).
pub fn brute_force_unicycles(g: &WeightedGraph) -> Result<Rational> {
    check_size(g)?;
    let mut total = Rational::zero();
    for_each_subset(g.edge_count(), g.vertex_count(), |mask| {
        if is_connected(g, mask) {
            total = total.clone() + mask_weight(g, mask);
        }
    });
    Ok(total)
}

/// Unweighted number of connected spanning subgraphs with exactly `m` edges.
pub fn connected_subgraphs(g: &WeightedGraph, m: usize) -> Result<u64> {
    check_size(g)?;
    let mut count = 0;
    for_each_subset(g.edge_count(), m, |mask| {
        if is_connected(g, mask) {
            count += 1;
        }
    });
    Ok(count)
}

/// Every spanning tree as a sorted list of edge ids.
pub fn spanning_trees(g: &WeightedGraph) -> Result<Vec<Vec<usize>>> {
    check_size(g)?;
    let mut out = Vec::new();
    for_each_subset(g.edge_count(), g.vertex_count() - 1, |mask| {
        if forest_components(g, mask) == Some(1) {
            out.push((0..g.edge_count()).filter(|e| mask >> e & 1 == 1).collect());
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numerics::rational;

    #[test]
    fn small_counts() {
        let k3 = families::complete(3);
        assert_eq!(brute_force_forests(&k3, 1).unwrap(), rational(3, 1));
        assert_eq!(brute_force_forests(&k3, 2).unwrap(), rational(3, 1));
        assert_eq!(brute_force_forests(&k3, 3).unwrap(), rational(1, 1));
        assert_eq!(brute_force_forests(&families::cycle(4), 2).unwrap(), rational(6, 1));
        assert_eq!(brute_force_unicycles(&families::complete(4)).unwrap(), rational(15, 1));
        assert_eq!(spanning_trees(&families::complete(4)).unwrap().len(), 16);
    }

    #[test]
    fn subset_enumeration_counts_binomials() {
        let mut c = 0;
        for_each_subset(10, 4, |_| c += 1);
        assert_eq!(c, 210);
        let mut c = 0;
        for_each_subset(5, 0, |_| c += 1);
        assert_eq!(c, 1);
    }

    #[test]
    fn rejects_large_graphs() {
        let g = families::grid(4, 5);
        assert!(matches!(brute_force_forests(&g, 1), Err(Error::TooLarge(_))));
    }
}
