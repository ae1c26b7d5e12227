//! Exploration bijection between spanning trees rooted at the sink and
//! recurrent configurations.
//!
//! The explored set starts as the sink. Vertices leave a FIFO queue in the
//! order they joined; for the head vertex `v`, every edge `(u, v)` with `u`
//! unexplored is queried in ascending `(u, edge id)` order. A yes adds `u`
//! to the explored set; a no gives `u` a mark. The height of `u` is
//! `deg(u) - 1 - marks(u)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{SpanningTree, WeightedGraph};
use crate::numerics::Rational;

use super::config::{multiplicity, Sandpile, SandpileConfig};

struct Exploration {
    parent_edge: Vec<Option<usize>>,
    joined: Vec<bool>,
    marks: Vec<u64>,
}

fn explore(p: &Sandpile, mut answer: impl FnMut(usize, usize, u64) -> bool) -> Exploration {
    let g = p.graph();
    let n = g.vertex_count();
    let mut joined = vec![false; n];
    let mut parent_edge = vec![None; n];
    let mut marks = vec![0u64; n];
    let mut queue = VecDeque::from([p.sink()]);
    joined[p.sink()] = true;
    let mut queries = Vec::new();
    while let Some(v) = queue.pop_front() {
        queries.clear();
        queries.extend(g.incident(v).iter().map(|&e| (g.edge(e).other(v), e)).filter(|&(u, _)| !joined[u]));
        queries.sort_unstable();
        for &(u, e) in &queries {
            if joined[u] {
                continue;
            }
            if answer(u, e, marks[u]) {
                joined[u] = true;
                parent_edge[u] = Some(e);
                queue.push_back(u);
            } else {
                marks[u] += 1;
            }
        }
    }
    Exploration { parent_edge, joined, marks }
}

fn require_simple_multiplicities(g: &WeightedGraph) -> Result<()> {
    for e in 0..g.edge_count() {
        if multiplicity(g, e)? != 1 {
            return Err(Error::InvalidArgument(format!(
                "edge {e} has multiplicity above one; expand parallel edges first"
            )));
        }
    }
    Ok(())
}

/// Replaces every edge of integer weight `m` by `m` parallel unit edges,
/// keeping the sink. Trees of the result are the objects the bijection
/// acts on.
pub fn expand_multiplicities(g: &WeightedGraph) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    for (e, ed) in g.edges().iter().enumerate() {
        for _ in 0..multiplicity(g, e)? {
            edges.push((ed.u, ed.v, Rational::from_integer(1.into())));
        }
    }
    WeightedGraph::from_labelled(g.labels().to_vec(), edges, g.sink())
}

/// Runs the exploration with the tree answering the queries.
pub fn tree_to_sandpile(p: &Sandpile, tree: &SpanningTree) -> Result<SandpileConfig> {
    require_simple_multiplicities(p.graph())?;
    tree.validate(p.graph())?;
    if tree.root != p.sink() {
        return Err(Error::NotATree(format!("tree is rooted at {}, not at the sink", tree.root)));
    }
    let ex = explore(p, |u, e, _| tree.parent_edge[u] == Some(e));
    let mut heights: Vec<u64> = (0..p.vertex_count()).map(|v| p.degree(v) - 1 - ex.marks[v]).collect();
    heights[p.sink()] = 0;
    Ok(SandpileConfig { heights })
}

/// Runs the exploration with the heights answering the queries: `u` says
/// yes once it holds `deg(u) - 1 - height(u)` marks.
pub fn sandpile_to_tree(p: &Sandpile, c: &SandpileConfig) -> Result<SpanningTree> {
    require_simple_multiplicities(p.graph())?;
    if c.heights.len() != p.vertex_count() || p.vertices().any(|v| c.heights[v] >= p.degree(v)) {
        return Err(Error::NotRecurrent);
    }
    let ex = explore(p, |u, _, marks| marks == p.degree(u) - 1 - c.heights[u]);
    if ex.joined.iter().any(|j| !j) {
        return Err(Error::NotRecurrent);
    }
    Ok(SpanningTree { root: p.sink(), parent_edge: ex.parent_edge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::forests::oracle::spanning_trees;
    use std::collections::BTreeSet;

    fn all_trees(p: &Sandpile) -> Vec<SpanningTree> {
        spanning_trees(p.graph())
            .unwrap()
            .iter()
            .map(|t| SpanningTree::from_edges(p.graph(), t, p.sink()).unwrap())
            .collect()
    }

    #[test]
    fn house_trees_give_the_recurrent_set() {
        let p = Sandpile::new(families::house().graph()).unwrap();
        let got: BTreeSet<Vec<u64>> =
            all_trees(&p).iter().map(|t| tree_to_sandpile(&p, t).unwrap().heights[..2].to_vec()).collect();
        let want: BTreeSet<Vec<u64>> = [vec![1, 1], vec![0, 1], vec![1, 0]].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn round_trip_is_identity() {
        let p = Sandpile::new(families::house().graph()).unwrap();
        for t in all_trees(&p) {
            assert_eq!(sandpile_to_tree(&p, &tree_to_sandpile(&p, &t).unwrap()).unwrap(), t);
        }
        let zero = p.config(vec![0, 0, 0]).unwrap();
        assert_eq!(sandpile_to_tree(&p, &zero).unwrap_err(), Error::NotRecurrent);
    }

    #[test]
    fn wired_two_by_two_round_trip() {
        // 2x2 grid with every boundary edge sent to a sink vertex 4
        let g = WeightedGraph::unweighted(
            5,
            &[(0, 1), (2, 3), (0, 2), (1, 3), (0, 4), (0, 4), (1, 4), (1, 4), (2, 4), (2, 4), (3, 4), (3, 4)],
        )
        .unwrap()
        .with_sink(4);
        let p = Sandpile::new(&g).unwrap();
        let trees = all_trees(&p);
        assert_eq!(trees.len(), 192);
        let mut seen = BTreeSet::new();
        for t in &trees {
            let c = tree_to_sandpile(&p, t).unwrap();
            assert!(p.is_recurrent(&c).unwrap());
            assert!(seen.insert(c.clone()));
            assert_eq!(&sandpile_to_tree(&p, &c).unwrap(), t);
        }
    }

    #[test]
    fn single_vertex_patch_first_edge_gives_top_state() {
        let g = WeightedGraph::unweighted(2, &[(0, 1), (0, 1), (0, 1), (0, 1)]).unwrap().with_sink(1);
        let p = Sandpile::new(&g).unwrap();
        let t = SpanningTree { root: 1, parent_edge: vec![Some(0), None] };
        assert_eq!(tree_to_sandpile(&p, &t).unwrap().heights, vec![3, 0]);
    }

    #[test]
    fn star_to_the_sink_has_no_marks() {
        let g = families::wheel(5).with_sink(5);
        let p = Sandpile::new(&g).unwrap();
        let spokes: Vec<usize> = (5..10).collect();
        let t = SpanningTree::from_edges(&g, &spokes, 5).unwrap();
        let c = tree_to_sandpile(&p, &t).unwrap();
        assert!(p.vertices().all(|v| c.heights[v] == p.degree(v) - 1));
    }

    #[test]
    fn expanded_multigraph_bijects_with_weighted_tree_count() {
        let g = WeightedGraph::from_indexed(
            3,
            vec![(0, 1, Rational::from_integer(2.into())), (1, 2, Rational::from_integer(1.into())), (0, 2, Rational::from_integer(3.into()))],
            Some(2),
        )
        .unwrap();
        assert!(matches!(tree_to_sandpile(&Sandpile::new(&g).unwrap(), &SpanningTree { root: 2, parent_edge: vec![Some(2), Some(1), None] }), Err(Error::InvalidArgument(_))));
        let x = expand_multiplicities(&g).unwrap();
        let p = Sandpile::new(&x).unwrap();
        let trees = all_trees(&p);
        // 2*1 + 2*3 + 1*3
        assert_eq!(trees.len(), 11);
        let configs: BTreeSet<_> = trees.iter().map(|t| tree_to_sandpile(&p, t).unwrap()).collect();
        assert_eq!(configs.len(), 11);
    }
}
