use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::WeightedGraph;

/// Cyclic order of incident edge ids around every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn new(order: Vec<Vec<usize>>) -> Self {
        RotationSystem { order }
    }

    pub fn at(&self, v: usize) -> &[usize] {
        &self.order[v]
    }

    pub fn into_inner(self) -> Vec<Vec<usize>> {
        self.order
    }

    /// Counter-clockwise order read off a straight-line drawing. Parallel
    /// edges are fanned out in id order at their lower endpoint.
    pub fn from_positions(graph: &WeightedGraph, pos: &[(f64, f64)]) -> RotationSystem {
        let order = (0..graph.vertex_count())
            .map(|v| {
                let mut es = graph.incident(v).to_vec();
                let angle = |e: usize| {
                    let w = graph.edge(e).other(v);
                    (pos[w].1 - pos[v].1).atan2(pos[w].0 - pos[v].0)
                };
                es.sort_by(|&a, &b| {
                    angle(a).partial_cmp(&angle(b)).unwrap_or(Ordering::Equal).then_with(|| {
                        if v < graph.edge(a).other(v) {
                            a.cmp(&b)
                        } else {
                            b.cmp(&a)
                        }
                    })
                });
                es
            })
            .collect();
        RotationSystem { order }
    }

    fn validate(&self, graph: &WeightedGraph) -> Result<()> {
        let n = graph.vertex_count();
        if self.order.len() != n {
            return Err(Error::IncompleteRotation(format!("{} vertex orders for {n} vertices", self.order.len())));
        }
        for v in 0..n {
            let mut got = self.order[v].clone();
            got.sort_unstable();
            if got != graph.incident(v) {
                return Err(Error::IncompleteRotation(format!(
                    "order at vertex {} does not list its incident edges exactly once",
                    graph.label(v)
                )));
            }
        }
        Ok(())
    }
}

/// Index of a directed edge end: `2e` runs `u -> v`, `2e + 1` runs `v -> u`.
pub type Dart = usize;

/// A connected graph with a planar rotation system and its traced faces.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedded {
    graph: WeightedGraph,
    rotation: RotationSystem,
    faces: Vec<Vec<Dart>>,
    face_of: Vec<usize>,
}

impl Embedded {
    /// Validates the rotation and traces faces. Fails unless Euler's formula
    /// `V - E + F = 2` holds.
    pub fn new(graph: WeightedGraph, rotation: RotationSystem) -> Result<Embedded> {
        rotation.validate(&graph)?;
        let m = graph.edge_count();
        let mut position = vec![0; 2 * m];
        for v in 0..graph.vertex_count() {
            for (i, &e) in rotation.at(v).iter().enumerate() {
                position[leaving(&graph, e, v)] = i;
            }
        }
        let mut face_of = vec![usize::MAX; 2 * m];
        let mut faces = Vec::new();
        for start in 0..2 * m {
            if face_of[start] != usize::MAX {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = faces.len();
                face.push(d);
                let b = head(&graph, d);
                let here = &rotation.order[b];
                let p = position[d ^ 1];
                d = leaving(&graph, here[(p + 1) % here.len()], b);
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
        let (v, e, f) = (graph.vertex_count() as i64, m as i64, faces.len() as i64);
        // a lone vertex has one (empty) face
        let f = if m == 0 { 1 } else { f };
        if v - e + f != 2 {
            return Err(Error::NonPlanar { genus: ((2 - v + e - f) / 2).max(0) as usize });
        }
        Ok(Embedded { graph, rotation, faces, face_of })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    /// Faces as cyclic dart sequences. Face 0 contains dart 0.
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len().max(1)
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn tail(&self, d: Dart) -> usize {
        tail(&self.graph, d)
    }

    pub fn head(&self, d: Dart) -> usize {
        head(&self.graph, d)
    }

    /// Planar dual with reciprocal weights. Dual edge `e` crosses primal
    /// edge `e`; the dual sink is face 0.
    pub fn dual(&self) -> Result<DualGraph> {
        let g = &self.graph;
        if let Some(&b) = g.bridges().first() {
            return Err(Error::BridgePresent(b));
        }
        let nf = self.faces.len();
        let labels: Vec<String> = (0..nf).map(|f| format!("f{f}")).collect();
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, ed)| (self.face_of[2 * e], self.face_of[2 * e + 1], ed.weight.recip()))
            .collect();
        let dual_graph = WeightedGraph::from_labelled(labels, edges, Some(0))?;
        let order = self.faces.iter().map(|f| f.iter().map(|d| d / 2).collect()).collect();
        let dual = Embedded::new(dual_graph, RotationSystem::new(order))?;
        Ok(DualGraph { dual, edge_map: (0..g.edge_count()).collect() })
    }
}

/// A planar dual together with the primal-to-dual edge correspondence.
#[derive(Debug, Clone, PartialEq)]
pub struct DualGraph {
    pub dual: Embedded,
    /// `edge_map[e]` is the dual edge crossing primal edge `e`.
    pub edge_map: Vec<usize>,
}

impl DualGraph {
    pub fn graph(&self) -> &WeightedGraph {
        self.dual.graph()
    }

    /// Dual sink `s*`.
    pub fn sink(&self) -> usize {
        self.dual.graph().sink().unwrap_or(0)
    }
}

fn tail(g: &WeightedGraph, d: Dart) -> usize {
    let e = g.edge(d / 2);
    if d.is_multiple_of(2) {
        e.u
    } else {
        e.v
    }
}

fn head(g: &WeightedGraph, d: Dart) -> usize {
    tail(g, d ^ 1)
}

fn leaving(g: &WeightedGraph, e: usize, x: usize) -> Dart {
    if g.edge(e).u == x {
        2 * e
    } else {
        2 * e + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numerics::{rational, Rational};

    fn sorted_edge_sets(sets: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = sets
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn triangle_and_square_have_two_faces() {
        for g in [families::cycle_embedded(3), families::cycle_embedded(4), families::grid_embedded(2, 2)] {
            assert_eq!(g.face_count(), 2);
            assert!(g.faces().iter().all(|f| f.len() == g.graph().edge_count()));
        }
    }

    #[test]
    fn dual_of_cycle_is_a_parallel_bundle() {
        for n in [3, 4] {
            let d = families::cycle_embedded(n).dual().unwrap();
            assert_eq!(d.graph().vertex_count(), 2);
            assert_eq!(d.graph().edge_count(), n);
            assert!(d.graph().edges().iter().all(|e| e.weight == rational(1, 1)));
        }
    }

    #[test]
    fn bridge_blocks_dual() {
        let g = families::path_embedded(2);
        assert_eq!(g.dual().unwrap_err(), Error::BridgePresent(0));
    }

    #[test]
    fn non_planar_rotation_is_rejected() {
        // K5 has no planar rotation at all
        let g = families::complete(5);
        let rot = RotationSystem::new((0..5).map(|v| g.incident(v).to_vec()).collect());
        assert!(matches!(Embedded::new(g, rot), Err(Error::NonPlanar { .. })));
    }

    #[test]
    fn incomplete_rotation_is_rejected() {
        let g = families::cycle_embedded(3);
        let mut order = g.rotation().clone().into_inner();
        order[0].pop();
        let err = Embedded::new(g.graph().clone(), RotationSystem::new(order)).unwrap_err();
        assert!(matches!(err, Error::IncompleteRotation(_)));
    }

    #[test]
    fn dual_weights_are_reciprocal_and_sums_match() {
        let g = families::wheel_embedded_weighted(5, &[rational(2, 1), rational(1, 3), rational(5, 2)]);
        let d = g.dual().unwrap();
        for (e, ed) in g.graph().edges().iter().enumerate() {
            assert_eq!(ed.weight.clone() * d.graph().edge(d.edge_map[e]).weight.clone(), rational(1, 1));
        }
        let inv: Rational = d.graph().edges().iter().fold(rational(0, 1), |a, e| a + e.weight.recip());
        assert_eq!(inv, g.graph().total_weight());
    }

    #[test]
    fn double_dual_recovers_vertex_stars() {
        let graphs = vec![
            families::cycle_embedded(5),
            families::wheel_embedded(4),
            families::wheel_embedded(6),
            families::grid_embedded(3, 3),
            families::k4_embedded(),
            families::grid_embedded(2, 4),
        ];
        for g in graphs {
            let d = g.dual().unwrap();
            let dd = d.dual.dual().unwrap();
            assert_eq!(dd.graph().vertex_count(), g.graph().vertex_count());
            let stars = sorted_edge_sets((0..g.graph().vertex_count()).map(|v| g.graph().incident(v).to_vec()));
            let dual_faces = sorted_edge_sets(d.dual.faces().iter().map(|f| f.iter().map(|x| x / 2).collect()));
            assert_eq!(stars, dual_faces);
            assert_eq!(dd.graph().vertex_count() + d.graph().vertex_count(), g.graph().edge_count() + 2);
        }
    }
}
