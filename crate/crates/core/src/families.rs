//! Small graph families used by tests, oracles and the command line.

use std::f64::consts::TAU;

use rand::Rng;

use crate::graph::{Embedded, RotationSystem, WeightedGraph};
use crate::numerics::{rational, Field, Rational};

fn unit(edges: &[(usize, usize)]) -> Vec<(usize, usize, Rational)> {
    edges.iter().map(|&(u, v)| (u, v, Rational::one())).collect()
}

fn embed(graph: WeightedGraph, pos: &[(f64, f64)]) -> Embedded {
    let rot = RotationSystem::from_positions(&graph, pos);
    Embedded::new(graph, rot).expect("family drawing is planar")
}

fn circle(n: usize) -> Vec<(f64, f64)> {
    (0..n).map(|i| ((TAU * i as f64 / n as f64).cos(), (TAU * i as f64 / n as f64).sin())).collect()
}

pub fn complete(n: usize) -> WeightedGraph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    WeightedGraph::from_indexed(n, unit(&edges), None).expect("complete graph")
}

pub fn path(n: usize) -> WeightedGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    WeightedGraph::from_indexed(n, unit(&edges), None).expect("path graph")
}

pub fn path_embedded(n: usize) -> Embedded {
    embed(path(n), &(0..n).map(|i| (i as f64, 0.0)).collect::<Vec<_>>())
}

pub fn cycle(n: usize) -> WeightedGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    WeightedGraph::from_indexed(n, unit(&edges), None).expect("cycle graph")
}

pub fn cycle_embedded(n: usize) -> Embedded {
    embed(cycle(n), &circle(n))
}

/// Wheel with `n` rim vertices `0..n` and hub `n`. Rim edges come first,
/// then spokes.
pub fn wheel(n: usize) -> WeightedGraph {
    wheel_weighted(n, &[Rational::one()])
}

/// Wheel whose edge weights cycle through `weights`.
pub fn wheel_weighted(n: usize, weights: &[Rational]) -> WeightedGraph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n).map(|i| (i, n)));
    let edges = edges.into_iter().enumerate().map(|(k, (u, v))| (u, v, weights[k % weights.len()].clone())).collect();
    WeightedGraph::from_indexed(n + 1, edges, None).expect("wheel graph")
}

fn wheel_positions(n: usize) -> Vec<(f64, f64)> {
    let mut pos = circle(n);
    pos.push((0.0, 0.0));
    pos
}

pub fn wheel_embedded(n: usize) -> Embedded {
    embed(wheel(n), &wheel_positions(n))
}

pub fn wheel_embedded_weighted(n: usize, weights: &[Rational]) -> Embedded {
    embed(wheel_weighted(n, weights), &wheel_positions(n))
}

/// `rows x cols` grid; vertex `(i, j)` has index `i * cols + j`.
pub fn grid(rows: usize, cols: usize) -> WeightedGraph {
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push((id(i, j), id(i, j + 1)));
            }
            if i + 1 < rows {
                edges.push((id(i, j), id(i + 1, j)));
            }
        }
    }
    WeightedGraph::from_indexed(rows * cols, unit(&edges), None).expect("grid graph")
}

pub fn grid_embedded(rows: usize, cols: usize) -> Embedded {
    let pos: Vec<(f64, f64)> = (0..rows * cols).map(|k| ((k % cols) as f64, (k / cols) as f64)).collect();
    embed(grid(rows, cols), &pos)
}

/// K4 drawn as a triangle with a centre vertex.
pub fn k4_embedded() -> Embedded {
    let mut pos = circle(3);
    pos.push((0.0, 0.0));
    embed(complete(4), &pos)
}

/// Triangle `v1, v2, s` with `s` as sink.
pub fn house() -> Embedded {
    let g = WeightedGraph::from_labelled(
        vec!["v1".into(), "v2".into(), "s".into()],
        unit(&[(0, 1), (1, 2), (0, 2)]),
        Some(2),
    )
    .expect("house graph");
    embed(g, &circle(3))
}

/// Random connected multigraph: a random recursive tree plus `extra`
/// uniformly placed edges (parallel edges allowed), weights `p/q` with
/// `p in 1..=5`, `q in 1..=4`.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize) -> WeightedGraph {
    let mut out = Vec::with_capacity(n + extra);
    let draw = |rng: &mut R| rational(rng.random_range(1..=5), rng.random_range(1..=4));
    for v in 1..n {
        let p = rng.random_range(0..v);
        let wt = draw(rng);
        out.push((p, v, wt));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.random_range(0..n);
            let mut v = rng.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            let wt = draw(rng);
            out.push((u, v, wt));
        }
    }
    WeightedGraph::from_indexed(n, out, None).expect("random tree plus edges is connected")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn family_sizes() {
        assert_eq!(wheel(5).edge_count(), 10);
        assert_eq!(grid(3, 3).edge_count(), 12);
        assert_eq!(complete(4).edge_count(), 6);
        assert_eq!(k4_embedded().face_count(), 4);
        assert_eq!(wheel_embedded(6).face_count(), 7);
        assert_eq!(grid_embedded(3, 3).face_count(), 5);
    }

    #[test]
    fn random_graphs_are_connected_and_reproducible() {
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..8 {
            let g = random_connected(&mut a, n, 3);
            assert_eq!(g, random_connected(&mut b, n, 3));
            assert_eq!(g.edge_count(), n - 1 + if n >= 2 { 3 } else { 0 });
        }
    }
}
