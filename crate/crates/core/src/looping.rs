//! Looping rates of loop-erased random walk and the statistics derived
//! from them.
//!
//! For an undirected graph, `rho` is the stationary rate at which the walk
//! erases loops and `tau` the rate of loops of length at least three. They
//! satisfy `rho - tau = Pr[e in T] / 2`, and on planar graphs `tau` is a sum
//! over dual edges of potential-kernel terms.

use crate::error::{Error, Result};
use crate::graph::{Embedded, WeightedGraph};
use crate::kernels::{green, potential_kernel, PotentialKernel};
use crate::numerics::{Field, Scalar};

/// Looping rate summary for one graph or lattice.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LoopStats<T> {
    pub tau: T,
    pub rho: T,
    /// Mean cycle length of a weight-random spanning unicycle.
    pub lambda: T,
    /// Mean length of an erased loop, `1 / rho`.
    pub mean_lerw_loop: T,
    pub delta_rho: T,
    pub sand_density: T,
    /// Weighted `Pr[e in T]`.
    pub edge_in_tree: T,
}

/// Finite-graph correction `(delta_s - 1/2) / |V|` to the sand density.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary<T> {
    pub sink_degree: T,
    pub vertices: T,
}

impl<T: Field> LoopStats<T> {
    /// Fills in every column from `tau`, `Pr[e in T]` and the mean weighted
    /// degree. `boundary = None` gives the lattice-limit sand density.
    pub fn from_parts(tau: T, edge_in_tree: T, delta: T, boundary: Option<Boundary<T>>) -> Result<Self> {
        let half = T::one() / T::from_i64(2);
        let rho = tau.clone() + half.clone() * edge_in_tree.clone();
        let lambda = lambda_mean_loop(&tau, &rho)?;
        let dr = delta.clone() * rho.clone();
        let mut sand = (dr.clone() + delta - T::one()) * half.clone();
        if let Some(b) = boundary {
            sand = sand - (b.sink_degree - half) / b.vertices;
        }
        Ok(LoopStats {
            mean_lerw_loop: rho.recip(),
            tau,
            rho,
            lambda,
            delta_rho: dr,
            sand_density: sand,
            edge_in_tree,
        })
    }
}

impl<T> LoopStats<T> {
    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> LoopStats<U> {
        LoopStats {
            tau: f(&self.tau),
            rho: f(&self.rho),
            lambda: f(&self.lambda),
            mean_lerw_loop: f(&self.mean_lerw_loop),
            delta_rho: f(&self.delta_rho),
            sand_density: f(&self.sand_density),
            edge_in_tree: f(&self.edge_in_tree),
        }
    }
}

/// `lambda = (1 - 2 (rho - tau)) / tau`.
pub fn lambda_mean_loop<T: Field>(tau: &T, rho: &T) -> Result<T> {
    if tau.is_zero() {
        return Err(Error::NoUnicycle);
    }
    let two = T::from_i64(2);
    Ok((T::one() - two * (rho.clone() - tau.clone())) / tau.clone())
}

/// `delta * rho` with `delta = 2 sum w / |V|`.
pub fn delta_rho<S: Scalar>(g: &WeightedGraph, rho: &S) -> S {
    S::from_rational(&g.mean_weighted_degree()) * rho.clone()
}

/// `tau` from the dual graph's potential kernel, with dual sink `s*`.
pub fn tau_exact_at<S: Scalar>(emb: &Embedded, s_star: usize) -> Result<S> {
    let dual = emb.dual()?;
    let dg = dual.graph();
    let gf = green::<S>(dg, s_star)?;
    let k = potential_kernel(dg, &gf);
    let mut num = S::zero();
    let mut den = S::zero();
    for (e, ed) in dg.edges().iter().enumerate() {
        let (a, b) = (k.forward[e].clone(), k.backward[e].clone());
        let d = a.clone() - b.clone();
        let w = S::from_rational(&ed.weight);
        num = num + w.clone() * (a * b + d.clone() * d);
        den = den + w.recip();
    }
    Ok(num / den)
}

/// `tau` with the dual sink at face 0.
pub fn tau_exact<S: Scalar>(emb: &Embedded) -> Result<S> {
    tau_exact_at(emb, 0)
}

/// Weighted `Pr[e in T] = sum w^2 (A + A') / sum w`, or `(|V| - 1) / |E|`
/// when all weights agree.
pub fn edge_in_tree<S: Scalar>(g: &WeightedGraph, kernel: &PotentialKernel<S>) -> S {
    if g.is_uniformly_weighted() {
        return S::from_i64(g.vertex_count() as i64 - 1) / S::from_i64(g.edge_count() as i64);
    }
    edge_in_tree_weighted(g, kernel)
}

/// The weighted average without the equal-weight shortcut.
pub fn edge_in_tree_weighted<S: Scalar>(g: &WeightedGraph, kernel: &PotentialKernel<S>) -> S {
    let num = (0..g.edge_count()).fold(S::zero(), |acc, e| {
        acc + S::from_rational(&g.edge(e).weight) * kernel.edge_in_tree_prob(g, e)
    });
    num / S::from_rational(&g.total_weight())
}

fn primal_kernel<S: Scalar>(g: &WeightedGraph) -> Result<PotentialKernel<S>> {
    let s = g.sink().unwrap_or(g.vertex_count() - 1);
    Ok(potential_kernel(g, &green::<S>(g, s)?))
}

/// `rho = tau + Pr[e in T] / 2`.
pub fn rho_exact<S: Scalar>(emb: &Embedded) -> Result<S> {
    let tau = tau_exact::<S>(emb)?;
    let p = edge_in_tree(emb.graph(), &primal_kernel::<S>(emb.graph())?);
    Ok(tau + p / S::from_i64(2))
}

/// Sand density of the finite graph with sink `s`:
/// `(delta rho + delta - 1) / 2 - (delta_s - 1/2) / |V|`.
pub fn sand_density<S: Scalar>(g: &WeightedGraph, s: usize, rho: &S) -> S {
    let delta = S::from_rational(&g.mean_weighted_degree());
    let half = S::one() / S::from_i64(2);
    let ds = S::from_rational(&g.weighted_degree(s));
    (delta.clone() * rho.clone() + delta - S::one()) * half.clone() - (ds - half) / S::from_i64(g.vertex_count() as i64)
}

/// All looping statistics of an embedded finite graph. The sand density uses
/// the graph's sink, or its last vertex.
pub fn loop_stats<S: Scalar>(emb: &Embedded) -> Result<LoopStats<S>> {
    let g = emb.graph();
    let tau = tau_exact::<S>(emb)?;
    let p = edge_in_tree(g, &primal_kernel::<S>(g)?);
    let s = g.sink().unwrap_or(g.vertex_count() - 1);
    LoopStats::from_parts(
        tau,
        p,
        S::from_rational(&g.mean_weighted_degree()),
        Some(Boundary {
            sink_degree: S::from_rational(&g.weighted_degree(s)),
            vertices: S::from_i64(g.vertex_count() as i64),
        }),
    )
}
