//! Spanning-forest and unicycle counts.
//!
//! `F_k` is the weighted sum of spanning forests with `k` components. The
//! closed forms here are checked against the exhaustive enumerators in
//! [`oracle`].

pub mod oracle;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Embedded, WeightedGraph};
use crate::kernels::{green, laplacian, GreenFunction, PotentialKernel};
use crate::numerics::{Field, Rational, Scalar};

/// `F_k` together with its component count.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestCount<S> {
    pub k: usize,
    pub value: S,
}

fn default_sink(g: &WeightedGraph) -> usize {
    g.sink().unwrap_or(g.vertex_count() - 1)
}

/// `F_2` from Laplacian minors:
/// `sum_{v != s} det L[^v,s] - sum_{u~v, u,v != s} w_uv det L[^u,v,s]`.
pub fn f2_minor<S: Scalar>(g: &WeightedGraph, s: usize) -> Result<S> {
    let n = g.vertex_count();
    if s >= n {
        return Err(Error::IndexOutOfRange { index: s, dim: n });
    }
    let lap = laplacian::<S>(g);
    let minor = |del: &[usize]| -> Result<S> {
        let mut del = del.to_vec();
        del.sort_unstable();
        lap.submatrix_minor(&del, &del)?.determinant()
    };
    let mut total = S::zero();
    for v in (0..n).filter(|&v| v != s) {
        total = total + minor(&[v, s])?;
    }
    for e in g.edges() {
        if e.u != s && e.v != s {
            total = total - S::from_rational(&e.weight) * minor(&[e.u, e.v, s])?;
        }
    }
    Ok(total)
}

/// `F_2 / F_1 = sum_e w [(A_uv - A_vu)^2 + A_uv A_vu]`; every term is
/// non-negative.
pub fn f2_positive<S: Scalar>(g: &WeightedGraph, kernel: &PotentialKernel<S>) -> S {
    (0..g.edge_count()).fold(S::zero(), |acc, e| {
        let (a, b) = (kernel.forward[e].clone(), kernel.backward[e].clone());
        let d = a.clone() - b.clone();
        acc + S::from_rational(&g.edge(e).weight) * (d.clone() * d + a * b)
    })
}

/// Index sets of the non-vanishing terms of the k-forest expansion, as
/// `(h, product of edge weights, indices)`. Terms whose index list repeats
/// a vertex or touches the sink have zero determinant and are left out.
fn expansion_terms(g: &WeightedGraph, sink: usize, k: usize) -> Vec<(usize, Rational, Vec<usize>)> {
    let n = g.vertex_count();
    let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| g.edge(e).u != sink && g.edge(e).v != sink).collect();
    let mut used = vec![false; n];
    used[sink] = true;
    let mut out = Vec::new();
    let mut idx = Vec::new();
    for h in 0..k {
        pick_edges(g, &edges, 0, h, k - 1 - h, Rational::one(), &mut used, &mut idx, &mut out, h);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn pick_edges(
    g: &WeightedGraph,
    edges: &[usize],
    from: usize,
    edges_left: usize,
    vertices: usize,
    weight: Rational,
    used: &mut Vec<bool>,
    idx: &mut Vec<usize>,
    out: &mut Vec<(usize, Rational, Vec<usize>)>,
    h: usize,
) {
    if edges_left == 0 {
        pick_vertices(0, vertices, &weight, used, idx, out, h);
        return;
    }
    for i in from..edges.len() {
        let e = g.edge(edges[i]);
        if used[e.u] || used[e.v] {
            continue;
        }
        used[e.u] = true;
        used[e.v] = true;
        idx.push(e.u);
        idx.push(e.v);
        pick_edges(g, edges, i + 1, edges_left - 1, vertices, weight.clone() * &e.weight, used, idx, out, h);
        idx.truncate(idx.len() - 2);
        used[e.u] = false;
        used[e.v] = false;
    }
}

fn pick_vertices(
    from: usize,
    left: usize,
    weight: &Rational,
    used: &mut Vec<bool>,
    idx: &mut Vec<usize>,
    out: &mut Vec<(usize, Rational, Vec<usize>)>,
    h: usize,
) {
    if left == 0 {
        out.push((h, weight.clone(), idx.clone()));
        return;
    }
    for x in from..used.len() {
        if used[x] {
            continue;
        }
        used[x] = true;
        idx.push(x);
        pick_vertices(x + 1, left - 1, weight, used, idx, out, h);
        idx.pop();
        used[x] = false;
    }
}

/// `F_k / F_1` by the alternating expansion in principal minors of the
/// Green's function.
pub fn fk_ratio_with<S: Scalar>(g: &WeightedGraph, gf: &GreenFunction<S>, k: usize) -> Result<S> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, max: n });
    }
    let terms = expansion_terms(g, gf.sink, k);
    Ok(terms
        .par_iter()
        .map(|(h, w, idx)| {
            let t = S::from_rational(w) * gf.principal_minor(idx);
            if h % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .reduce(S::zero, |a, b| a + b))
}

/// `F_k / F_1`, using the graph's sink (or its last vertex) for the Green's
/// function.
pub fn fk_ratio<S: Scalar>(g: &WeightedGraph, k: usize) -> Result<S> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, max: n });
    }
    let gf = green::<S>(g, default_sink(g))?;
    fk_ratio_with(g, &gf, k)
}

/// `F_k` itself.
pub fn forest_count<S: Scalar>(g: &WeightedGraph, k: usize) -> Result<ForestCount<S>> {
    let f1 = crate::kernels::tree_weight::<S>(g)?;
    let ratio = fk_ratio::<S>(g, k)?;
    Ok(ForestCount { k, value: ratio * f1 })
}

/// Weighted number of spanning unicycles, `F_2(G*) * prod_e w(e)`.
pub fn unicycles_via_dual(emb: &Embedded) -> Result<Rational> {
    let dual = emb.dual()?;
    let f2: Rational = f2_minor(dual.graph(), dual.sink())?;
    let prod = emb.graph().edges().iter().fold(Rational::one(), |acc, e| acc * &e.weight);
    Ok(f2 * prod)
}

/// Variance of the sandpile level over recurrent configurations,
/// `2 F3*/F1* + F2*/F1* - (F2*/F1*)^2` on the dual.
pub fn level_variance<S: Scalar>(emb: &Embedded) -> Result<S> {
    let dual = emb.dual()?;
    let dg = dual.graph();
    let gf = green::<S>(dg, dual.sink())?;
    let r2 = if dg.vertex_count() >= 2 { fk_ratio_with(dg, &gf, 2)? } else { S::zero() };
    let r3 = if dg.vertex_count() >= 3 { fk_ratio_with(dg, &gf, 3)? } else { S::zero() };
    Ok(S::from_i64(2) * r3 + r2.clone() - r2.clone() * r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::kernels::kernel_at_sink;
    use crate::numerics::rational;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    #[test]
    fn f2_minor_examples() {
        assert_eq!(f2_minor::<Rational>(&families::complete(3), 2).unwrap(), q(3, 1));
        assert_eq!(f2_minor::<Rational>(&families::path(3), 0).unwrap(), q(2, 1));
        assert_eq!(f2_minor::<Rational>(&families::cycle(4), 1).unwrap(), q(6, 1));
    }

    #[test]
    fn f2_minor_is_sink_independent() {
        let g = families::wheel(5);
        let first = f2_minor::<Rational>(&g, 0).unwrap();
        assert!((1..6).all(|s| f2_minor::<Rational>(&g, s).unwrap() == first));
    }

    #[test]
    fn f2_positive_examples() {
        let k3 = families::complete(3);
        let (_, k) = kernel_at_sink::<Rational>(&k3).unwrap();
        assert_eq!(f2_positive(&k3, &k), q(1, 1));
        let k2 = WeightedGraph::from_indexed(2, vec![(0, 1, q(5, 2))], None).unwrap();
        let (_, k) = kernel_at_sink::<Rational>(&k2).unwrap();
        assert_eq!(f2_positive(&k2, &k), q(2, 5));
    }

    #[test]
    fn fk_examples() {
        let k3 = families::complete(3);
        assert_eq!(fk_ratio::<Rational>(&k3, 1).unwrap(), q(1, 1));
        assert_eq!(fk_ratio::<Rational>(&k3, 2).unwrap(), q(1, 1));
        assert_eq!(fk_ratio::<Rational>(&k3, 3).unwrap(), q(1, 3));
        assert_eq!(fk_ratio::<Rational>(&k3, 4).unwrap_err(), Error::KOutOfRange { k: 4, max: 3 });
        assert_eq!(forest_count::<Rational>(&k3, 3).unwrap().value, q(1, 1));
    }

    #[test]
    fn unicycle_examples() {
        assert_eq!(unicycles_via_dual(&families::cycle_embedded(3)).unwrap(), q(1, 1));
        assert_eq!(unicycles_via_dual(&families::cycle_embedded(4)).unwrap(), q(1, 1));
        let d = families::cycle_embedded(3).dual().unwrap();
        assert_eq!(f2_minor::<Rational>(d.graph(), 0).unwrap(), q(1, 1));
    }

    #[test]
    fn level_variance_examples() {
        assert_eq!(level_variance::<Rational>(&families::cycle_embedded(3)).unwrap(), q(2, 9));
        assert_eq!(level_variance::<Rational>(&families::path_embedded(2)).unwrap_err(), Error::BridgePresent(0));
    }

    #[test]
    fn float_backend_agrees() {
        let g = families::grid(3, 3);
        let exact: Rational = fk_ratio(&g, 3).unwrap();
        let float: f64 = fk_ratio(&g, 3).unwrap();
        assert!((float - Scalar::to_f64(&exact)).abs() < 1e-10);
    }
}
