//! Laplacians, spanning-tree weights, Green's functions and potential
//! kernels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::numerics::{pcg, LinearOperator, Matrix, Scalar};

/// Weighted graph Laplacian; parallel edges accumulate.
pub fn laplacian<S: Scalar>(g: &WeightedGraph) -> Matrix<S> {
    let n = g.vertex_count();
    let mut m = Matrix::<S>::zeros(n, n);
    for e in g.edges() {
        let w = S::from_rational(&e.weight);
        m[(e.u, e.u)] = m[(e.u, e.u)].clone() + w.clone();
        m[(e.v, e.v)] = m[(e.v, e.v)].clone() + w.clone();
        m[(e.u, e.v)] = m[(e.u, e.v)].clone() - w.clone();
        m[(e.v, e.u)] = m[(e.v, e.u)].clone() - w;
    }
    m
}

/// Laplacian with row and column `s` removed.
pub fn reduced_laplacian<S: Scalar>(g: &WeightedGraph, s: usize) -> Matrix<S> {
    laplacian::<S>(g).submatrix_minor(&[s], &[s]).expect("sink index is valid")
}

/// Weighted number of spanning trees `F1`.
pub fn tree_weight<S: Scalar>(g: &WeightedGraph) -> Result<S> {
    let s = g.sink().unwrap_or(g.vertex_count() - 1);
    reduced_laplacian::<S>(g, s).determinant()
}

/// Green's function with Dirichlet condition at the sink. Row and column
/// `sink` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenFunction<S> {
    pub sink: usize,
    pub values: Matrix<S>,
}

impl<S: Scalar> GreenFunction<S> {
    pub fn get(&self, u: usize, v: usize) -> &S {
        &self.values[(u, v)]
    }

    /// Principal minor `det G[idx, idx]`. Repeated or sink indices give 0.
    pub fn principal_minor(&self, idx: &[usize]) -> S {
        self.values.select(idx, idx).determinant().expect("square selection")
    }
}

/// Inverts the reduced Laplacian at `s`.
pub fn green<S: Scalar>(g: &WeightedGraph, s: usize) -> Result<GreenFunction<S>> {
    let n = g.vertex_count();
    if s >= n {
        return Err(Error::IndexOutOfRange { index: s, dim: n });
    }
    let inv = reduced_laplacian::<S>(g, s).inverse().map_err(|e| match e {
        Error::Singular => Error::DisconnectedGraph,
        other => other,
    })?;
    let lift = |x: usize| if x < s { Some(x) } else if x == s { None } else { Some(x - 1) };
    let values = Matrix::from_fn(n, n, |u, v| match (lift(u), lift(v)) {
        (Some(a), Some(b)) => inv[(a, b)].clone(),
        _ => S::zero(),
    });
    Ok(GreenFunction { sink: s, values })
}

/// Potential kernel `A_{u,v} = G_{u,u} - G_{u,v}` on both orientations of
/// every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialKernel<S> {
    pub sink: usize,
    /// `forward[e] = A_{u,v}` for edge `e = (u, v)`.
    pub forward: Vec<S>,
    /// `backward[e] = A_{v,u}`.
    pub backward: Vec<S>,
}

impl<S: Scalar> PotentialKernel<S> {
    /// `A` across edge `e` in the direction leaving `from`.
    pub fn from_end(&self, g: &WeightedGraph, e: usize, from: usize) -> &S {
        if g.edge(e).u == from {
            &self.forward[e]
        } else {
            &self.backward[e]
        }
    }

    /// `Pr[e in T] = w (A_{u,v} + A_{v,u})`.
    pub fn edge_in_tree_prob(&self, g: &WeightedGraph, e: usize) -> S {
        S::from_rational(&g.edge(e).weight) * (self.forward[e].clone() + self.backward[e].clone())
    }

    /// Net current `sum_v w_{u,v} A_{u,v}` out of `u`.
    pub fn outflow(&self, g: &WeightedGraph, u: usize) -> S {
        g.incident(u).iter().fold(S::zero(), |acc, &e| {
            acc + S::from_rational(&g.edge(e).weight) * self.from_end(g, e, u).clone()
        })
    }
}

pub fn potential_kernel<S: Scalar>(g: &WeightedGraph, green: &GreenFunction<S>) -> PotentialKernel<S> {
    let (forward, backward) = g
        .edges()
        .iter()
        .map(|e| {
            let f = green.get(e.u, e.u).clone() - green.get(e.u, e.v).clone();
            let b = green.get(e.v, e.v).clone() - green.get(e.v, e.u).clone();
            (f, b)
        })
        .unzip();
    PotentialKernel { sink: green.sink, forward, backward }
}

/// Green's function and potential kernel in one call. Uses the graph's sink
/// if it has one, otherwise the last vertex.
pub fn kernel_at_sink<S: Scalar>(g: &WeightedGraph) -> Result<(GreenFunction<S>, PotentialKernel<S>)> {
    let s = g.sink().unwrap_or(g.vertex_count() - 1);
    let gf = green::<S>(g, s)?;
    let k = potential_kernel(g, &gf);
    Ok((gf, k))
}

/// Matrix-free reduced Laplacian, for iterative solves on large patches.
pub struct ReducedLaplacian {
    sink: usize,
    /// `(neighbour, weight)` per vertex, neighbours in reduced indexing,
    /// `None` for the sink.
    adj: Vec<Vec<(Option<usize>, f64)>>,
    diag: Vec<f64>,
}

impl ReducedLaplacian {
    pub fn new(g: &WeightedGraph, s: usize) -> Self {
        let red = |x: usize| if x == s { None } else if x < s { Some(x) } else { Some(x - 1) };
        let n = g.vertex_count() - 1;
        let mut adj = vec![Vec::new(); n];
        let mut diag = vec![0.0; n];
        for e in g.edges() {
            let w = Scalar::to_f64(&e.weight);
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(i) = red(a) {
                    diag[i] += w;
                    adj[i].push((red(b), w));
                }
            }
        }
        ReducedLaplacian { sink: s, adj, diag }
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Reduced index of a full-graph vertex.
    pub fn reduce(&self, v: usize) -> Option<usize> {
        match v.cmp(&self.sink) {
            std::cmp::Ordering::Less => Some(v),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(v - 1),
        }
    }
}

impl LinearOperator for ReducedLaplacian {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = self.diag[i] * x[i];
            for &(j, w) in &self.adj[i] {
                if let Some(j) = j {
                    acc -= w * x[j];
                }
            }
            *o = acc;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.diag.clone()
    }
}

/// Float potential kernel across the listed edges via preconditioned
/// conjugate gradients, one solve per distinct non-sink endpoint.
pub fn potential_kernel_iterative(
    g: &WeightedGraph,
    s: usize,
    edges: &[usize],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let op = ReducedLaplacian::new(g, s);
    let mut sources: Vec<usize> = edges.iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).filter(|&x| x != s).collect();
    sources.sort_unstable();
    sources.dedup();
    let columns: Vec<(usize, Vec<f64>)> = sources
        .par_iter()
        .map(|&u| {
            let mut b = vec![0.0; op.dim()];
            b[op.reduce(u).expect("non-sink")] = 1.0;
            let out = pcg(&op, &b, tol, 20 * op.dim() + 1000)?;
            Ok((u, out.solution))
        })
        .collect::<Result<_>>()?;
    let column = |u: usize| &columns[columns.binary_search_by_key(&u, |c| c.0).expect("solved")].1;
    let value = |u: usize, v: usize| -> f64 {
        // G_uu - G_uv with G(s, .) = 0
        match op.reduce(u) {
            None => 0.0,
            Some(iu) => {
                let col = column(u);
                col[iu] - op.reduce(v).map_or(0.0, |iv| col[iv])
            }
        }
    };
    Ok(edges.iter().map(|&e| (value(g.edge(e).u, g.edge(e).v), value(g.edge(e).v, g.edge(e).u))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::numerics::{rational, Field, Rational};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn q(p: i64, d: i64) -> Rational {
        rational(p, d)
    }

    #[test]
    fn laplacian_examples() {
        let g = WeightedGraph::from_indexed(2, vec![(0, 1, q(3, 2))], None).unwrap();
        let l = laplacian::<Rational>(&g);
        assert_eq!(l, Matrix::from_rows(vec![vec![q(3, 2), q(-3, 2)], vec![q(-3, 2), q(3, 2)]]).unwrap());
        let l = laplacian::<Rational>(&families::complete(3));
        assert_eq!(l, Matrix::from_i64_rows(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]).unwrap());
        let g = WeightedGraph::unweighted(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(laplacian::<Rational>(&g), Matrix::from_i64_rows(&[&[2, -2], &[-2, 2]]).unwrap());
    }

    #[test]
    fn tree_weight_examples() {
        assert_eq!(tree_weight::<Rational>(&families::complete(3)).unwrap(), q(3, 1));
        assert_eq!(tree_weight::<Rational>(&families::cycle(4)).unwrap(), q(4, 1));
        let (a, b, c) = (q(2, 1), q(1, 3), q(5, 7));
        let g = WeightedGraph::from_indexed(3, vec![(0, 1, a.clone()), (1, 2, b.clone()), (0, 2, c.clone())], None).unwrap();
        let expect = a.clone() * b.clone() + a * c.clone() + b * c;
        assert_eq!(tree_weight::<Rational>(&g).unwrap(), expect);
    }

    #[test]
    fn green_examples() {
        let g = WeightedGraph::from_indexed(2, vec![(0, 1, q(3, 1))], None).unwrap();
        let gf = green::<Rational>(&g, 1).unwrap();
        assert_eq!(gf.get(0, 0), &q(1, 3));
        let k = potential_kernel(&g, &gf);
        assert_eq!(k.forward[0], q(1, 3));
        assert_eq!(k.edge_in_tree_prob(&g, 0), q(1, 1));

        let k3 = families::complete(3);
        let gf = green::<Rational>(&k3, 2).unwrap();
        assert_eq!(gf.get(0, 0), &q(2, 3));
        assert_eq!(gf.get(0, 1), &q(1, 3));
        assert!((0..3).all(|v| gf.get(2, v) == &q(0, 1)));
        let k = potential_kernel(&k3, &gf);
        assert_eq!(k.forward[0], q(1, 3));
        assert_eq!(k.edge_in_tree_prob(&k3, 0), q(2, 3));
    }

    fn check_kernel_identities(g: &WeightedGraph) {
        let n = g.vertex_count();
        let mut reference: Option<Vec<Rational>> = None;
        for s in 0..n {
            let gf = green::<Rational>(g, s).unwrap();
            assert!(gf.values.is_symmetric());
            for u in 0..n {
                if u != s {
                    assert!(gf.get(u, u) > &q(0, 1));
                }
            }
            let k = potential_kernel(g, &gf);
            for u in 0..n {
                let expect = if u == s { q(0, 1) } else { q(1, 1) };
                assert_eq!(k.outflow(g, u), expect);
            }
            let probs: Vec<Rational> = (0..g.edge_count()).map(|e| k.edge_in_tree_prob(g, e)).collect();
            let total = probs.iter().fold(q(0, 1), |a, p| a + p);
            assert_eq!(total, Rational::from_i64(n as i64 - 1));
            assert!(probs.iter().all(|p| p >= &q(0, 1) && p <= &q(1, 1)));
            match &reference {
                None => reference = Some(probs),
                Some(r) => assert_eq!(r, &probs),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn kernel_identities_hold_for_every_sink(seed in 0u64..10_000, n in 2usize..=7, extra in 0usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            check_kernel_identities(&families::random_connected(&mut rng, n, extra));
        }
    }

    #[test]
    fn iterative_kernel_matches_exact() {
        let g = families::grid(5, 5);
        let exact = potential_kernel(&g, &green::<Rational>(&g, 0).unwrap());
        let edges: Vec<usize> = (0..g.edge_count()).collect();
        let approx = potential_kernel_iterative(&g, 0, &edges, 1e-12).unwrap();
        for (e, (f, b)) in approx.iter().enumerate() {
            assert!((f - Scalar::to_f64(&exact.forward[e])).abs() < 1e-9);
            assert!((b - Scalar::to_f64(&exact.backward[e])).abs() < 1e-9);
        }
    }
}
