use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Embedded, RotationSystem, WeightedGraph};
use crate::kernels::potential_kernel_iterative;
use crate::numerics::{Rational, Scalar};

use super::alpha::alpha_closed;
use super::kernel::kernel_closed;
use super::spec::LatticeSpec;

/// Small shift keeping vertex positions off the patch boundary and
/// breaking symmetric ties.
const SHIFT: (f64, f64) = (0.013, 0.007);

/// `n x n` block of fundamental domains with every outside vertex merged
/// into one sink. Edges with one end outside go to the sink.
#[derive(Debug, Clone)]
pub struct WiredPatch {
    pub n: usize,
    pub graph: WeightedGraph,
    /// Edge id of class `c` starting in domain `(i, j)`, when both ends are
    /// inside the patch.
    edge_at: HashMap<(usize, i64, i64), usize>,
    /// Geometric end points of each edge, when the lattice has positions.
    segments: Option<Vec<((f64, f64), (f64, f64))>>,
}

impl WiredPatch {
    pub fn sink(&self) -> usize {
        self.graph.sink().expect("patches have a sink")
    }

    pub fn edge_at(&self, class: usize, i: i64, j: i64) -> Option<usize> {
        self.edge_at.get(&(class, i, j)).copied()
    }

    /// Planar embedding: counter-clockwise by angle at patch vertices, and
    /// by boundary crossing point at the sink.
    pub fn embedded(&self) -> Result<Embedded> {
        let segs = self
            .segments
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("lattice has no vertex positions to embed".into()))?;
        let g = &self.graph;
        let s = self.sink();
        let n = self.n as f64;
        let mut order: Vec<Vec<usize>> = Vec::with_capacity(g.vertex_count());
        for v in 0..g.vertex_count() {
            let mut es = g.incident(v).to_vec();
            if v != s {
                let angle = |e: usize| {
                    let (a, b) = segs[e];
                    let (p, q) = if g.edge(e).u == v { (a, b) } else { (b, a) };
                    (q.1 - p.1).atan2(q.0 - p.0)
                };
                es.sort_by(|&x, &y| angle(x).total_cmp(&angle(y)).then(x.cmp(&y)));
            } else {
                let key = |e: usize| {
                    let (p, q) = segs[e];
                    let (x, y) = exit_point(p, q, n);
                    (y - n / 2.0).atan2(x - n / 2.0)
                };
                // seen from the sink the boundary runs clockwise
                es.sort_by(|&x, &y| key(y).total_cmp(&key(x)));
            }
            order.push(es);
        }
        Embedded::new(g.clone(), RotationSystem::new(order))
    }
}

/// Where the segment from `p` (inside `[0, n]^2`) to `q` (outside) leaves
/// the square.
fn exit_point(p: (f64, f64), q: (f64, f64), n: f64) -> (f64, f64) {
    let exit = |a: f64, b: f64| {
        if b > n {
            (n - a) / (b - a)
        } else if b < 0.0 {
            a / (a - b)
        } else {
            1.0
        }
    };
    let t = exit(p.0, q.0).min(exit(p.1, q.1));
    (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1))
}

/// Builds the wired patch with weights evaluated at `beta`.
pub fn wired_patch(spec: &LatticeSpec, n: usize, beta: &Rational) -> Result<WiredPatch> {
    if n == 0 {
        return Err(Error::InvalidArgument("patch size must be at least 1".into()));
    }
    let t = spec.vertex_count();
    let ni = n as i64;
    let sink = n * n * t;
    let inside = |i: i64, j: i64| (0..ni).contains(&i) && (0..ni).contains(&j);
    let id = |i: i64, j: i64, v: usize| (i as usize * n + j as usize) * t + v;
    let mut labels = Vec::with_capacity(sink + 1);
    for i in 0..n {
        for j in 0..n {
            for vt in &spec.vertices {
                labels.push(format!("{i},{j},{}", vt.id));
            }
        }
    }
    labels.push("sink".into());
    let reach = spec.edges.iter().map(|c| c.offset.0.abs().max(c.offset.1.abs())).max().unwrap_or(0);
    let pos = |i: i64, j: i64, v: usize| {
        spec.vertices[v].position.map(|(x, y)| (i as f64 + x + SHIFT.0, j as f64 + y + SHIFT.1))
    };
    let mut edges = Vec::new();
    let mut segments = Some(Vec::new());
    let mut edge_at = HashMap::new();
    for i in -reach..ni + reach {
        for j in -reach..ni + reach {
            for (k, c) in spec.edges.iter().enumerate() {
                let (i2, j2) = (i + c.offset.0, j + c.offset.1);
                let w = c.weight.at(beta);
                let (a_in, b_in) = (inside(i, j), inside(i2, j2));
                let (u, v, p, q) = match (a_in, b_in) {
                    (true, true) => {
                        edge_at.insert((k, i, j), edges.len());
                        (id(i, j, c.from), id(i2, j2, c.to), pos(i, j, c.from), pos(i2, j2, c.to))
                    }
                    (true, false) => (id(i, j, c.from), sink, pos(i, j, c.from), pos(i2, j2, c.to)),
                    (false, true) => (id(i2, j2, c.to), sink, pos(i2, j2, c.to), pos(i, j, c.from)),
                    (false, false) => continue,
                };
                edges.push((u, v, w));
                segments = match (segments, p, q) {
                    (Some(mut s), Some(p), Some(q)) => {
                        s.push((p, q));
                        Some(s)
                    }
                    _ => None,
                };
            }
        }
    }
    let graph = WeightedGraph::from_labelled(labels, edges, Some(sink))?;
    Ok(WiredPatch { n, graph, edge_at, segments })
}

/// Kernel across one representative edge of each kind in the central
/// domain of a wired patch, against the stored lattice value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEntry {
    pub kind: String,
    pub computed: (f64, f64),
    pub reference: Option<(f64, f64)>,
    pub deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub lattice: String,
    pub n: usize,
    pub beta: f64,
    pub entries: Vec<LimitEntry>,
    pub max_deviation: Option<f64>,
}

/// Largest patch [`limit_check`] accepts.
pub const MAX_LIMIT_N: usize = 64;

/// Solves for the potential kernel on `wired_patch(spec, n)` with conjugate
/// gradients and compares with `kernel_closed` where a table exists.
pub fn limit_check(spec: &LatticeSpec, n: usize, beta: &Rational, tol: f64) -> Result<LimitReport> {
    if n > MAX_LIMIT_N {
        return Err(Error::TooLarge(format!("patch size {n} exceeds {MAX_LIMIT_N}")));
    }
    let patch = wired_patch(spec, n, beta)?;
    let c = (n / 2) as i64;
    let mut reps = Vec::new();
    for (kind, _) in spec.kinds() {
        let (k, _) = spec.edges.iter().enumerate().find(|(_, e)| e.kind == kind).expect("kind has a class");
        let e = patch
            .edge_at(k, c, c)
            .ok_or_else(|| Error::InvalidArgument(format!("patch of size {n} has no interior {kind:?} edge")))?;
        reps.push((kind, e));
    }
    let ids: Vec<usize> = reps.iter().map(|r| r.1).collect();
    let values = potential_kernel_iterative(&patch.graph, patch.sink(), &ids, tol)?;
    let b = beta.to_f64();
    let table = kernel_closed(spec).ok();
    let needs_alpha = table.as_ref().is_some_and(|t| t.entries.iter().any(|e| e.forward.coeffs().len() > 1 || e.backward.coeffs().len() > 1));
    let alpha = if needs_alpha { alpha_closed(b)? } else { 0.0 };
    let mut entries = Vec::new();
    for ((kind, _), computed) in reps.into_iter().zip(values) {
        let reference = match &table {
            Some(t) => {
                let e = t.entry(&kind)?;
                let f = |p: &super::kernel::KernelValue| p.map(|c| c.eval_f64(b)).eval(&alpha);
                Some((f(&e.forward), f(&e.backward)))
            }
            None => None,
        };
        let deviation = reference.map(|r| (computed.0 - r.0).abs().max((computed.1 - r.1).abs()));
        entries.push(LimitEntry { kind, computed, reference, deviation });
    }
    let max_deviation = entries.iter().filter_map(|e| e.deviation).reduce(f64::max);
    Ok(LimitReport { lattice: spec.name.clone(), n, beta: b, entries, max_deviation })
}
