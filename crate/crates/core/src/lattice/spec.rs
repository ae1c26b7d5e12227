use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::io::weight_value;
use crate::numerics::{rational, Field, Rational, RationalFunction};

/// Weight of an edge class, possibly in terms of the lattice parameter `beta`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightTag {
    One,
    Beta,
    InvBeta,
    Fixed(Rational),
}

impl WeightTag {
    pub fn symbolic(&self) -> RationalFunction {
        match self {
            WeightTag::One => RationalFunction::one(),
            WeightTag::Beta => RationalFunction::var(),
            WeightTag::InvBeta => RationalFunction::var().recip(),
            WeightTag::Fixed(r) => RationalFunction::from_rational(r),
        }
    }

    pub fn at(&self, beta: &Rational) -> Rational {
        match self {
            WeightTag::One => Rational::one(),
            WeightTag::Beta => beta.clone(),
            WeightTag::InvBeta => beta.recip(),
            WeightTag::Fixed(r) => r.clone(),
        }
    }

    pub fn at_f64(&self, beta: f64) -> f64 {
        match self {
            WeightTag::One => 1.0,
            WeightTag::Beta => beta,
            WeightTag::InvBeta => 1.0 / beta,
            WeightTag::Fixed(r) => crate::numerics::Scalar::to_f64(r),
        }
    }
}

/// One vertex of the fundamental domain. `position` is in lattice-basis
/// coordinates and is needed only to embed finite patches.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexType {
    pub id: String,
    pub degree: usize,
    pub position: Option<(f64, f64)>,
}

/// Edges `from@(x, y) -- to@(x + dx, y + dy)` for every domain `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeClass {
    pub from: usize,
    pub to: usize,
    pub offset: (i64, i64),
    pub weight: WeightTag,
    /// Classes related by a lattice symmetry share a kind and a kernel entry.
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub name: String,
    pub vertices: Vec<VertexType>,
    pub edges: Vec<EdgeClass>,
    /// Name of the dual lattice, and the dual kind of each of our kinds.
    pub dual: Option<(String, Vec<(String, String)>)>,
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 9] = [
    "square",
    "triangular",
    "honeycomb",
    "kagome",
    "dice",
    "fisher",
    "triakis_triangular",
    "square_octagon",
    "tetrakis_square",
];

impl LatticeSpec {
    /// Checks indices, degrees (with the handshake identity) and that the
    /// quotient graph is connected.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::InvalidArgument(format!("lattice {} has no vertices", self.name)));
        }
        let mut deg = vec![0usize; n];
        for (i, c) in self.edges.iter().enumerate() {
            if c.from >= n || c.to >= n {
                return Err(Error::InvalidArgument(format!("edge class {i} names an unknown vertex")));
            }
            if c.from == c.to && c.offset == (0, 0) {
                return Err(Error::SelfLoop { edge: i, vertex: self.vertices[c.from].id.clone() });
            }
            deg[c.from] += 1;
            deg[c.to] += 1;
        }
        for (v, t) in self.vertices.iter().enumerate() {
            if t.degree != deg[v] {
                return Err(Error::InvalidArgument(format!(
                    "vertex {} declares degree {} but has {}",
                    t.id, t.degree, deg[v]
                )));
            }
        }
        debug_assert_eq!(deg.iter().sum::<usize>(), 2 * self.edges.len());
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for c in &self.edges {
            let (a, b) = (find(&mut parent, c.from), find(&mut parent, c.to));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..n).any(|v| find(&mut parent, v) != root) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Mean weighted degree `2 sum w / |V|` per fundamental domain.
    pub fn delta(&self) -> RationalFunction {
        let total = self.edges.iter().fold(RationalFunction::zero(), |a, c| a + c.weight.symbolic());
        RationalFunction::from_i64(2) * total / RationalFunction::from_i64(self.vertices.len() as i64)
    }

    /// Mean face degree `2 |E| / (|E| - |V|)`, using that a torus quotient
    /// has `|F| = |E| - |V|`.
    pub fn delta_star(&self) -> Result<Rational> {
        let (e, v) = (self.edges.len() as i64, self.vertices.len() as i64);
        if e <= v {
            return Err(Error::InvalidArgument(format!("lattice {} has no faces", self.name)));
        }
        Ok(rational(2 * e, e - v))
    }

    /// Edge classes per kind, in first-appearance order.
    pub fn kinds(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for c in &self.edges {
            match out.iter_mut().find(|(k, _)| *k == c.kind) {
                Some(slot) => slot.1 += 1,
                None => out.push((c.kind.clone(), 1)),
            }
        }
        out
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|c| !matches!(c.weight, WeightTag::One))
    }

    pub fn is_embeddable(&self) -> bool {
        self.vertices.iter().all(|v| v.position.is_some())
    }
}

fn vt(id: &str, degree: usize, x: f64, y: f64) -> VertexType {
    VertexType { id: id.into(), degree, position: Some((x, y)) }
}

fn ec(from: usize, to: usize, offset: (i64, i64), weight: WeightTag, kind: &str) -> EdgeClass {
    EdgeClass { from, to, offset, weight, kind: kind.into() }
}

fn dual(name: &str, pairs: &[(&str, &str)]) -> Option<(String, Vec<(String, String)>)> {
    Some((name.into(), pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()))
}

/// One of the nine built-in lattices.
pub fn builtin(name: &str) -> Result<LatticeSpec> {
    use WeightTag::*;
    let third = 1.0 / 3.0;
    let spec = match name {
        "square" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("o", 4, 0.0, 0.0)],
            edges: vec![ec(0, 0, (1, 0), One, "e"), ec(0, 0, (0, 1), One, "e")],
            dual: dual("square", &[("e", "e")]),
        },
        "triangular" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("o", 6, 0.0, 0.0)],
            edges: vec![ec(0, 0, (1, 0), One, "e"), ec(0, 0, (0, 1), One, "e"), ec(0, 0, (-1, 1), One, "e")],
            dual: dual("honeycomb", &[("e", "e")]),
        },
        "honeycomb" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("a", 3, third, third), vt("b", 3, 2.0 * third, 2.0 * third)],
            edges: vec![ec(0, 1, (0, 0), One, "e"), ec(0, 1, (-1, 0), One, "e"), ec(0, 1, (0, -1), One, "e")],
            dual: dual("triangular", &[("e", "e")]),
        },
        "kagome" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("a", 4, 0.0, 0.0), vt("b", 4, 0.5, 0.0), vt("c", 4, 0.0, 0.5)],
            edges: vec![
                ec(0, 1, (0, 0), One, "e"),
                ec(0, 2, (0, 0), One, "e"),
                ec(1, 2, (0, 0), One, "e"),
                ec(1, 0, (1, 0), One, "e"),
                ec(2, 0, (0, 1), One, "e"),
                ec(1, 2, (1, -1), One, "e"),
            ],
            dual: dual("dice", &[("e", "e")]),
        },
        "dice" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("h", 6, 0.5, 0.5), vt("u", 3, 1.0 / 6.0, 1.0 / 6.0), vt("d", 3, 5.0 / 6.0, 5.0 / 6.0)],
            edges: vec![
                ec(1, 0, (0, 0), One, "e"),
                ec(1, 0, (-1, 0), One, "e"),
                ec(1, 0, (0, -1), One, "e"),
                ec(2, 0, (0, 1), One, "e"),
                ec(2, 0, (0, 0), One, "e"),
                ec(2, 0, (1, 0), One, "e"),
            ],
            dual: dual("kagome", &[("e", "e")]),
        },
        "fisher" => LatticeSpec {
            name: name.into(),
            vertices: vec![
                vt("a0", 3, 5.0 / 12.0, 5.0 / 12.0),
                vt("a1", 3, 1.0 / 6.0, 5.0 / 12.0),
                vt("a2", 3, 5.0 / 12.0, 1.0 / 6.0),
                vt("b0", 3, 7.0 / 12.0, 7.0 / 12.0),
                vt("b1", 3, 5.0 / 6.0, 7.0 / 12.0),
                vt("b2", 3, 7.0 / 12.0, 5.0 / 6.0),
            ],
            edges: vec![
                ec(0, 3, (0, 0), InvBeta, "inter"),
                ec(1, 4, (-1, 0), InvBeta, "inter"),
                ec(2, 5, (0, -1), InvBeta, "inter"),
                ec(0, 1, (0, 0), One, "intra"),
                ec(1, 2, (0, 0), One, "intra"),
                ec(2, 0, (0, 0), One, "intra"),
                ec(3, 4, (0, 0), One, "intra"),
                ec(4, 5, (0, 0), One, "intra"),
                ec(5, 3, (0, 0), One, "intra"),
            ],
            dual: dual("triakis_triangular", &[("inter", "12-12"), ("intra", "3-12")]),
        },
        "triakis_triangular" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("o", 12, 0.0, 0.0), vt("u", 3, third, third), vt("d", 3, 2.0 * third, 2.0 * third)],
            edges: vec![
                ec(0, 0, (1, 0), Beta, "12-12"),
                ec(0, 0, (0, 1), Beta, "12-12"),
                ec(0, 0, (-1, 1), Beta, "12-12"),
                ec(1, 0, (0, 0), One, "3-12"),
                ec(1, 0, (1, 0), One, "3-12"),
                ec(1, 0, (0, 1), One, "3-12"),
                ec(2, 0, (1, 0), One, "3-12"),
                ec(2, 0, (0, 1), One, "3-12"),
                ec(2, 0, (1, 1), One, "3-12"),
            ],
            dual: dual("fisher", &[("12-12", "inter"), ("3-12", "intra")]),
        },
        "square_octagon" => LatticeSpec {
            name: name.into(),
            vertices: vec![
                vt("n", 3, 0.5, 0.75),
                vt("e", 3, 0.75, 0.5),
                vt("s", 3, 0.5, 0.25),
                vt("w", 3, 0.25, 0.5),
            ],
            edges: vec![
                ec(0, 1, (0, 0), One, "intra"),
                ec(1, 2, (0, 0), One, "intra"),
                ec(2, 3, (0, 0), One, "intra"),
                ec(3, 0, (0, 0), One, "intra"),
                ec(1, 3, (1, 0), InvBeta, "inter"),
                ec(0, 2, (0, 1), InvBeta, "inter"),
            ],
            dual: dual("tetrakis_square", &[("inter", "8-8"), ("intra", "4-8")]),
        },
        "tetrakis_square" => LatticeSpec {
            name: name.into(),
            vertices: vec![vt("o", 8, 0.0, 0.0), vt("c", 4, 0.5, 0.5)],
            edges: vec![
                ec(0, 0, (1, 0), Beta, "8-8"),
                ec(0, 0, (0, 1), Beta, "8-8"),
                ec(1, 0, (0, 0), One, "4-8"),
                ec(1, 0, (1, 0), One, "4-8"),
                ec(1, 0, (0, 1), One, "4-8"),
                ec(1, 0, (1, 1), One, "4-8"),
            ],
            dual: dual("square_octagon", &[("8-8", "inter"), ("4-8", "intra")]),
        },
        other => return Err(Error::UnknownLattice(other.into())),
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Deserialize, Serialize)]
struct LatticeFileVertex {
    id: Value,
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    position: Option<(f64, f64)>,
}

#[derive(Debug, Deserialize, Serialize)]
struct LatticeFileEdge {
    from: Value,
    to: Value,
    offset: (i64, i64),
    #[serde(default = "unit_weight")]
    weight: Value,
}

fn unit_weight() -> Value {
    Value::from(1)
}

#[derive(Debug, Deserialize, Serialize)]
struct LatticeFile {
    #[serde(default)]
    name: Option<String>,
    vertices: Vec<LatticeFileVertex>,
    edges: Vec<LatticeFileEdge>,
}

/// Reads a user lattice:
/// `{"vertices": [{"id", "degree"}], "edges": [{"from", "to", "offset": [x, y], "weight"}]}`.
/// Each edge line is its own kind; no kernel table is attached.
pub fn parse_lattice(text: &str) -> Result<LatticeSpec> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let ids: Vec<String> = file.vertices.iter().map(|v| crate::graph::io::id_string(&v.id)).collect::<Result<_>>()?;
    let index = |v: &Value| -> Result<usize> {
        let s = crate::graph::io::id_string(v)?;
        ids.iter().position(|x| *x == s).ok_or_else(|| Error::Parse(format!("unknown lattice vertex {s:?}")))
    };
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, e) in file.edges.iter().enumerate() {
        let w = weight_value(&e.weight)?;
        if !crate::numerics::is_positive(&w) {
            return Err(Error::NonPositiveWeight { edge: i, weight: w.to_string() });
        }
        edges.push(EdgeClass {
            from: index(&e.from)?,
            to: index(&e.to)?,
            offset: e.offset,
            weight: if w == Rational::one() { WeightTag::One } else { WeightTag::Fixed(w) },
            kind: format!("class{i}"),
        });
    }
    let spec = LatticeSpec {
        name: file.name.unwrap_or_else(|| "custom".into()),
        vertices: file
            .vertices
            .iter()
            .zip(ids)
            .map(|(v, id)| VertexType { id, degree: v.degree, position: v.position })
            .collect(),
        edges,
        dual: None,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            assert!(s.is_embeddable());
            let (d, _) = s.dual.clone().unwrap();
            assert_eq!(builtin(&d).unwrap().dual.unwrap().0, name);
        }
        assert_eq!(builtin("hexagonal").unwrap_err(), Error::UnknownLattice("hexagonal".into()));
    }

    #[test]
    fn basic_statistics() {
        let one = rational(1, 1);
        let delta = |n: &str| builtin(n).unwrap().delta().eval(&one).unwrap();
        assert_eq!(delta("square"), rational(4, 1));
        assert_eq!(delta("kagome"), rational(4, 1));
        assert_eq!(delta("fisher"), rational(3, 1));
        assert_eq!(delta("dice"), rational(4, 1));
        assert_eq!(builtin("kagome").unwrap().edges.len(), 6);
        assert_eq!(builtin("honeycomb").unwrap().delta_star().unwrap(), rational(6, 1));
        assert_eq!(builtin("triangular").unwrap().delta_star().unwrap(), rational(3, 1));
        // intratriangle edges are twice as numerous as intertriangle edges
        assert_eq!(builtin("fisher").unwrap().kinds(), vec![("inter".into(), 3), ("intra".into(), 6)]);
    }

    #[test]
    fn dual_lattices_have_matching_edge_counts() {
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            let (d, pairs) = s.dual.clone().unwrap();
            let ds = builtin(&d).unwrap();
            // faces of one quotient are vertices of the other
            assert_eq!(s.edges.len(), ds.edges.len(), "{name}");
            assert_eq!(s.edges.len() - s.vertices.len(), ds.vertices.len(), "{name}");
            for (k, dk) in pairs {
                let count = |sp: &LatticeSpec, k: &str| sp.kinds().into_iter().find(|(x, _)| x == k).unwrap().1;
                assert_eq!(count(&s, &k), count(&ds, &dk));
            }
        }
    }

    #[test]
    fn user_lattice_file() {
        let text = r#"{"vertices": [{"id": "o", "degree": 4}],
                       "edges": [{"from": "o", "to": "o", "offset": [1, 0], "weight": 1},
                                 {"from": "o", "to": "o", "offset": [0, 1], "weight": "2"}]}"#;
        let s = parse_lattice(text).unwrap();
        assert_eq!(s.edges[1].weight, WeightTag::Fixed(rational(2, 1)));
        assert!(!s.is_embeddable());
        let bad = r#"{"vertices": [{"id": "o", "degree": 3}],
                      "edges": [{"from": "o", "to": "o", "offset": [1, 0]}]}"#;
        assert!(matches!(parse_lattice(bad), Err(Error::InvalidArgument(_))));
    }
}
