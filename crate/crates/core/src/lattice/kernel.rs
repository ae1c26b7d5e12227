use crate::error::{Error, Result};
use crate::numerics::{rational, Field, Polynomial, RationalFunction};

use super::alpha::AlphaPoly;
use super::spec::LatticeSpec;

/// Kernel value: polynomial in `alpha(beta)` with rational-function
/// coefficients in `beta`.
pub type KernelValue = AlphaPoly<RationalFunction>;

/// Potential kernel across one kind of edge. `forward` is `A_{from, to}`
/// for the kind's edge classes; `backward` is `A_{to, from}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEntry {
    pub kind: String,
    pub forward: KernelValue,
    pub backward: KernelValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub lattice: String,
    pub entries: Vec<KernelEntry>,
    /// How the values follow from symmetry and harmonicity.
    pub provenance: &'static str,
}

impl KernelTable {
    pub fn entry(&self, kind: &str) -> Result<&KernelEntry> {
        self.entries
            .iter()
            .find(|e| e.kind == kind)
            .ok_or_else(|| Error::MissingKernel(format!("{} has no kernel for {kind:?} edges", self.lattice)))
    }
}

fn c(p: i64, q: i64) -> KernelValue {
    AlphaPoly::constant(RationalFunction::from_rational(&rational(p, q)))
}

/// Linear polynomial `a + b beta` as a rational function.
fn lin(a: i64, b: i64) -> RationalFunction {
    RationalFunction::from_poly(Polynomial::from_i64(&[a, b]))
}

fn rf(r: RationalFunction) -> KernelValue {
    AlphaPoly::constant(r)
}

fn both(kind: &str, v: KernelValue) -> KernelEntry {
    KernelEntry { kind: kind.into(), forward: v.clone(), backward: v }
}

fn directed(kind: &str, forward: KernelValue, backward: KernelValue) -> KernelEntry {
    KernelEntry { kind: kind.into(), forward, backward }
}

/// Stored potential-kernel values for a built-in lattice.
pub fn kernel_closed(spec: &LatticeSpec) -> Result<KernelTable> {
    let b = RationalFunction::var();
    let one = RationalFunction::one();
    let (entries, provenance) = match spec.name.as_str() {
        "square" => (vec![both("e", c(1, 4))], "vertex-transitive, degree 4: unit flow splits evenly over the 4 edges"),
        "triangular" => (vec![both("e", c(1, 6))], "vertex-transitive, degree 6: unit flow splits evenly"),
        "honeycomb" => (vec![both("e", c(1, 3))], "vertex-transitive, degree 3: unit flow splits evenly"),
        "kagome" => (vec![both("e", c(1, 4))], "vertex-transitive, degree 4: unit flow splits evenly"),
        "dice" => (
            vec![directed("e", c(1, 3), c(1, 6))],
            "every edge joins a degree-3 and a degree-6 vertex; from each end the flow splits evenly",
        ),
        "triakis_triangular" => (
            vec![
                // A_oa = 1 / (6 beta + 4): 6 beta A_oa + 6 A_ob = 1 with A_ob = (2/3) A_oa
                both("12-12", rf(one.clone() / lin(4, 6))),
                directed("3-12", c(1, 3), rf(one.clone() / lin(6, 9))),
            ],
            "degree-3 ends split evenly; harmonicity at a degree-3 neighbour of o gives A_ob = (2/3) A_oa, then unit flow at o",
        ),
        "fisher" => (
            vec![
                // beta (beta + 1) / (3 beta + 2)
                both("inter", rf(b.clone() * lin(1, 1) / lin(2, 3))),
                // (2 beta + 1) / (2 (3 beta + 2))
                both("intra", rf(lin(1, 2) / (RationalFunction::from_i64(2) * lin(2, 3)))),
            ],
            "primal-dual relation with the triakis triangular kernels, then unit flow at each vertex",
        ),
        "tetrakis_square" => {
            let quarter = RationalFunction::from_rational(&rational(1, 4));
            (
                vec![
                    both("8-8", AlphaPoly::alpha_times(one.clone())),
                    directed("4-8", c(1, 4), AlphaPoly::constant(quarter) - AlphaPoly::alpha_times(b.clone())),
                ],
                "8-8 kernel is alpha(beta) by definition; degree-4 ends split evenly; unit flow at degree-8 vertices",
            )
        }
        "square_octagon" => {
            let half = RationalFunction::from_rational(&rational(1, 2));
            let quarter = RationalFunction::from_rational(&rational(1, 4));
            (
                vec![
                    // beta / 2 - alpha beta^2
                    both("inter", AlphaPoly::constant(half.clone() * b.clone()) - AlphaPoly::alpha_times(b.clone() * b.clone())),
                    // 1/4 + alpha beta / 2
                    both("intra", AlphaPoly::constant(quarter) + AlphaPoly::alpha_times(half * b)),
                ],
                "primal-dual relation with the tetrakis square kernels and bilateral symmetry, then unit flow",
            )
        }
        other => return Err(Error::MissingKernel(format!("no stored kernel for lattice {other:?}"))),
    };
    Ok(KernelTable { lattice: spec.name.clone(), entries, provenance })
}

/// `sum_v w_{u,v} A_{u,v} - 1` for each vertex type `u`; all zero for a
/// valid table.
pub fn unit_flow_defects(spec: &LatticeSpec, table: &KernelTable) -> Result<Vec<KernelValue>> {
    let mut flow = vec![AlphaPoly::zero(); spec.vertex_count()];
    for cl in &spec.edges {
        let e = table.entry(&cl.kind)?;
        let w = cl.weight.symbolic();
        flow[cl.from] = flow[cl.from].clone() + e.forward.scale(&w);
        flow[cl.to] = flow[cl.to].clone() + e.backward.scale(&w);
    }
    let one = AlphaPoly::constant(RationalFunction::one());
    Ok(flow.into_iter().map(|f| f - one.clone()).collect())
}

/// `w (A + A') + w* (A* + A*') - 1` for each kind and its dual kind.
pub fn primal_dual_defects(
    spec: &LatticeSpec,
    table: &KernelTable,
    dual: &LatticeSpec,
    dual_table: &KernelTable,
) -> Result<Vec<(String, KernelValue)>> {
    let (_, pairs) = spec
        .dual
        .as_ref()
        .ok_or_else(|| Error::MissingKernel(format!("{} has no dual lattice", spec.name)))?;
    let weight_of = |s: &LatticeSpec, kind: &str| {
        s.edges.iter().find(|c| c.kind == kind).map(|c| c.weight.symbolic()).ok_or_else(|| {
            Error::MissingKernel(format!("{} has no {kind:?} edges", s.name))
        })
    };
    let mut out = Vec::new();
    for (k, dk) in pairs {
        let (e, de) = (table.entry(k)?, dual_table.entry(dk)?);
        let lhs = (e.forward.clone() + e.backward.clone()).scale(&weight_of(spec, k)?)
            + (de.forward.clone() + de.backward.clone()).scale(&weight_of(dual, dk)?);
        out.push((k.clone(), lhs - AlphaPoly::constant(RationalFunction::one())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::spec::{builtin, BUILTIN_NAMES};
    use crate::numerics::Rational;

    fn at_one(v: &KernelValue) -> Rational {
        v.as_constant().unwrap().eval(&rational(1, 1)).unwrap()
    }

    #[test]
    fn unit_flow_holds_symbolically() {
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            let t = kernel_closed(&s).unwrap();
            for d in unit_flow_defects(&s, &t).unwrap() {
                assert_eq!(d, AlphaPoly::zero(), "{name}");
            }
        }
    }

    #[test]
    fn primal_dual_relation_holds_symbolically() {
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            let d = builtin(&s.dual.clone().unwrap().0).unwrap();
            let defects = primal_dual_defects(&s, &kernel_closed(&s).unwrap(), &d, &kernel_closed(&d).unwrap()).unwrap();
            for (k, v) in defects {
                assert_eq!(v, AlphaPoly::zero(), "{name} {k}");
            }
        }
    }

    #[test]
    fn unweighted_values() {
        let t = kernel_closed(&builtin("triakis_triangular").unwrap()).unwrap();
        assert_eq!(at_one(&t.entry("12-12").unwrap().forward), rational(1, 10));
        assert_eq!(at_one(&t.entry("3-12").unwrap().forward), rational(1, 3));
        assert_eq!(at_one(&t.entry("3-12").unwrap().backward), rational(1, 15));
        let f = kernel_closed(&builtin("fisher").unwrap()).unwrap();
        assert_eq!(at_one(&f.entry("inter").unwrap().forward), rational(2, 5));
        assert_eq!(at_one(&f.entry("intra").unwrap().forward), rational(3, 10));
        let d = kernel_closed(&builtin("dice").unwrap()).unwrap();
        assert_eq!(at_one(&d.entry("e").unwrap().backward), rational(1, 6));
        assert!(t.entry("other").is_err());
    }
}
