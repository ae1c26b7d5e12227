use serde::Serialize;

use crate::error::{Error, Result};
use crate::looping::LoopStats;
use crate::numerics::{rational_to_string, Field, Rational, RationalFunction};

use super::alpha::{alpha_closed, AlphaPoly};
use super::kernel::{kernel_closed, KernelValue};
use super::spec::{builtin, LatticeSpec};

/// Lattice-limit `tau`, `Pr[e in T]` and `rho` as polynomials in `alpha`
/// with rational-function coefficients in `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicRow {
    pub lattice: String,
    pub tau: KernelValue,
    pub edge_in_tree: KernelValue,
    pub rho: KernelValue,
    pub delta: RationalFunction,
}

fn dual_of(spec: &LatticeSpec) -> Result<LatticeSpec> {
    let (name, _) = spec
        .dual
        .as_ref()
        .ok_or_else(|| Error::MissingKernel(format!("{} has no dual lattice", spec.name)))?;
    builtin(name)
}

/// `tau` from the dual lattice's kernel:
/// `sum w* (A A' + (A - A')^2) / sum 1/w*` over dual edge classes.
pub fn tau_symbolic(spec: &LatticeSpec) -> Result<KernelValue> {
    let dual = dual_of(spec)?;
    let table = kernel_closed(&dual)?;
    let mut num = AlphaPoly::zero();
    let mut den = RationalFunction::zero();
    for cl in &dual.edges {
        let e = table.entry(&cl.kind)?;
        let w = cl.weight.symbolic();
        let d = e.forward.clone() - e.backward.clone();
        num = num + (e.forward.clone() * e.backward.clone() + d.clone() * d).scale(&w);
        den = den + w.recip();
    }
    Ok(num.scale(&den.recip()))
}

/// Weighted `Pr[e in T] = sum w^2 (A + A') / sum w` over edge classes.
pub fn edge_in_tree_symbolic(spec: &LatticeSpec) -> Result<KernelValue> {
    let table = kernel_closed(spec)?;
    let mut num = AlphaPoly::zero();
    let mut den = RationalFunction::zero();
    for cl in &spec.edges {
        let e = table.entry(&cl.kind)?;
        let w = cl.weight.symbolic();
        num = num + (e.forward.clone() + e.backward.clone()).scale(&(w.clone() * w.clone()));
        den = den + w;
    }
    Ok(num.scale(&den.recip()))
}

pub fn table_row_symbolic(spec: &LatticeSpec) -> Result<SymbolicRow> {
    let tau = tau_symbolic(spec)?;
    let edge_in_tree = edge_in_tree_symbolic(spec)?;
    let half = RationalFunction::one() / RationalFunction::from_i64(2);
    let rho = tau.clone() + edge_in_tree.scale(&half);
    Ok(SymbolicRow { lattice: spec.name.clone(), tau, edge_in_tree, rho, delta: spec.delta() })
}

fn eval_coeffs(p: &KernelValue, beta: &Rational) -> Result<AlphaPoly<Rational>> {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| c.eval(beta).ok_or_else(|| Error::InvalidArgument(format!("beta = {beta} is a pole"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(AlphaPoly::new(coeffs))
}

fn rational_value(p: &KernelValue, beta: &Rational) -> Result<Rational> {
    eval_coeffs(p, beta)?.as_constant().ok_or_else(|| {
        Error::InvalidArgument(format!("value at beta = {beta} involves the transcendental alpha(beta)"))
    })
}

impl SymbolicRow {
    /// Exact row at rational `beta`; fails when `alpha(beta)` is needed.
    pub fn exact(&self, beta: &Rational) -> Result<LoopStats<Rational>> {
        let delta = self.delta.eval(beta).ok_or_else(|| Error::InvalidArgument(format!("beta = {beta} is a pole")))?;
        LoopStats::from_parts(rational_value(&self.tau, beta)?, rational_value(&self.edge_in_tree, beta)?, delta, None)
    }

    /// Floating-point row, with `alpha` from its closed form.
    pub fn numeric(&self, beta: f64) -> Result<LoopStats<f64>> {
        let needs_alpha = self.tau.coeffs().len() > 1 || self.edge_in_tree.coeffs().len() > 1;
        let alpha = if needs_alpha { alpha_closed(beta)? } else { 0.0 };
        let eval = |p: &KernelValue| p.map(|c| c.eval_f64(beta)).eval(&alpha);
        LoopStats::from_parts(eval(&self.tau), eval(&self.edge_in_tree), self.delta.eval_f64(beta), None)
    }

    /// `tau` and `rho` at rational `beta`, as polynomials in `alpha`.
    pub fn alpha_form(&self, beta: &Rational) -> Result<(AlphaPoly<Rational>, AlphaPoly<Rational>)> {
        Ok((eval_coeffs(&self.tau, beta)?, eval_coeffs(&self.rho, beta)?))
    }
}

/// One row of the lattice table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub lattice: String,
    pub beta: String,
    /// Exact values as `"p/q"` strings, when they are rational.
    pub exact: Option<LoopStats<String>>,
    pub value: LoopStats<f64>,
    /// `tau` and `rho` in terms of `a = alpha(beta)` when it occurs.
    pub alpha_form: Option<(String, String)>,
}

/// Full row for a built-in lattice at rational `beta`.
pub fn table_row(spec: &LatticeSpec, beta: &Rational) -> Result<TableRow> {
    let sym = table_row_symbolic(spec)?;
    let value = sym.numeric(crate::numerics::Scalar::to_f64(beta))?;
    let exact = sym.exact(beta).ok().map(|st| st.map(rational_to_string));
    let alpha_form = match exact {
        Some(_) => None,
        None => {
            let (t, r) = sym.alpha_form(beta)?;
            Some((t.to_string(), r.to_string()))
        }
    };
    Ok(TableRow { lattice: spec.name.clone(), beta: rational_to_string(beta), exact, value, alpha_form })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rational, Polynomial};

    fn exact_row(name: &str) -> LoopStats<Rational> {
        table_row_symbolic(&builtin(name).unwrap()).unwrap().exact(&rational(1, 1)).unwrap()
    }

    #[test]
    fn rational_rows() {
        let sq = exact_row("square");
        assert_eq!(
            (sq.tau, sq.lambda, sq.mean_lerw_loop, sq.rho, sq.delta_rho, sq.sand_density),
            (rational(1, 16), rational(8, 1), rational(16, 5), rational(5, 16), rational(5, 4), rational(17, 8))
        );
        let fi = exact_row("fisher");
        assert_eq!((fi.tau, fi.lambda, fi.rho), (rational(59, 900), rational(300, 59), rational(359, 900)));
        assert_eq!(fi.sand_density, rational(959, 600));
        let tr = exact_row("triakis_triangular");
        assert_eq!((tr.tau, tr.rho, tr.sand_density), (rational(17, 150), rational(7, 25), rational(167, 50)));
        assert_eq!(exact_row("kagome").sand_density, rational(13, 6));
        assert_eq!(exact_row("honeycomb").sand_density, rational(37, 24));
        assert_eq!(exact_row("triangular").sand_density, rational(10, 3));
        assert_eq!(exact_row("dice"), exact_row("square"));
    }

    #[test]
    fn weighted_triakis_rational_functions() {
        let sym = table_row_symbolic(&builtin("triakis_triangular").unwrap()).unwrap();
        let p = |c: &[i64]| Polynomial::from_i64(c);
        // 2 (b + 2) (3b + 2)^2 = 18 b^3 + 60 b^2 + 56 b + 16
        let den = p(&[16, 56, 60, 18]);
        let tau = RationalFunction::new(p(&[1, 6, 8, 2]), den.clone());
        // (b + 1)(5 b^2 + 11 b + 5) = 5 b^3 + 16 b^2 + 16 b + 5
        let rho = RationalFunction::new(p(&[5, 16, 16, 5]), den);
        assert_eq!(sym.tau.as_constant().unwrap(), tau);
        assert_eq!(sym.rho.as_constant().unwrap(), rho);
    }

    #[test]
    fn alpha_rows() {
        let sym = table_row_symbolic(&builtin("square_octagon").unwrap()).unwrap();
        let (t, _) = sym.alpha_form(&rational(1, 1)).unwrap();
        assert_eq!(t.coeffs(), &[rational(1, 24), rational(-1, 6), rational(1, 1)]);
        let tk = table_row_symbolic(&builtin("tetrakis_square").unwrap()).unwrap();
        let (t, r) = tk.alpha_form(&rational(1, 1)).unwrap();
        assert_eq!(t.coeffs(), &[rational(1, 8), rational(-1, 6), rational(1, 2)]);
        assert_eq!(r.coeffs(), &[rational(7, 24), rational(-1, 6), rational(1, 2)]);
        assert!(sym.exact(&rational(1, 1)).is_err());
        let row = table_row(&builtin("square_octagon").unwrap(), &rational(1, 1)).unwrap();
        assert!(row.exact.is_none() && row.alpha_form.is_some());
    }

    #[test]
    fn weighted_square_octagon_matches_general_formula() {
        // tau = (b/8)/(1+2b) - (b/2)/(1+2b) b a + b^2 a^2
        let sym = table_row_symbolic(&builtin("square_octagon").unwrap()).unwrap();
        let b = RationalFunction::var();
        let one_2b = RationalFunction::from_poly(Polynomial::from_i64(&[1, 2]));
        let eighth = RationalFunction::from_rational(&rational(1, 8));
        let half = RationalFunction::from_rational(&rational(1, 2));
        assert_eq!(sym.tau.coeff(0), eighth * b.clone() / one_2b.clone());
        assert_eq!(sym.tau.coeff(1), -(half * b.clone() * b.clone() / one_2b));
        assert_eq!(sym.tau.coeff(2), b.clone() * b);
    }
}
