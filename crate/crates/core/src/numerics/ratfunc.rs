//! Univariate polynomials and rational functions with exact rational
//! coefficients, used to carry an edge-weight parameter symbolically.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::{rational_to_string, Field, Rational};

/// Dense polynomial, coefficients from the constant term upwards. The
/// leading coefficient is never zero; the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use super::Scalar;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().unwrap().clone() / lead.clone();
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * d;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Field::is_zero) {
                rem.pop();
            }
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coef = rational_to_string(&mag);
            match (i, mag == Rational::one()) {
                (0, _) => out.push_str(&coef),
                (_, true) => {}
                (_, false) => {
                    out.push_str(&coef);
                    out.push('*');
                }
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
                        + rhs.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
                })
                .collect(),
        )
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Quotient of two polynomials in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction { num, den: Polynomial::from_i64(&[1]) };
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip();
        RationalFunction { num: num.scale(&lead), den: den.scale(&lead) }
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::new(p, Polynomial::from_i64(&[1]))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            self.num.fmt_in(var)
        } else {
            format!("({}) / ({})", self.num.fmt_in(var), self.den.fmt_in(var))
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("b"))
    }
}

impl Add for RationalFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num + rhs.num, self.den);
        }
        Self::new(self.num * rhs.den.clone() + rhs.num * self.den.clone(), self.den * rhs.den)
    }
}

impl Sub for RationalFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RationalFunction {
    type Output = Self;
    fn neg(self) -> Self {
        RationalFunction { num: -self.num, den: self.den }
    }
}

impl Mul for RationalFunction {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Div for RationalFunction {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.num.is_zero(), "division by zero rational function");
        Self::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(Polynomial::new(vec![]))
    }
    fn one() -> Self {
        Self::from_poly(Polynomial::from_i64(&[1]))
    }
    fn from_i64(v: i64) -> Self {
        Self::from_poly(Polynomial::from_i64(&[v]))
    }
    fn from_rational(r: &Rational) -> Self {
        Self::from_poly(Polynomial::constant(r.clone()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    #[test]
    fn division_with_remainder() {
        // (x^2 + 3x + 2) = (x + 1)(x + 2)
        let (q, r) = p(&[2, 3, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[1, 0, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, p(&[2]));
    }

    #[test]
    fn gcd_is_monic() {
        let g = Polynomial::gcd(&(p(&[1, 1]) * p(&[2, 3])), &(p(&[1, 1]) * p(&[0, 5])));
        assert_eq!(g, p(&[1, 1]));
    }

    #[test]
    fn rational_functions_reduce() {
        let f = RationalFunction::new(p(&[2, 3, 1]), p(&[2, 2]));
        assert_eq!(f.numer(), &Polynomial::new(vec![rational(1, 1), rational(1, 2)]));
        assert_eq!(f.denom(), &p(&[1]));
        let b = RationalFunction::var();
        let one = RationalFunction::one();
        let g = (b.clone() * b.clone() - one.clone()) / (b.clone() - one.clone());
        assert_eq!(g, b + one);
    }

    #[test]
    fn formats_with_variable_name() {
        assert_eq!(p(&[1, -2, 3]).fmt_in("b"), "3*b^2 - 2*b + 1");
        assert_eq!(p(&[0, 1]).fmt_in("b"), "b");
        let f = RationalFunction::new(p(&[1]), p(&[2, 1]));
        assert_eq!(f.fmt_in("b"), "(1) / (b + 2)");
    }

    proptest! {
        #[test]
        fn evaluation_is_a_homomorphism(a in prop::collection::vec(-4i64..5, 0..4),
                                        b in prop::collection::vec(-4i64..5, 1..4),
                                        x in 1i64..7) {
            let (pa, pb) = (p(&a), p(&b));
            prop_assume!(!pb.is_zero());
            let xq = rational(x, 3);
            prop_assume!(!pb.eval(&xq).is_zero());
            let f = RationalFunction::new(pa.clone(), pb.clone());
            prop_assert_eq!(f.eval(&xq).unwrap(), pa.eval(&xq) / pb.eval(&xq));
            let sq = f.clone() * f.clone() + f.clone();
            let fx = f.eval(&xq).unwrap();
            prop_assert_eq!(sq.eval(&xq).unwrap(), fx.clone() * fx.clone() + fx);
        }
    }
}
