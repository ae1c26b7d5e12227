use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, rational, Field, Rational};

/// Polynomial in the transcendental kernel value `alpha`, with coefficients
/// in a field (usually rational functions of `beta`).
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> AlphaPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AlphaPoly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        AlphaPoly { coeffs: Vec::new() }
    }

    /// `c * alpha`.
    pub fn alpha_times(c: F) -> Self {
        Self::new(vec![F::zero(), c])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `alpha^i`.
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    /// The value when `alpha` does not occur.
    pub fn as_constant(&self) -> Option<F> {
        match self.coeffs.len() {
            0 => Some(F::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> AlphaPoly<G> {
        AlphaPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, alpha: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * alpha.clone() + c.clone())
    }
}

impl<F: Field> Add for AlphaPoly<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Field> Neg for AlphaPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<F: Field> Sub for AlphaPoly<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Field> Mul for AlphaPoly<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<F: Field + fmt::Display> fmt::Display for AlphaPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*a")?,
                _ => write!(f, "({c})*a^{i}")?,
            }
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveBeta(beta))
    }
}

/// `alpha(beta) = arcsec(2 beta + 1) / (2 pi sqrt(beta^2 + beta))`: the
/// potential kernel across an 8-8 edge of the tetrakis square lattice whose
/// 8-8 edges have weight `beta`.
pub fn alpha_closed(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((1.0 / (2.0 * beta + 1.0)).acos() / (2.0 * PI * (beta * beta + beta).sqrt()))
}

/// Algebraic closed form when one is known. Only `beta = 1/2` qualifies,
/// where `alpha = 1/sqrt(27)`.
pub fn alpha_algebraic(beta: &Rational) -> Option<&'static str> {
    (*beta == rational(1, 2)).then_some("1/sqrt(27)")
}

/// Smallest subinterval the 1D quadrature will split.
pub const QUADRATURE_FLOOR: f64 = 1e-10;

/// `alpha(beta)` from the one-dimensional integral
/// `(1 / (2 sqrt(beta^2 + beta))) * int_0^1 sqrt((1 - cos 2 pi t) / ((3 + 2/beta) - cos 2 pi t)) dt`.
pub fn alpha_quadrature(beta: f64, tol: f64) -> Result<f64> {
    check_beta(beta)?;
    let c = 3.0 + 2.0 / beta;
    let f = |t: f64| {
        let cs = (2.0 * PI * t).cos();
        ((1.0 - cs).max(0.0) / (c - cs)).sqrt()
    };
    let scale = 1.0 / (2.0 * (beta * beta + beta).sqrt());
    // the integrand is symmetric about t = 1/2
    let half = adaptive_simpson(&f, 0.0, 0.5, tol / (4.0 * scale), QUADRATURE_FLOOR)?;
    Ok(2.0 * half * scale)
}

/// `alpha(beta) = 2 * mean over the torus of (2 - w - 1/w) / P(z, w)`, by the
/// midpoint rule on an `m x m` grid. Converges slowly near `z = w = 1`.
pub fn alpha_torus(beta: f64, m: usize) -> Result<f64> {
    check_beta(beta)?;
    let mut acc = 0.0;
    for i in 0..m {
        let a = 2.0 * (2.0 * PI * (i as f64 + 0.5) / m as f64).cos();
        for j in 0..m {
            let b = 2.0 * (2.0 * PI * (j as f64 + 0.5) / m as f64).cos();
            acc += (2.0 - b) / tetrakis_p(beta, a, b);
        }
    }
    Ok(2.0 * acc / (m * m) as f64)
}

/// `P(z, w)` for the tetrakis square lattice, in terms of `a = z + 1/z` and
/// `b = w + 1/w`.
pub fn tetrakis_p(beta: f64, a: f64, b: f64) -> f64 {
    16.0 * beta + 12.0 - (4.0 * beta + 2.0) * (a + b) - a * b
}

/// Laplacian of a periodic lattice in Fourier space, indexed by the vertex
/// types of a fundamental domain.
#[derive(Debug, Clone)]
pub struct SpectralLaplacian {
    size: usize,
    /// `(from, to, (dx, dy), weight)` for each edge class.
    classes: Vec<(usize, usize, (i64, i64), f64)>,
}

impl SpectralLaplacian {
    pub fn new(size: usize, classes: Vec<(usize, usize, (i64, i64), f64)>) -> Self {
        SpectralLaplacian { size, classes }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `Delta(z, w)`: weighted degree on the diagonal, and `-weight * z^dx w^dy`
    /// from `from` to `to` for each class, plus its conjugate transpose.
    pub fn at(&self, z: Complex64, w: Complex64) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); self.size]; self.size];
        for &(u, v, (dx, dy), c) in &self.classes {
            let phase = z.powi(dx as i32) * w.powi(dy as i32);
            m[u][u] += c;
            m[v][v] += c;
            m[u][v] -= c * phase;
            m[v][u] -= c * phase.inv();
        }
        m
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self, z: Complex64, w: Complex64) -> Complex64 {
        let mut m = self.at(z, w);
        let n = self.size;
        let mut det = Complex64::new(1.0, 0.0);
        for c in 0..n {
            let p = (c..n).max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm())).expect("non-empty");
            if m[p][c].norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c];
            for r in c + 1..n {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    let t = m[c][k];
                    m[r][k] -= f * t;
                }
            }
        }
        det
    }
}
