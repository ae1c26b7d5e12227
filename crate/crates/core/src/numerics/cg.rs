use super::matrix::Matrix;
use crate::error::{Error, Result};

/// A symmetric positive definite operator applied without materialising it.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
    fn diagonal(&self) -> Vec<f64>;
}

impl LinearOperator for Matrix<f64> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.rows()).map(|i| self[(i, i)]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `|b - Ax| / |b|`.
    pub residual: f64,
}

/// Jacobi-preconditioned conjugate gradients. Stops once the relative
/// residual drops below `tol`.
pub fn pcg<Op: LinearOperator + ?Sized>(op: &Op, b: &[f64], tol: f64, max_iter: usize) -> Result<PcgOutcome> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let inv_diag: Vec<f64> = op
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok(PcgOutcome { solution: x, iterations: 0, residual: 0.0 });
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut residual = 1.0;
    for it in 0..max_iter {
        op.apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::Singular);
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        residual = norm(&r) / bnorm;
        if residual < tol {
            return Ok(PcgOutcome { solution: x, iterations: it + 1, residual });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged { iterations: max_iter, residual })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
