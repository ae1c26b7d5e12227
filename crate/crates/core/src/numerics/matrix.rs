use std::ops::{Index, IndexMut};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense row-major matrix over a single scalar backend.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        Ok(Self::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(S::zero(), |acc, k| acc + self[(r, k)].clone() * other[(k, c)].clone())
        }))
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// The matrix with the listed rows and columns deleted. Index lists may be
    /// unsorted; duplicates are ignored.
    pub fn submatrix_minor(&self, delete_rows: &[usize], delete_cols: &[usize]) -> Result<Matrix<S>> {
        for &r in delete_rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange { index: r, dim: self.rows });
            }
        }
        for &c in delete_cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange { index: c, dim: self.cols });
            }
        }
        let keep_rows: Vec<usize> = (0..self.rows).filter(|r| !delete_rows.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|c| !delete_cols.contains(c)).collect();
        Ok(self.select(&keep_rows, &keep_cols))
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        let mut out = Matrix { rows: rows.len(), cols: cols.len(), data: Vec::with_capacity(rows.len() * cols.len()) };
        for &r in rows {
            for &c in cols {
                out.data.push(self[(r, c)].clone());
            }
        }
        out
    }

    /// Determinant. Exact backends use fraction-free (Bareiss) elimination;
    /// floating point uses partially pivoted LU. The empty matrix has
    /// determinant one.
    pub fn determinant(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        if S::EXACT {
            Ok(bareiss_determinant(self.clone()))
        } else {
            Ok(pivoted_determinant(self.clone()))
        }
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let rhs = Matrix { rows: b.len(), cols: 1, data: b.to_vec() };
        let x = gauss_jordan(self.clone(), rhs)?;
        if !S::EXACT {
            let bnorm = b.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
            let residual = self
                .mul_vec(&x.data)?
                .iter()
                .zip(b)
                .map(|(ax, bi)| (ax.to_f64() - bi.to_f64()).abs())
                .fold(0.0, f64::max);
            if residual > 1e-10 * bnorm.max(f64::MIN_POSITIVE) && residual > 1e-300 {
                return Err(Error::Singular);
            }
        }
        Ok(x.data)
    }

    pub fn inverse(&self) -> Result<Matrix<S>> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        gauss_jordan(self.clone(), Matrix::identity(self.rows))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

fn swap_rows<S>(m: &mut Matrix<S>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    for c in 0..cols {
        m.data.swap(a * cols + c, b * cols + c);
    }
}

fn choose_pivot<S: Scalar>(m: &Matrix<S>, col: usize, from: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.rows).find(|&r| !m[(r, col)].is_zero())
    } else {
        let (best, mag) = (from..m.rows)
            .map(|r| (r, m[(r, col)].magnitude()))
            .fold((from, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > 0.0).then_some(best)
    }
}

fn bareiss_determinant<S: Scalar>(mut m: Matrix<S>) -> S {
    let n = m.rows;
    if n == 0 {
        return S::one();
    }
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n - 1 {
        let Some(p) = choose_pivot(&m, k, k) else {
            return S::zero();
        };
        if p != k {
            swap_rows(&mut m, p, k);
            negate = !negate;
        }
        let pivot = m[(k, k)].clone();
        for i in k + 1..n {
            let lead = m[(i, k)].clone();
            for j in k + 1..n {
                let v = (m[(i, j)].clone() * pivot.clone() - lead.clone() * m[(k, j)].clone()) / prev.clone();
                m[(i, j)] = v;
            }
        }
        prev = pivot;
    }
    let det = m[(n - 1, n - 1)].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn pivoted_determinant<S: Scalar>(mut m: Matrix<S>) -> S {
    let n = m.rows;
    let mut det = S::one();
    for k in 0..n {
        let Some(p) = choose_pivot(&m, k, k) else {
            return S::zero();
        };
        if p != k {
            swap_rows(&mut m, p, k);
            det = -det;
        }
        let pivot = m[(k, k)].clone();
        det = det * pivot.clone();
        for i in k + 1..n {
            let factor = m[(i, k)].clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = m[(i, j)].clone() - factor.clone() * m[(k, j)].clone();
                m[(i, j)] = v;
            }
        }
    }
    det
}

/// Reduces `[a | rhs]` to `[I | a^{-1} rhs]`.
fn gauss_jordan<S: Scalar>(mut a: Matrix<S>, mut rhs: Matrix<S>) -> Result<Matrix<S>> {
    let n = a.rows;
    let scale = if S::EXACT { 0.0 } else { a.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max) };
    for k in 0..n {
        let p = choose_pivot(&a, k, k).ok_or(Error::Singular)?;
        if !S::EXACT && a[(p, k)].magnitude() <= 1e-13 * scale {
            return Err(Error::Singular);
        }
        swap_rows(&mut a, p, k);
        swap_rows(&mut rhs, p, k);
        let inv = a[(k, k)].recip();
        for j in 0..n {
            let v = a[(k, j)].clone() * inv.clone();
            a[(k, j)] = v;
        }
        for j in 0..rhs.cols {
            let v = rhs[(k, j)].clone() * inv.clone();
            rhs[(k, j)] = v;
        }
        for i in 0..n {
            if i == k || a[(i, k)].is_zero() {
                continue;
            }
            let factor = a[(i, k)].clone();
            for j in k..n {
                let v = a[(i, j)].clone() - factor.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
            for j in 0..rhs.cols {
                let v = rhs[(i, j)].clone() - factor.clone() * rhs[(k, j)].clone();
                rhs[(i, j)] = v;
            }
        }
    }
    Ok(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rational, Rational};
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(q(&[&[1]]).determinant().unwrap(), rational(1, 1));
        assert_eq!(q(&[&[2, -1], &[-1, 2]]).determinant().unwrap(), rational(3, 1));
        assert_eq!(q(&[&[0, 1], &[1, 0]]).determinant().unwrap(), rational(-1, 1));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).determinant().unwrap(), rational(0, 1));
        let f: Matrix<f64> = Matrix::from_i64_rows(&[&[2, -1], &[-1, 2]]).unwrap();
        assert!((f.determinant().unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn determinant_rejects_rectangular() {
        let m = q(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(m.determinant(), Err(Error::NonSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn empty_matrix_has_unit_determinant() {
        let m = q(&[&[1, 2], &[3, 4]]);
        let empty = m.submatrix_minor(&[0, 1], &[0, 1]).unwrap();
        assert_eq!(empty.rows(), 0);
        assert_eq!(empty.determinant().unwrap(), rational(1, 1));
        let wide = m.submatrix_minor(&[0, 1], &[]).unwrap();
        assert_eq!((wide.rows(), wide.cols()), (0, 2));
    }

    #[test]
    fn minor_deletes_rows_and_columns() {
        let m = q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(m.submatrix_minor(&[], &[]).unwrap(), m);
        assert_eq!(m.submatrix_minor(&[2], &[2]).unwrap(), q(&[&[1, 2], &[4, 5]]));
        assert!(matches!(m.submatrix_minor(&[3], &[]), Err(Error::IndexOutOfRange { index: 3, dim: 3 })));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::<Rational>::identity(3);
        let b = vec![rational(1, 2), rational(-3, 1), rational(7, 5)];
        assert_eq!(id.solve(&b).unwrap(), b);
        // Cramer: x = (2/3, 1/3)
        let m = q(&[&[2, -1], &[-1, 2]]);
        let x = m.solve(&[rational(1, 1), rational(0, 1)]).unwrap();
        assert_eq!(x, vec![rational(2, 3), rational(1, 3)]);
        let s = q(&[&[1, 1], &[1, 1]]);
        assert_eq!(s.solve(&[rational(1, 1), rational(0, 1)]), Err(Error::Singular));
        let sf: Matrix<f64> = Matrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(sf.solve(&[1.0, 0.0]), Err(Error::Singular));
    }

    #[test]
    fn inverse_round_trip() {
        let m = q(&[&[4, -1, 0], &[-1, 4, -1], &[0, -1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3));
    }

    proptest! {
        #[test]
        fn exact_and_float_determinants_agree(entries in prop::collection::vec(-9i64..=9, 100)) {
            // diagonally dominated to stay well conditioned
            let exact = Matrix::<Rational>::from_fn(10, 10, |r, c| {
                let v = entries[r * 10 + c] + if r == c { 60 } else { 0 };
                rational(v, 1)
            });
            let float = exact.map(|v| v.to_f64());
            let de = exact.determinant().unwrap().to_f64();
            let df = float.determinant().unwrap();
            prop_assert!(((de - df) / de).abs() < 1e-8);
        }

        #[test]
        fn bareiss_matches_cofactor_expansion(entries in prop::collection::vec(-5i64..=5, 16)) {
            let m = Matrix::<Rational>::from_fn(4, 4, |r, c| rational(entries[r * 4 + c], 1));
            prop_assert_eq!(m.determinant().unwrap(), cofactor(&m));
        }
    }

    fn cofactor(m: &Matrix<Rational>) -> Rational {
        let n = m.rows();
        if n == 0 {
            return rational(1, 1);
        }
        let mut acc = rational(0, 1);
        for c in 0..n {
            let sub = m.submatrix_minor(&[0], &[c]).unwrap();
            let term = m[(0, c)].clone() * cofactor(&sub);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
}
