//! Dense exact linear algebra over an arbitrary field.

use std::fmt;
use std::ops::Neg;

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

/// What elimination needs from a scalar type.
pub trait Field:
    Clone + PartialEq + Zero + One + fmt::Debug + fmt::Display + Neg<Output = Self>
{
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
}

macro_rules! field_impl {
    ($t:ty) => {
        impl Field for $t {
            fn add_ref(&self, o: &Self) -> Self {
                self + o
            }
            fn sub_ref(&self, o: &Self) -> Self {
                self - o
            }
            fn mul_ref(&self, o: &Self) -> Self {
                self * o
            }
            fn div_ref(&self, o: &Self) -> Self {
                self / o
            }
        }
    };
}
field_impl!(Rational);
field_impl!(Scalar);

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<F>]) -> Result<Self> {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: o.rows,
            });
        }
        let mut out: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out[(i, j)] = out[(i, j)].add_ref(&a.mul_ref(&o[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect())
    }

    pub fn sub(&self, o: &Matrix<F>) -> Result<Matrix<F>> {
        self.zip_with(o, F::sub_ref)
    }

    pub fn add(&self, o: &Matrix<F>) -> Result<Matrix<F>> {
        self.zip_with(o, F::add_ref)
    }

    fn zip_with(&self, o: &Matrix<F>, f: impl Fn(&F, &F) -> F) -> Result<Matrix<F>> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: o.rows * o.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_ref(s)).collect(),
        }
    }

    /// Rows and columns selected by index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Fraction-free (Bareiss) elimination. Returns the rank and, for square
    /// input, the determinant.
    fn bareiss(&self) -> (usize, F) {
        let mut a = self.clone();
        let (n, m) = (a.rows, a.cols);
        let mut prev = F::one();
        let mut sign_neg = false;
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap_rows(p, r);
                sign_neg = !sign_neg;
            }
            for i in r + 1..n {
                for j in c + 1..m {
                    let v = a[(r, c)]
                        .mul_ref(&a[(i, j)])
                        .sub_ref(&a[(i, c)].mul_ref(&a[(r, j)]))
                        .div_ref(&prev);
                    a[(i, j)] = v;
                }
                a[(i, c)] = F::zero();
            }
            prev = a[(r, c)].clone();
            r += 1;
        }
        let det = if n == m && r == n {
            if sign_neg {
                -prev
            } else {
                prev
            }
        } else {
            F::zero()
        };
        (r, det)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn det(&self) -> Result<F> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(F::one());
        }
        Ok(self.bareiss().1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = F::one().div_ref(&a[(r, c)]);
            for j in c..a.cols {
                a[(r, j)] = a[(r, j)].mul_ref(&inv);
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    a[(i, j)] = a[(i, j)].sub_ref(&f.mul_ref(&a[(r, j)]));
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Basis of `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Matrix<F>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Rank of the span of a list of vectors of common length `dim`.
pub fn span_rank<F: Field>(dim: usize, vecs: &[Vec<F>]) -> Result<usize> {
    if vecs.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_cols(dim, vecs)?.rank())
}

/// `span(a) == span(b)` by comparing ranks of `a`, `b` and `a ∪ b`.
pub fn same_span<F: Field>(dim: usize, a: &[Vec<F>], b: &[Vec<F>]) -> Result<bool> {
    let ra = span_rank(dim, a)?;
    let rb = span_rank(dim, b)?;
    let both: Vec<Vec<F>> = a.iter().chain(b).cloned().collect();
    Ok(ra == rb && span_rank(dim, &both)? == ra)
}

/// Numerical rank by Gaussian elimination with complete pivoting; entries
/// below `rel_tol` times the largest entry count as zero.
pub fn rank_f64(rows: usize, cols: usize, data: &[f64], rel_tol: f64) -> usize {
    let mut a = data.to_vec();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut r = 0;
    let mut used_cols = vec![false; cols];
    let mut used_rows = vec![false; rows];
    loop {
        let mut best = (0.0, 0, 0);
        for i in (0..rows).filter(|&i| !used_rows[i]) {
            for j in (0..cols).filter(|&j| !used_cols[j]) {
                let v = a[i * cols + j].abs();
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        if best.0 <= tol {
            return r;
        }
        let (_, pi, pj) = best;
        used_rows[pi] = true;
        used_cols[pj] = true;
        for i in (0..rows).filter(|&i| !used_rows[i]) {
            let f = a[i * cols + pj] / a[pi * cols + pj];
            for j in 0..cols {
                a[i * cols + j] -= f * a[pi * cols + j];
            }
        }
        r += 1;
    }
}
