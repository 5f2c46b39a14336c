//! Dense matrices over a [`Scalar`] with elimination-based routines.
//!
//! In exact mode every routine is exact. In float mode pivots smaller than
//! the global tolerance (relative to the largest entry) are treated as zero.

use std::fmt;

use crate::scalar::{float_tolerance, Mode, Rational, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Row-major `[[a, b], [c, d]]`.
impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "{}[{}]", if i > 0 { ", " } else { "" }, cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { S::zero() })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from columns.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let n = cols.first().map_or(0, Vec::len);
        Self::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn from_rational(m: &Matrix<Rational>) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(S::from_rational).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|v| v.to_f64())
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

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * k).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
            })
            .collect()
    }

    /// `uᵀ M v`.
    pub fn bilinear(&self, u: &[S], v: &[S]) -> S {
        dot(u, &self.mul_vec(v))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest absolute entry, as a scalar.
    pub fn max_abs(&self) -> S {
        let mut best = S::zero();
        for v in &self.data {
            let a = v.abs();
            if greater(&a, &best) {
                best = a;
            }
        }
        best
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_negligible)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.sub(&self.transpose()).is_zero()
    }

    fn pivot_threshold(&self) -> f64 {
        match S::MODE {
            Mode::Exact => 0.0,
            Mode::Float => {
                let scale = self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
                float_tolerance() * scale.max(1.0)
            }
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let threshold = self.pivot_threshold();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(row, col, threshold) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip().expect("pivot is nonzero");
            for c in col..m.cols {
                m[(row, c)] = m[(row, c)].clone() * &inv;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let delta = factor.clone() * &m[(row, c)];
                    m[(r, c)] = m[(r, c)].clone() - delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        if S::MODE == Mode::Float {
            for v in &mut m.data {
                if v.to_f64().abs() <= threshold {
                    *v = S::zero();
                }
            }
        }
        (m, pivots)
    }

    fn pick_pivot(&self, from: usize, col: usize, threshold: f64) -> Option<usize> {
        match S::MODE {
            Mode::Exact => (from..self.rows).find(|&r| !self[(r, col)].is_zero()),
            Mode::Float => (from..self.rows)
                .map(|r| (r, self[(r, col)].to_f64().abs()))
                .filter(|(_, v)| *v > threshold)
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(r, _)| r),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                S::one()
            } else {
                S::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(MatrixError::Singular);
        }
        Ok(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square());
        let mut m = self.clone();
        let threshold = self.pivot_threshold();
        let mut det = S::one();
        for col in 0..m.cols {
            let Some(p) = m.pick_pivot(col, col, threshold) else {
                return S::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * &pivot;
            let inv = pivot.recip().expect("nonzero pivot");
            for r in col + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() * &inv;
                for c in col..m.cols {
                    let delta = factor.clone() * &m[(col, c)];
                    m[(r, c)] = m[(r, c)].clone() - delta;
                }
            }
        }
        det
    }

    /// Coefficients `[c_0, …, c_m]` of `det(λI − M) = Σ c_k λ^(m−k)`
    /// (Faddeev–LeVerrier), with `c_0 = 1`.
    pub fn characteristic_polynomial(&self) -> Vec<S> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![S::one()];
        let mut aux = Self::zeros(n, n);
        let identity = Self::identity(n);
        for k in 1..=n {
            aux = self.mul(&aux.add(&identity.scale(coeffs.last().expect("nonempty"))));
            let ck = -aux.trace().div_i64(k as i64);
            coeffs.push(ck);
        }
        coeffs
    }

    /// Smallest `k ≥ 1` with `M^k = 0`, if `M` is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=self.rows.max(1) {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }
}

impl Matrix<Rational> {
    /// Parses a row-major nested list of rationals.
    pub fn from_rational_rows(rows: &[Vec<Rational>]) -> Result<Self, MatrixError> {
        Self::from_rows(rows.to_vec())
    }
}

/// Strict comparison `a > b` (exact in exact mode).
pub fn greater<S: Scalar>(a: &S, b: &S) -> bool {
    match S::MODE {
        Mode::Exact => (a.clone() - b).sign() > 0,
        Mode::Float => a.to_f64() > b.to_f64(),
    }
}

pub fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b)
}

/// Max-norm of a vector of scalars.
pub fn max_abs<S: Scalar>(v: &[S]) -> S {
    let mut best = S::zero();
    for x in v {
        let a = x.abs();
        if greater(&a, &best) {
            best = a;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn exact_inverse_and_determinant() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert_eq!(a.determinant(), int(18));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).inverse(), Err(MatrixError::Singular));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn characteristic_polynomial_of_diag() {
        let a = Matrix::diagonal(&[int(1), int(-1)]);
        assert_eq!(a.characteristic_polynomial(), vec![int(1), int(0), int(-1)]);
        let j = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(j.characteristic_polynomial(), vec![int(1), int(0), int(0)]);
        assert_eq!(j.nilpotency_index(), Some(2));
        assert_eq!(a.nilpotency_index(), None);
    }

    #[test]
    fn float_rref_uses_tolerance() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-13]]).unwrap();
        assert_eq!(a.rank(), 1);
        let b: Matrix<f64> = Matrix::from_rational(&m(&[&[1, 2], &[3, 4]]));
        assert!((b.determinant() + 2.0).abs() < 1e-12);
        assert_eq!(max_abs(&[ratio(-3, 2), int(1)]), ratio(3, 2));
    }
}
