//! Dense real matrix kernels.
//!
//! Determinants, cofactor matrices, outer products, numerical null spaces and
//! the rank-1 factorization of the cofactor matrix of a nullity-1 matrix.
//! Sizes here are small (a simplex in dimension `n` has an `(n+1)×(n+1)` Gram
//! matrix), so everything is plain row-major `Vec<f64>` storage.

mod decomp;

use std::fmt;
use std::ops::{Deref, Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decomp::{householder_complement, lu_solve, singular_values, symmetric_eigen, SymmetricEigen};

/// Default relative threshold for "numerically zero" eigenvalues.
pub const DEFAULT_NULL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix or vector must be non-empty")]
    Empty,
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("matrix is numerically full rank (no eigenvalue below threshold)")]
    FullRank,
    #[error("excess nullity: {0} eigenvalues below threshold")]
    ExcessNullity(usize),
    #[error("degenerate input: zero matrix (nullity >= 2 upstream)")]
    ZeroMatrix,
    #[error("numerical rank exceeds one (relative residual {0:.3e})")]
    RankExceedsOne(f64),
    #[error("null vectors are orthogonal; rank-1 decomposition undefined")]
    OrthogonalNullVectors,
    #[error("matrix is singular")]
    Singular,
}

/// A dense vector with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self, MatrixError> {
        if entries.is_empty() {
            return Err(MatrixError::Empty);
        }
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite(i));
        }
        Ok(Self(entries))
    }

    /// Builds a vector without validation. Callers guarantee finiteness.
    pub(crate) fn from_vec(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scaled(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|x| x * s).collect())
    }

    /// Unit vector in the same direction. Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(1.0 / n))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Flips the sign so the entry sum is positive; if the sum is ~0, the
    /// first non-negligible entry is made positive. Returns the applied sign.
    pub(crate) fn sign_normalize(&mut self) -> f64 {
        let s = sign_convention(&self.0);
        if s < 0.0 {
            self.0.iter_mut().for_each(|x| *x = -*x);
        }
        s
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    // scaled to avoid overflow for large coordinates
    let m = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * a.iter().map(|x| (x / m) * (x / m)).sum::<f64>().sqrt()
}

fn sign_convention(v: &[f64]) -> f64 {
    let sum: f64 = v.iter().sum();
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if sum.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return sum.signum();
    }
    v.iter()
        .find(|x| x.abs() > 1e-12 * scale)
        .map_or(1.0, |x| x.signum())
}

/// Dense row-major real matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite(i));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(MatrixError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Result<Self, MatrixError> {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.dim());
        if c == 0 || r == 0 {
            return Err(MatrixError::Empty);
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.dim() != r {
                return Err(MatrixError::DimensionMismatch {
                    expected: r,
                    found: col.dim(),
                });
            }
            for i in 0..r {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = *x;
        }
        m
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entrywise difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vector, MatrixError> {
        if x.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(Vector((0..self.rows).map(|i| dot(self.row(i), x)).collect()))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Copy with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self[(i, j)]);
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        Matrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Neumaier-compensated sum whose products are split exactly with FMA.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p);
        self.add(a.mul_add(b, -p));
    }

    /// `a b c`, exact up to a second-order term.
    pub(crate) fn add_product3(&mut self, a: f64, b: f64, c: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add_product(p, c);
        self.add(e * c);
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Determinant of a square matrix.
///
/// Up to 3x3 the permutation expansion is summed with exact products and
/// compensation, so the result is accurate even when the terms cancel down
/// to a tiny determinant (nearly rank-1 minors of a Gram matrix). Larger
/// matrices use LU with partial pivoting.
pub fn determinant(m: &Matrix) -> Result<f64, MatrixError> {
    let n = m.require_square()?;
    Ok(det_unchecked(m, n))
}

fn det_unchecked(m: &Matrix, n: usize) -> f64 {
    match n {
        1 => m[(0, 0)],
        2 => {
            let mut acc = CompensatedSum::default();
            acc.add_product(m[(0, 0)], m[(1, 1)]);
            acc.add_product(-m[(0, 1)], m[(1, 0)]);
            acc.value()
        }
        3 => {
            let mut acc = CompensatedSum::default();
            for (p, sign) in [([0, 1, 2], 1.0), ([1, 2, 0], 1.0), ([2, 0, 1], 1.0), ([0, 2, 1], -1.0), ([1, 0, 2], -1.0), ([2, 1, 0], -1.0)] {
                acc.add_product3(sign * m[(0, p[0])], m[(1, p[1])], m[(2, p[2])]);
            }
            acc.value()
        }
        _ => decomp::lu_determinant(m),
    }
}

/// Matrix of signed minors: entry `(i, j)` is `(-1)^(i+j) det M^{ij}`, with
/// row `i` and column `j` removed.
///
/// This is the untransposed cofactor matrix. The classical adjugate
/// (the one with `M adj(M) = det(M) I`) is its transpose; the two agree
/// for symmetric input.
pub fn cofactor_matrix(m: &Matrix) -> Result<Matrix, MatrixError> {
    let n = m.require_square()?;
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out[(i, j)] = sign * det_unchecked(&m.minor(i, j), n - 1);
        }
    }
    Ok(out)
}

/// `v wᵗ`, the matrix with entries `v_i w_j`.
pub fn outer_product(v: &[f64], w: &[f64]) -> Result<Matrix, MatrixError> {
    if v.len() != w.len() {
        return Err(MatrixError::DimensionMismatch {
            expected: v.len(),
            found: w.len(),
        });
    }
    if v.is_empty() {
        return Err(MatrixError::Empty);
    }
    let n = v.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = v[i] * w[j];
        }
    }
    Ok(m)
}

/// Unit vector spanning the numerical null space of `m`.
///
/// Symmetric input goes through a symmetric eigendecomposition, anything else
/// through the singular values. An eigenvalue (singular value) counts as zero
/// when it is at most `tol` times the largest one in magnitude. The result is
/// sign-normalized to a positive entry sum.
pub fn null_vector(m: &Matrix, tol: f64) -> Result<Vector, MatrixError> {
    let n = m.require_square()?;
    let (values, vectors) = if m.is_symmetric(1e-14 * m.max_abs()) {
        let eig = symmetric_eigen(m)?;
        (eig.values.iter().map(|x| x.abs()).collect::<Vec<_>>(), eig.vectors)
    } else {
        let svd = decomp::svd_right(m);
        (svd.0, svd.1)
    };
    let scale = values.iter().fold(0.0f64, |a, b| a.max(*b));
    let zero: Vec<usize> = (0..n).filter(|&i| values[i] <= tol * scale).collect();
    match zero.len() {
        0 => Err(MatrixError::FullRank),
        1 => {
            let mut v = vectors.column(zero[0]);
            let len = v.norm();
            v = v.scaled(1.0 / len);
            v.sign_normalize();
            Ok(v)
        }
        k => Err(MatrixError::ExcessNullity(k)),
    }
}

/// Factorization `m ≈ c · left · rightᵗ` with unit factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rank1Factorization {
    pub c: f64,
    pub left: Vector,
    pub right: Vector,
    /// `max |m - c left rightᵗ|`
    pub residual: f64,
}

/// Splits a numerically rank-1 matrix into `c · v · wᵗ`.
///
/// Both factors have unit norm and a positive entry sum; `c` carries the
/// magnitude and sign. Fails on the zero matrix and when the relative
/// residual exceeds `tol`.
pub fn rank1_decompose(m: &Matrix, tol: f64) -> Result<Rank1Factorization, MatrixError> {
    let n = m.require_square()?;
    let scale = m.max_abs();
    if scale == 0.0 {
        return Err(MatrixError::ZeroMatrix);
    }
    let col_norm = |j: usize| norm(&(0..n).map(|i| m[(i, j)]).collect::<Vec<_>>());
    let best_col = (0..n)
        .map(|j| (j, col_norm(j)))
        .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a })
        .0;
    let best_row = (0..n)
        .map(|i| (i, norm(m.row(i))))
        .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a })
        .0;
    let mut left = m.column(best_col);
    left = left.scaled(1.0 / left.norm());
    let mut right = Vector(m.row(best_row).to_vec());
    right = right.scaled(1.0 / right.norm());
    let mut c = dot(&left, &m.mul_vec(&right)?);
    c *= left.sign_normalize();
    c *= right.sign_normalize();

    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            residual = residual.max((m[(i, j)] - c * left[i] * right[j]).abs());
        }
    }
    if residual > tol * scale {
        return Err(MatrixError::RankExceedsOne(residual / scale));
    }
    Ok(Rank1Factorization {
        c,
        left,
        right,
        residual,
    })
}

/// Product of the nonzero eigenvalues of a nullity-1 matrix, computed as
/// `det(m + v wᵗ) / <v, w>` where `m v = 0` and `wᵗ m = 0`.
pub fn pseudo_determinant(m: &Matrix, v: &[f64], w: &[f64]) -> Result<f64, MatrixError> {
    let n = m.require_square()?;
    for len in [v.len(), w.len()] {
        if len != n {
            return Err(MatrixError::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let ip = dot(v, w);
    if ip.abs() <= 1e-12 * norm(v) * norm(w) {
        return Err(MatrixError::OrthogonalNullVectors);
    }
    let shifted = m.add(&outer_product(v, w)?)?;
    Ok(det_unchecked(&shifted, n) / ip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn equilateral_gram() -> Matrix {
        Matrix::from_rows(&[[1.0, -0.5, -0.5], [-0.5, 1.0, -0.5], [-0.5, -0.5, 1.0]]).unwrap()
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&Matrix::identity(3)).unwrap(), 1.0);
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), -2.0);
        let rep = Matrix::from_rows(&[
            [1.0, 2.0, 3.0, 4.0],
            [0.5, -1.0, 2.0, 0.0],
            [1.0, 2.0, 3.0, 4.0],
            [7.0, 1.0, 0.0, 2.0],
        ])
        .unwrap();
        assert_eq!(determinant(&rep).unwrap(), 0.0);
        assert!(matches!(
            determinant(&Matrix::zeros(2, 3)),
            Err(MatrixError::NotSquare { .. })
        ));
    }

    #[test]
    fn lu_agrees_with_closed_form_on_4x4() {
        // block diagonal: det = (1*4 - 2*3) * (2*2 - 1*1) = -2 * 3
        let m = Matrix::from_rows(&[
            [1.0, 2.0, 0.0, 0.0],
            [3.0, 4.0, 0.0, 0.0],
            [0.0, 0.0, 2.0, 1.0],
            [0.0, 0.0, 1.0, 2.0],
        ])
        .unwrap();
        assert_relative_eq!(determinant(&m).unwrap(), -6.0, epsilon = 1e-14);
    }

    #[test]
    fn cofactor_of_2x2() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let c = cofactor_matrix(&m).unwrap();
        assert_eq!(c.to_rows(), vec![vec![4.0, -3.0], vec![-2.0, 1.0]]);
    }

    #[test]
    fn cofactor_of_equilateral_gram_is_three_quarters() {
        let c = cofactor_matrix(&equilateral_gram()).unwrap();
        let expected = Matrix::new(3, 3, vec![0.75; 9]).unwrap();
        assert!(c.max_abs_diff(&expected) <= 1e-15);
    }

    #[test]
    fn cofactor_vanishes_for_nullity_two() {
        let c = cofactor_matrix(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(c.max_abs(), 0.0);
        let c = cofactor_matrix(&Matrix::diagonal(&[0.0, 0.0, 5.0])).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn cofactor_of_1x1_is_one() {
        let m = Matrix::from_rows(&[[7.0]]).unwrap();
        assert_eq!(cofactor_matrix(&m).unwrap().to_rows(), vec![vec![1.0]]);
    }

    #[test]
    fn outer_product_examples() {
        let m = outer_product(&Vector::basis(3, 0), &Vector::basis(3, 1)).unwrap();
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m.max_abs(), 1.0);
        assert_eq!(m.as_slice().iter().filter(|x| **x != 0.0).count(), 1);

        let m = outer_product(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(m.mul_vec(&[1.0, 1.0]).unwrap().as_slice(), &[7.0, 14.0]);

        let u = 1.0 / 3f64.sqrt();
        let p = outer_product(&[u, u, u], &[u, u, u]).unwrap();
        let p2 = p.matmul(&p).unwrap();
        assert!(p2.max_abs_diff(&p) <= 1e-14);

        assert!(matches!(
            outer_product(&[1.0], &[1.0, 2.0]),
            Err(MatrixError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn null_vector_examples() {
        let v = null_vector(&Matrix::diagonal(&[0.0, 1.0, 1.0]), DEFAULT_NULL_TOL).unwrap();
        assert_relative_eq!(v.as_slice(), [1.0, 0.0, 0.0].as_slice(), epsilon = 1e-15);

        let v = null_vector(&equilateral_gram(), DEFAULT_NULL_TOL).unwrap();
        let u = 1.0 / 3f64.sqrt();
        assert_relative_eq!(v.as_slice(), [u, u, u].as_slice(), epsilon = 1e-14);

        assert_eq!(
            null_vector(&Matrix::identity(3), DEFAULT_NULL_TOL),
            Err(MatrixError::FullRank)
        );
        assert_eq!(
            null_vector(&Matrix::diagonal(&[0.0, 0.0, 1.0]), DEFAULT_NULL_TOL),
            Err(MatrixError::ExcessNullity(2))
        );
    }

    #[test]
    fn null_vector_of_asymmetric_input_uses_svd() {
        let m = Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0]]).unwrap();
        let v = null_vector(&m, DEFAULT_NULL_TOL).unwrap();
        let r = m.mul_vec(&v).unwrap();
        assert!(r.max_abs() <= 1e-15);
        assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rank1_examples() {
        let f = rank1_decompose(&Matrix::diagonal(&[1.0, 0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(f.c, 1.0);
        assert_eq!(f.left.as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(f.right, f.left);

        let cof = cofactor_matrix(&equilateral_gram()).unwrap();
        let f = rank1_decompose(&cof, 1e-12).unwrap();
        assert_relative_eq!(f.c, 9.0 / 4.0, epsilon = 1e-14);
        let u = 1.0 / 3f64.sqrt();
        assert_relative_eq!(f.left.as_slice(), [u, u, u].as_slice(), epsilon = 1e-15);
        assert_eq!(f.left, f.right);

        assert_eq!(
            rank1_decompose(&Matrix::zeros(3, 3), 1e-12),
            Err(MatrixError::ZeroMatrix)
        );
        assert!(matches!(
            rank1_decompose(&Matrix::identity(3), 1e-9),
            Err(MatrixError::RankExceedsOne(_))
        ));
    }

    #[test]
    fn rank1_carries_negative_sign_in_c() {
        let m = outer_product(&[1.0, 2.0], &[3.0, 1.0]).unwrap().scaled(-2.0);
        let f = rank1_decompose(&m, 1e-12).unwrap();
        assert!(f.c < 0.0);
        assert!(f.left.iter().sum::<f64>() > 0.0);
        assert!(f.right.iter().sum::<f64>() > 0.0);
        assert!(f.residual <= 1e-14);
    }

    #[test]
    fn pseudo_determinant_examples() {
        let e1 = [1.0, 0.0, 0.0];
        let pd = pseudo_determinant(&Matrix::diagonal(&[0.0, 1.0, 1.0]), &e1, &e1).unwrap();
        assert_eq!(pd, 1.0);

        let ones = [1.0, 1.0, 1.0];
        let pd = pseudo_determinant(&equilateral_gram(), &ones, &ones).unwrap();
        assert_relative_eq!(pd, 9.0 / 4.0, epsilon = 1e-14);

        let err = pseudo_determinant(&Matrix::diagonal(&[0.0, 1.0, 1.0]), &e1, &[0.0, 1.0, 0.0]);
        assert_eq!(err, Err(MatrixError::OrthogonalNullVectors));
    }

    #[test]
    fn pseudo_determinant_on_asymmetric_nullity_one() {
        // eigenvalues {1, 0}; right null (1,-1), left null (0,1)
        let m = Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0]]).unwrap();
        let pd = pseudo_determinant(&m, &[1.0, -1.0], &[0.0, 1.0]).unwrap();
        assert_relative_eq!(pd, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn vector_rejects_non_finite() {
        assert_eq!(Vector::new(vec![1.0, f64::NAN]), Err(MatrixError::NonFinite(1)));
        assert_eq!(Vector::new(vec![]), Err(MatrixError::Empty));
        assert!(matches!(
            Matrix::new(1, 2, vec![1.0, f64::INFINITY]),
            Err(MatrixError::NonFinite(1))
        ));
    }
}
