use super::{dot, norm, Matrix, MatrixError, Vector};

const JACOBI_MAX_SWEEPS: usize = 100;

/// LU with partial pivoting, in place. Returns the row-swap parity, or `None`
/// when a pivot is exactly zero.
fn lu_in_place(a: &mut Matrix) -> Option<(f64, Vec<usize>)> {
    let n = a.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
            .unwrap();
        if a[(p, k)] == 0.0 {
            return None;
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / pivot;
            a[(i, k)] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
    }
    Some((sign, perm))
}

pub(super) fn lu_determinant(m: &Matrix) -> f64 {
    let mut a = m.clone();
    match lu_in_place(&mut a) {
        None => 0.0,
        Some((sign, _)) => (0..a.rows()).fold(sign, |d, i| d * a[(i, i)]),
    }
}

/// Solves `m x = b` for square `m`.
pub fn lu_solve(m: &Matrix, b: &[f64]) -> Result<Vector, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if b.len() != n {
        return Err(MatrixError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut a = m.clone();
    let (_, perm) = lu_in_place(&mut a).ok_or(MatrixError::Singular)?;
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            x[i] -= a[(i, j)] * x[j];
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= a[(i, j)] * x[j];
        }
        x[i] /= a[(i, i)];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(MatrixError::Singular);
    }
    Ok(Vector::from_vec(x))
}

/// Eigenvalues sorted in descending order, with matching unit eigenvectors
/// stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix.
///
/// Only the upper triangle is read.
pub fn symmetric_eigen(m: &Matrix) -> Result<SymmetricEigen, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
        }
    }
    let mut v = Matrix::identity(n);

    let frob = m.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let tiny = f64::EPSILON * 1e-3 * frob;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= tiny {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// One-sided (Hestenes) Jacobi: returns the column norms after
/// orthogonalization and the accumulated right rotation.
fn one_sided_jacobi(m: &Matrix) -> (Vec<f64>, Matrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j).into_vec()).collect();
    let mut v = Matrix::identity(cols);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let up = u[p][k];
                    let uq = u[q][k];
                    u[p][k] = c * up - s * uq;
                    u[q][k] = s * up + c * uq;
                }
                for k in 0..cols {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = c * vp - s * vq;
                    v[(k, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (u.iter().map(|col| norm(col)).collect(), v)
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let (mut s, _) = if m.rows() < m.cols() {
        one_sided_jacobi(&m.transpose())
    } else {
        one_sided_jacobi(m)
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Singular values (unsorted) with right singular vectors as columns.
pub(super) fn svd_right(m: &Matrix) -> (Vec<f64>, Matrix) {
    one_sided_jacobi(m)
}

/// Unit vector orthogonal to the column span of an `n×(n-1)` matrix, taken
/// as the last column of a Householder QR factor, together with `|det R|`
/// (equal to `sqrt(det(eᵗe))`).
pub fn householder_complement(e: &Matrix) -> Result<(Vector, f64), MatrixError> {
    let (n, k) = (e.rows(), e.cols());
    if k + 1 != n {
        return Err(MatrixError::DimensionMismatch {
            expected: n - 1,
            found: k,
        });
    }
    let mut a = e.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut volume = 1.0;
    for j in 0..k {
        let x: Vec<f64> = (j..n).map(|i| a[(i, j)]).collect();
        let alpha = norm(&x);
        if alpha == 0.0 {
            return Err(MatrixError::Singular);
        }
        volume *= alpha;
        let mut h = x;
        h[0] += if h[0] >= 0.0 { alpha } else { -alpha };
        let hh = dot(&h, &h);
        for c in j..k {
            let s: f64 = (j..n).map(|i| h[i - j] * a[(i, c)]).sum::<f64>() * 2.0 / hh;
            for i in j..n {
                a[(i, c)] -= s * h[i - j];
            }
        }
        reflectors.push(h);
    }
    let mut q = vec![0.0; n];
    q[n - 1] = 1.0;
    for (j, h) in reflectors.iter().enumerate().rev() {
        let hh = dot(h, h);
        let s: f64 = (j..n).map(|i| h[i - j] * q[i]).sum::<f64>() * 2.0 / hh;
        for i in j..n {
            q[i] -= s * h[i - j];
        }
    }
    let len = norm(&q);
    Ok((Vector::from_vec(q.into_iter().map(|x| x / len).collect()), volume))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let m = Matrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]]).unwrap();
        let eig = symmetric_eigen(&m).unwrap();
        assert_relative_eq!(eig.values.as_slice(), [5.0, 3.0, 1.0].as_slice(), epsilon = 1e-14);
        for (j, lambda) in eig.values.iter().enumerate() {
            let v = eig.vectors.column(j);
            let mv = m.mul_vec(&v).unwrap();
            for i in 0..3 {
                assert!((mv[i] - lambda * v[i]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn singular_values_of_rank_deficient() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]).unwrap();
        let s = singular_values(&m);
        assert_relative_eq!(s[0], 5f64.sqrt() * 5f64.sqrt(), epsilon = 1e-14);
        assert!(s[1] < 1e-15);
    }

    #[test]
    fn lu_solve_small_system() {
        let m = Matrix::from_rows(&[[0.0, 2.0], [1.0, 1.0]]).unwrap();
        let x = lu_solve(&m, &[4.0, 3.0]).unwrap();
        assert_relative_eq!(x.as_slice(), [1.0, 2.0].as_slice(), epsilon = 1e-15);
        let s = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(lu_solve(&s, &[1.0, 1.0]), Err(MatrixError::Singular));
    }

    #[test]
    fn complement_is_orthogonal() {
        let e = Matrix::from_rows(&[[1.0, 0.3], [2.0, -1.0], [0.5, 4.0]]).unwrap();
        let (q, vol) = householder_complement(&e).unwrap();
        let gram = e.transpose().matmul(&e).unwrap();
        assert_relative_eq!(vol, crate::matrix::determinant(&gram).unwrap().sqrt(), epsilon = 1e-13);
        assert_relative_eq!(q.norm(), 1.0, epsilon = 1e-15);
        for j in 0..2 {
            assert!(q.dot(&e.column(j)).abs() < 1e-14);
        }
    }
}
