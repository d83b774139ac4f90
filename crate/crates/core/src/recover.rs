//! Gram matrix to simplex.
//!
//! A symmetric unit-diagonal `(n+1)×(n+1)` matrix is the normal Gram matrix
//! of a nondegenerate simplex in `R^n` when it has `n` positive eigenvalues,
//! one zero eigenvalue, and a strictly positive null vector. The null vector
//! is then proportional to the face areas, and the simplex itself is
//! determined up to similarity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{lu_solve, symmetric_eigen, Matrix, MatrixError, Vector};
use crate::simplex::{build_simplex, gram_matrix, GeometryError, Simplex};

/// Absolute slack for the symmetry, unit-diagonal and entry-range checks.
pub const SHAPE_TOL: f64 = 1e-12;

/// Round-trip Gram mismatch above which a validated matrix is reported as
/// an internal reconstruction failure.
const ROUND_TRIP_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecoverError {
    #[error("Gram matrix must be square with size >= 3, got {0}x{1}")]
    Shape(usize, usize),
    #[error("not realizable: {}", .0.summary())]
    NotRealizable(Box<RealizabilityReport>),
    #[error("internal reconstruction error: {0}")]
    Internal(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Counts of positive, numerically zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenSignature {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

impl std::fmt::Display for EigenSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.zero, self.negative)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizabilityReport {
    pub size: usize,
    pub symmetric_ok: bool,
    pub unit_diagonal_ok: bool,
    pub entry_range_ok: bool,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub eigen_signature: EigenSignature,
    pub null_vector_sign_ok: bool,
    pub realizable: bool,
    pub recovered_areas: Option<Vector>,
}

impl RealizabilityReport {
    pub fn summary(&self) -> String {
        if self.realizable {
            return "realizable".to_string();
        }
        let mut reasons = Vec::new();
        if !self.symmetric_ok {
            reasons.push("not symmetric".to_string());
        }
        if !self.unit_diagonal_ok {
            reasons.push("diagonal is not all ones".to_string());
        }
        if !self.entry_range_ok {
            reasons.push("entries outside [-1, 1]".to_string());
        }
        let expected = EigenSignature {
            positive: self.size - 1,
            zero: 1,
            negative: 0,
        };
        if self.eigen_signature != expected {
            reasons.push(format!("eigen signature {}", self.eigen_signature));
        } else if !self.null_vector_sign_ok {
            reasons.push("null vector has mixed signs".to_string());
        }
        reasons.join("; ")
    }
}

/// Runs every realizability check. Failures are report fields; only a
/// malformed shape is an error.
pub fn validate_gram(m: &Matrix, tol: f64) -> Result<RealizabilityReport, RecoverError> {
    if !m.is_square() || m.rows() < 3 {
        return Err(RecoverError::Shape(m.rows(), m.cols()));
    }
    let size = m.rows();
    let symmetric_ok = m.is_symmetric(SHAPE_TOL);
    let unit_diagonal_ok = (0..size).all(|i| (m[(i, i)] - 1.0).abs() <= SHAPE_TOL);
    let entry_range_ok = m.as_slice().iter().all(|x| x.abs() <= 1.0 + SHAPE_TOL);

    let sym = m.add(&m.transpose())?.scaled(0.5);
    let eig = symmetric_eigen(&sym)?;
    let scale = eig.values.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let thr = tol * scale;
    let mut signature = EigenSignature {
        positive: 0,
        zero: 0,
        negative: 0,
    };
    for &l in &eig.values {
        if l > thr {
            signature.positive += 1;
        } else if l < -thr {
            signature.negative += 1;
        } else {
            signature.zero += 1;
        }
    }

    let mut null_vector_sign_ok = false;
    let mut areas = None;
    if signature.zero == 1 {
        let idx = (0..size)
            .find(|&i| eig.values[i].abs() <= thr)
            .expect("one zero eigenvalue");
        let mut v = eig.vectors.column(idx);
        v = v.scaled(1.0 / v.norm());
        v.sign_normalize();
        null_vector_sign_ok = v.iter().all(|x| *x > 0.0);
        areas = Some(v);
    }

    let realizable = symmetric_ok
        && unit_diagonal_ok
        && entry_range_ok
        && signature
            == EigenSignature {
                positive: size - 1,
                zero: 1,
                negative: 0,
            }
        && null_vector_sign_ok;

    Ok(RealizabilityReport {
        size,
        symmetric_ok,
        unit_diagonal_ok,
        entry_range_ok,
        eigenvalues: eig.values,
        eigen_signature: signature,
        null_vector_sign_ok,
        realizable,
        recovered_areas: if realizable { areas } else { None },
    })
}

/// Reconstructs a simplex whose normal Gram matrix is `m`, scaled so its
/// longest edge has length 1.
///
/// The normals come from the spectral square root of `m` on its positive
/// eigenspace; the simplex is `{x : <f_i, x> <= 1}` and vertex `j` solves
/// `<f_i, x> = 1` for all `i != j`.
pub fn simplex_from_gram(m: &Matrix, tol: f64) -> Result<Simplex, RecoverError> {
    let report = validate_gram(m, tol)?;
    if !report.realizable {
        return Err(RecoverError::NotRealizable(Box::new(report)));
    }
    let size = m.rows();
    let n = size - 1;
    let sym = m.add(&m.transpose())?.scaled(0.5);
    let eig = symmetric_eigen(&sym)?;

    // normals as columns of F (n × (n+1)), F = sqrt(Λ₊) Q₊ᵗ
    let mut f = Matrix::zeros(n, size);
    for k in 0..n {
        let s = eig.values[k].sqrt();
        for i in 0..size {
            f[(k, i)] = s * eig.vectors[(i, k)];
        }
    }

    let mut vertices = Vec::with_capacity(size);
    for j in 0..size {
        let mut sys = Matrix::zeros(n, n);
        for (row, i) in (0..size).filter(|&i| i != j).enumerate() {
            for c in 0..n {
                sys[(row, c)] = f[(c, i)];
            }
        }
        let x = lu_solve(&sys, &vec![1.0; n])
            .map_err(|e| RecoverError::Internal(format!("vertex {}: {e}", j + 1)))?;
        vertices.push(x.into_vec());
    }

    let raw = build_simplex(vertices)
        .map_err(|e| RecoverError::Internal(format!("reconstructed simplex rejected: {e}")))?;
    let diam = raw.diameter();
    let scaled: Vec<Vec<f64>> = raw
        .vertices()
        .iter()
        .map(|v| v.iter().map(|x| x / diam).collect())
        .collect();
    let s = build_simplex(scaled)?;

    let mismatch = gram_matrix(&s)?.max_abs_diff(m);
    if mismatch > ROUND_TRIP_LIMIT {
        return Err(RecoverError::Internal(format!(
            "round-trip Gram mismatch {mismatch:.3e}"
        )));
    }
    Ok(s)
}
