//! The generalized law of sines.
//!
//! For a nondegenerate simplex with face areas `a` and normal Gram matrix
//! `G`, `G a = 0`, `G` has nullity one, and its cofactor matrix factors as
//! `Ĝ = c a aᵗ` with `c > 0`. Hence `A_i A_j / (A_k A_l) = Ĝ_ij / Ĝ_kl` for
//! every index quadruple. Face indices are 0-based here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{
    self, cofactor_matrix, null_vector, pseudo_determinant, rank1_decompose, Matrix, MatrixError,
    Rank1Factorization, Vector, DEFAULT_NULL_TOL,
};
use crate::simplex::{closure_residual, face_geometry, gram_from_faces, GeometryError, Simplex};

/// Denominator cofactors at or below this fraction of `max |Ĝ|` are refused.
pub const RATIO_GUARD: f64 = 1e-12;

/// Relative residual above which a cofactor matrix is not treated as rank 1.
pub const RANK1_REJECT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SinesError {
    #[error("face index {index} out of range for {size} faces")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("denominator cofactor ({k},{l}) = {value:.3e} is numerically zero")]
    SmallDenominator { k: usize, l: usize, value: f64 },
    #[error("not a simplex Gram matrix: {0}")]
    NotSimplexGram(String),
    #[error("cofactor scale c = {0:.6e} is not positive")]
    NonPositiveScale(f64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn check_index(index: usize, size: usize) -> Result<(), SinesError> {
    if index >= size {
        Err(SinesError::IndexOutOfRange { index, size })
    } else {
        Ok(())
    }
}

/// `Ĝ_ij / Ĝ_kl`, which equals `A_i A_j / (A_k A_l)` for a realizable Gram
/// matrix.
pub fn sine_ratio(g: &Matrix, i: usize, j: usize, k: usize, l: usize) -> Result<f64, SinesError> {
    let cof = cofactor_matrix(g)?;
    for idx in [i, j, k, l] {
        check_index(idx, g.rows())?;
    }
    let den = cof[(k, l)];
    if den.abs() <= RATIO_GUARD * cof.max_abs() {
        return Err(SinesError::SmallDenominator { k, l, value: den });
    }
    Ok(cof[(i, j)] / den)
}

/// Unit, strictly positive vector proportional to the face areas, read off
/// the null space of `g`.
pub fn areas_from_gram(g: &Matrix) -> Result<Vector, SinesError> {
    if !g.is_square() {
        return Err(MatrixError::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        }
        .into());
    }
    let a = null_vector(g, DEFAULT_NULL_TOL)?;
    if let Some(i) = a.iter().position(|x| *x <= 0.0) {
        return Err(SinesError::NotSimplexGram(format!(
            "null vector has a non-positive entry at face {}",
            i + 1
        )));
    }
    Ok(a)
}

/// Rank-1 structure of the cofactor matrix of a simplex Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramRank1 {
    /// `Ĝ ≈ c a aᵗ` with `a` the unit area vector.
    pub factorization: Rank1Factorization,
    /// Product of the nonzero eigenvalues of `G`, via the shifted determinant.
    pub pseudo_determinant: f64,
    /// `|c - pseudo_determinant| / pseudo_determinant`
    pub c_mismatch: f64,
}

pub fn gram_rank1_report(g: &Matrix) -> Result<GramRank1, SinesError> {
    let a = areas_from_gram(g)?;
    let cof = cofactor_matrix(g)?;
    // rejects cofactor matrices that are zero or of rank >= 2
    rank1_decompose(&cof, RANK1_REJECT_TOL)?;
    let (c, residual) = fit_scale(&cof, &a);
    if !(c > 0.0) {
        return Err(SinesError::NonPositiveScale(c));
    }
    let pd = pseudo_determinant(g, &a, &a)?;
    Ok(GramRank1 {
        factorization: Rank1Factorization {
            c,
            left: a.clone(),
            right: a,
            residual,
        },
        pseudo_determinant: pd,
        c_mismatch: (c - pd).abs() / pd.abs(),
    })
}

/// `c = aᵗ Ĝ a` for unit `a`, and `max |Ĝ - c a aᵗ|`.
fn fit_scale(cof: &Matrix, a: &[f64]) -> (f64, f64) {
    let c = matrix::dot(a, &cof.mul_vec(a).expect("square"));
    let n = a.len();
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            residual = residual.max((cof[(i, j)] - c * a[i] * a[j]).abs());
        }
    }
    (c, residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationChecks {
    pub minkowski: bool,
    pub null_space: bool,
    pub rank1: bool,
    pub cofactors_positive: bool,
    pub ratios: bool,
    pub c_positive: bool,
    pub c_consistency: bool,
}

impl VerificationChecks {
    pub fn all(&self) -> bool {
        self.minkowski
            && self.null_space
            && self.rank1
            && self.cofactors_positive
            && self.ratios
            && self.c_positive
            && self.c_consistency
    }
}

/// Residuals for every identity in the chain, for one simplex. All values
/// are dimensionless, so the report does not depend on the simplex's scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tolerance: f64,
    /// `||sum A_i f_i|| / sum A_i`
    pub minkowski_residual: f64,
    /// `||G a|| / ||a||` with directly measured areas
    pub gram_null_residual: f64,
    /// `max |Ĝ - c a aᵗ| / max |Ĝ|`
    pub rank1_residual: f64,
    /// Worst relative error of `Ĝ_ij/Ĝ_kl` against `A_i A_j/(A_k A_l)`.
    pub max_ratio_error: f64,
    pub c_value: f64,
    pub pseudo_determinant: f64,
    pub c_mismatch: f64,
    pub quadruples_checked: usize,
    pub quadruples_skipped: usize,
    pub checks: VerificationChecks,
    pub pass: bool,
}

/// Replays the full chain numerically: closure, null space, rank-1 cofactor
/// structure, and the sine ratios over every index quadruple whose
/// denominator cofactor exceeds `tol · max |Ĝ|`.
pub fn verify_simplex(s: &Simplex, tol: f64) -> Result<VerificationReport, SinesError> {
    let faces = face_geometry(s)?;
    let g = gram_from_faces(&faces);
    let areas = &faces.areas;
    let a_norm = matrix::norm(areas);
    let a_unit: Vec<f64> = areas.iter().map(|x| x / a_norm).collect();

    let minkowski_residual = closure_residual(&faces);
    let gram_null_residual = g.mul_vec(areas)?.norm() / a_norm;

    let cof = cofactor_matrix(&g)?;
    let cof_max = cof.max_abs();
    let (c, residual) = fit_scale(&cof, &a_unit);
    let rank1_residual = residual / cof_max;
    let pd = pseudo_determinant(&g, &a_unit, &a_unit)?;
    let c_mismatch = (c - pd).abs() / pd.abs();
    let cofactors_positive = cof.as_slice().iter().all(|x| *x > 0.0);

    let size = areas.len();
    let mut worst = 0.0f64;
    let (mut checked, mut skipped) = (0usize, 0usize);
    for k in 0..size {
        for l in 0..size {
            let den = cof[(k, l)];
            if den.abs() <= tol * cof_max {
                skipped += size * size;
                continue;
            }
            for i in 0..size {
                for j in 0..size {
                    let expected = areas[i] * areas[j] / (areas[k] * areas[l]);
                    let err = (cof[(i, j)] / den - expected).abs() / expected;
                    worst = worst.max(err);
                    checked += 1;
                }
            }
        }
    }

    let checks = VerificationChecks {
        minkowski: minkowski_residual <= tol,
        null_space: gram_null_residual <= tol,
        rank1: rank1_residual <= tol,
        cofactors_positive,
        ratios: worst <= tol,
        c_positive: c > 0.0,
        c_consistency: c_mismatch <= tol,
    };
    Ok(VerificationReport {
        tolerance: tol,
        minkowski_residual,
        gram_null_residual,
        rank1_residual,
        max_ratio_error: worst,
        c_value: c,
        pseudo_determinant: pd,
        c_mismatch,
        quadruples_checked: checked,
        quadruples_skipped: skipped,
        pass: checks.all(),
        checks,
    })
}
