//! C ABI over `simplex-sines`.
//!
//! Simplices are opaque `SsSimplex` handles created by `ss_simplex_new` or
//! `ss_simplex_from_gram` and released with `ss_simplex_free`. Every
//! fallible call returns an `SsStatus`; on failure a message for the
//! calling thread is available from `ss_last_error`. Output buffers are
//! caller-owned and sized in elements, not bytes. Indices are 0-based.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use simplex_sines::closedform::{half_angle_ratios, DihedralSet};
use simplex_sines::recover::{simplex_from_gram, RecoverError};
use simplex_sines::sines::{areas_from_gram, sine_ratio, verify_simplex, SinesError};
use simplex_sines::{build_simplex, face_geometry, gram_matrix, FaceData, GeometryError, Matrix, Simplex};

/// Result codes. `SS_OK` is zero; everything else is a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    SsOk = 0,
    SsNullPointer = 1,
    SsInvalidArgument = 2,
    SsBufferTooSmall = 3,
    SsDegenerate = 4,
    SsNotRealizable = 5,
    SsNumerical = 6,
    SsPanic = 7,
}

/// A simplex together with its face data and normal Gram matrix.
pub struct SsSimplex {
    simplex: Simplex,
    faces: FaceData,
    gram: Matrix,
}

/// Residuals and verdicts from `ss_simplex_verify`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SsVerifyReport {
    pub tolerance: f64,
    pub minkowski_residual: f64,
    pub gram_null_residual: f64,
    pub rank1_residual: f64,
    pub max_ratio_error: f64,
    pub c_value: f64,
    pub pseudo_determinant: f64,
    pub c_mismatch: f64,
    pub quadruples_checked: usize,
    pub quadruples_skipped: usize,
    pub pass: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SsStatus, msg: impl Into<String>) -> SsStatus {
    set_error(msg);
    status
}

fn geometry_status(e: &GeometryError) -> SsStatus {
    match e {
        GeometryError::Degenerate { .. } => SsStatus::SsDegenerate,
        GeometryError::Internal(_) | GeometryError::Matrix(_) => SsStatus::SsNumerical,
        _ => SsStatus::SsInvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> SsStatus) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SsStatus::SsPanic, "internal panic"),
    }
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Option<&'a [f64]> {
    if p.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn write_out(out: *mut f64, cap: usize, data: &[f64]) -> SsStatus {
    if out.is_null() {
        return fail(SsStatus::SsNullPointer, "output buffer is null");
    }
    if cap < data.len() {
        return fail(
            SsStatus::SsBufferTooSmall,
            format!("output buffer holds {cap} values, need {}", data.len()),
        );
    }
    ptr::copy_nonoverlapping(data.as_ptr(), out, data.len());
    SsStatus::SsOk
}

unsafe fn gram_arg(gram: *const f64, size: usize) -> Result<Matrix, SsStatus> {
    let Some(data) = slice(gram, size * size) else {
        return Err(fail(SsStatus::SsNullPointer, "gram is null"));
    };
    Matrix::new(size, size, data.to_vec()).map_err(|e| fail(SsStatus::SsInvalidArgument, e.to_string()))
}

fn into_handle(simplex: Simplex) -> Result<Box<SsSimplex>, SsStatus> {
    let faces = face_geometry(&simplex).map_err(|e| fail(geometry_status(&e), e.to_string()))?;
    let gram = gram_matrix(&simplex).map_err(|e| fail(geometry_status(&e), e.to_string()))?;
    Ok(Box::new(SsSimplex { simplex, faces, gram }))
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ss_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a simplex from `(dim + 1) * dim` row-major vertex coordinates.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_new(
    dim: usize,
    coords: *const f64,
    len: usize,
    out: *mut *mut SsSimplex,
) -> SsStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SsStatus::SsNullPointer, "out is null");
        }
        *out = ptr::null_mut();
        if dim == 0 {
            return fail(SsStatus::SsInvalidArgument, "dimension must be >= 1");
        }
        if len != (dim + 1) * dim {
            return fail(
                SsStatus::SsInvalidArgument,
                format!("expected {} coordinates for dimension {dim}, got {len}", (dim + 1) * dim),
            );
        }
        let Some(data) = slice(coords, len) else {
            return fail(SsStatus::SsNullPointer, "coords is null");
        };
        let vertices = data.chunks(dim).map(<[f64]>::to_vec).collect();
        let simplex = match build_simplex(vertices) {
            Ok(s) => s,
            Err(e) => return fail(geometry_status(&e), e.to_string()),
        };
        match into_handle(simplex) {
            Ok(h) => {
                *out = Box::into_raw(h);
                SsStatus::SsOk
            }
            Err(s) => s,
        }
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_free(s: *mut SsSimplex) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Ambient dimension, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_dimension(s: *const SsSimplex) -> usize {
    s.as_ref().map_or(0, |h| h.simplex.dim())
}

/// Face areas, `dim + 1` values; face `i` is opposite vertex `i`.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_areas(s: *const SsSimplex, out: *mut f64, cap: usize) -> SsStatus {
    guarded(|| match s.as_ref() {
        Some(h) => write_out(out, cap, &h.faces.areas),
        None => fail(SsStatus::SsNullPointer, "simplex is null"),
    })
}

/// Outward unit normals, `(dim + 1) * dim` values, one row per face.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_normals(s: *const SsSimplex, out: *mut f64, cap: usize) -> SsStatus {
    guarded(|| match s.as_ref() {
        Some(h) => {
            let flat: Vec<f64> = h.faces.normals.iter().flat_map(|n| n.iter().copied()).collect();
            write_out(out, cap, &flat)
        }
        None => fail(SsStatus::SsNullPointer, "simplex is null"),
    })
}

/// Normal Gram matrix, `(dim + 1)^2` values, row-major.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_gram(s: *const SsSimplex, out: *mut f64, cap: usize) -> SsStatus {
    guarded(|| match s.as_ref() {
        Some(h) => write_out(out, cap, h.gram.as_slice()),
        None => fail(SsStatus::SsNullPointer, "simplex is null"),
    })
}

/// Vertex coordinates, `(dim + 1) * dim` values, row-major.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_vertices(s: *const SsSimplex, out: *mut f64, cap: usize) -> SsStatus {
    guarded(|| match s.as_ref() {
        Some(h) => {
            let flat: Vec<f64> = h.simplex.vertices().iter().flatten().copied().collect();
            write_out(out, cap, &flat)
        }
        None => fail(SsStatus::SsNullPointer, "simplex is null"),
    })
}

/// Runs the full identity chain. `SS_OK` means the report was filled, not
/// that it passed; read `pass`.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_verify(s: *const SsSimplex, tol: f64, out: *mut SsVerifyReport) -> SsStatus {
    guarded(|| {
        let Some(h) = s.as_ref() else {
            return fail(SsStatus::SsNullPointer, "simplex is null");
        };
        if out.is_null() {
            return fail(SsStatus::SsNullPointer, "out is null");
        }
        if !(tol.is_finite() && tol > 0.0) {
            return fail(SsStatus::SsInvalidArgument, format!("tolerance {tol} must be positive"));
        }
        match verify_simplex(&h.simplex, tol) {
            Ok(r) => {
                *out = SsVerifyReport {
                    tolerance: r.tolerance,
                    minkowski_residual: r.minkowski_residual,
                    gram_null_residual: r.gram_null_residual,
                    rank1_residual: r.rank1_residual,
                    max_ratio_error: r.max_ratio_error,
                    c_value: r.c_value,
                    pseudo_determinant: r.pseudo_determinant,
                    c_mismatch: r.c_mismatch,
                    quadruples_checked: r.quadruples_checked,
                    quadruples_skipped: r.quadruples_skipped,
                    pass: r.pass,
                };
                SsStatus::SsOk
            }
            Err(e) => fail(SsStatus::SsNumerical, e.to_string()),
        }
    })
}

fn sines_status(e: &SinesError) -> SsStatus {
    match e {
        SinesError::IndexOutOfRange { .. } => SsStatus::SsInvalidArgument,
        SinesError::NotSimplexGram(_) => SsStatus::SsNotRealizable,
        _ => SsStatus::SsNumerical,
    }
}

/// `A_i A_j / (A_k A_l)` from a `size x size` row-major normal Gram matrix.
#[no_mangle]
pub unsafe extern "C" fn ss_sine_ratio(
    gram: *const f64,
    size: usize,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    out: *mut f64,
) -> SsStatus {
    guarded(|| {
        let g = match gram_arg(gram, size) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(SsStatus::SsNullPointer, "out is null");
        }
        match sine_ratio(&g, i, j, k, l) {
            Ok(r) => {
                *out = r;
                SsStatus::SsOk
            }
            Err(e) => fail(sines_status(&e), e.to_string()),
        }
    })
}

/// Unit area vector (`size` values) from the null space of a Gram matrix.
#[no_mangle]
pub unsafe extern "C" fn ss_areas_from_gram(gram: *const f64, size: usize, out: *mut f64, cap: usize) -> SsStatus {
    guarded(|| {
        let g = match gram_arg(gram, size) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match areas_from_gram(&g) {
            Ok(a) => write_out(out, cap, &a),
            Err(e) => fail(sines_status(&e), e.to_string()),
        }
    })
}

/// Rebuilds a simplex (longest edge 1) from a normal Gram matrix.
#[no_mangle]
pub unsafe extern "C" fn ss_simplex_from_gram(
    gram: *const f64,
    size: usize,
    tol: f64,
    out: *mut *mut SsSimplex,
) -> SsStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SsStatus::SsNullPointer, "out is null");
        }
        *out = ptr::null_mut();
        if !(tol.is_finite() && tol > 0.0) {
            return fail(SsStatus::SsInvalidArgument, format!("tolerance {tol} must be positive"));
        }
        let g = match gram_arg(gram, size) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let simplex = match simplex_from_gram(&g, tol) {
            Ok(s) => s,
            Err(e @ RecoverError::NotRealizable(_)) => return fail(SsStatus::SsNotRealizable, e.to_string()),
            Err(e @ RecoverError::Shape(..)) => return fail(SsStatus::SsInvalidArgument, e.to_string()),
            Err(e) => return fail(SsStatus::SsNumerical, e.to_string()),
        };
        match into_handle(simplex) {
            Ok(h) => {
                *out = Box::into_raw(h);
                SsStatus::SsOk
            }
            Err(s) => s,
        }
    })
}

/// The two half-angle expressions for `A_4 / A_3` from a 4x4 Gram matrix:
/// `link_form` (link excesses) and `polar_form` (polar excesses).
#[no_mangle]
pub unsafe extern "C" fn ss_half_angle_ratios(
    gram: *const f64,
    link_form: *mut f64,
    polar_form: *mut f64,
) -> SsStatus {
    guarded(|| {
        let g = match gram_arg(gram, 4) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if link_form.is_null() || polar_form.is_null() {
            return fail(SsStatus::SsNullPointer, "output is null");
        }
        match DihedralSet::from_gram(&g).and_then(|d| half_angle_ratios(&d)) {
            Ok(r) => {
                *link_form = r.link_form;
                *polar_form = r.polar_form;
                SsStatus::SsOk
            }
            Err(e) => fail(SsStatus::SsNotRealizable, e.to_string()),
        }
    })
}
