//! Euclidean simplices: face areas, outward unit normals, normal Gram
//! matrices, and two independent area oracles (Cayley–Menger determinants
//! and projected shadows).
//!
//! Faces are indexed by the vertex they omit: face `i` is the facet opposite
//! vertex `i`. Indices are 0-based in the API and 1-based in reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{
    self, determinant, householder_complement, singular_values, Matrix, MatrixError, Vector,
};

/// Relative threshold on the extreme singular values of the edge matrix.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("a simplex in dimension {dim} needs {expected} vertices, got {found}")]
    VertexCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFinite { vertex: usize },
    #[error("degenerate simplex: singular value ratio {ratio:.3e} below {DEGENERACY_TOL:e}")]
    Degenerate { ratio: f64 },
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("shadow area is only defined for dimensions 2 and 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("projection direction must be a nonzero vector of length {0}")]
    BadDirection(usize),
    #[error("at least two points are required")]
    TooFewPoints,
    #[error("Cayley-Menger determinant has the wrong sign (squared volume {0:.3e})")]
    NegativeVolume(f64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `n+1` affinely independent points in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simplex {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

/// Per-face `(n-1)`-areas and outward unit normals; face `i` is opposite
/// vertex `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceData {
    pub areas: Vec<f64>,
    pub normals: Vec<Vector>,
}

impl FaceData {
    /// The `n×(n+1)` matrix whose columns are the normals.
    pub fn normal_matrix(&self) -> Matrix {
        Matrix::from_columns(&self.normals).expect("normals share one dimension")
    }
}

/// Validates vertices and rejects degenerate input.
pub fn build_simplex(vertices: Vec<Vec<f64>>) -> Result<Simplex, GeometryError> {
    let dim = vertices.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    if vertices.len() != dim + 1 {
        return Err(GeometryError::VertexCount {
            dim,
            expected: dim + 1,
            found: vertices.len(),
        });
    }
    for (i, v) in vertices.iter().enumerate() {
        if v.len() != dim {
            return Err(GeometryError::DimensionMismatch {
                vertex: i,
                expected: dim,
                found: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite { vertex: i });
        }
    }
    let s = Simplex { dim, vertices };
    let ratio = s.conditioning();
    if !(ratio >= DEGENERACY_TOL) {
        return Err(GeometryError::Degenerate { ratio });
    }
    Ok(s)
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    /// Ratio of smallest to largest singular value of the edge matrix from
    /// vertex 0.
    pub fn conditioning(&self) -> f64 {
        let n = self.dim;
        let mut e = Matrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                e[(i, j)] = self.vertices[j + 1][i] - self.vertices[0][i];
            }
        }
        let s = singular_values(&e);
        if s[0] == 0.0 {
            return 0.0;
        }
        s[n - 1] / s[0]
    }

    /// Vertices of face `i` (every vertex but `i`).
    pub fn face_vertices(&self, i: usize) -> Vec<&[f64]> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| v.as_slice())
            .collect()
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        let m = self.vertices.len();
        let mut out = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for j in i + 1..m {
                out.push(distance(&self.vertices[i], &self.vertices[j]));
            }
        }
        out
    }

    pub fn diameter(&self) -> f64 {
        self.edge_lengths().into_iter().fold(0.0, f64::max)
    }

    /// Applies `x -> s * R x + t` to every vertex. `r` is row-major `n×n`.
    pub fn transformed(&self, r: &Matrix, scale: f64, t: &[f64]) -> Result<Simplex, GeometryError> {
        let verts = self
            .vertices
            .iter()
            .map(|v| {
                let rv = r.mul_vec(v)?;
                Ok(rv.iter().zip(t).map(|(a, b)| scale * a + b).collect())
            })
            .collect::<Result<Vec<Vec<f64>>, MatrixError>>()?;
        build_simplex(verts)
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    matrix::norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Face areas via `sqrt(det(EᵗE)) / (n-1)!` (read off the `R` factor of a
/// Householder QR of the face edge matrix `E`) and normals via the orthogonal
/// complement of each face's edge span, oriented away from the omitted vertex.
pub fn face_geometry(s: &Simplex) -> Result<FaceData, GeometryError> {
    let n = s.dim;
    let mut areas = Vec::with_capacity(n + 1);
    let mut normals = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let face = s.face_vertices(i);
        let base = face[0];
        let mut e = Matrix::zeros(n, n - 1);
        for (j, p) in face[1..].iter().enumerate() {
            for r in 0..n {
                e[(r, j)] = p[r] - base[r];
            }
        }
        let (mut normal, volume) = if n == 1 {
            (Vector::basis(1, 0), 1.0)
        } else {
            householder_complement(&e)?
        };
        let area = volume / factorial(n - 1);
        if !(area > 0.0) {
            return Err(GeometryError::Internal(format!("face {} has zero area", i + 1)));
        }
        let centroid: Vec<f64> = (0..n)
            .map(|r| face.iter().map(|p| p[r]).sum::<f64>() / n as f64)
            .collect();
        let outward: f64 = (0..n).map(|r| normal[r] * (centroid[r] - s.vertices[i][r])).sum();
        if outward == 0.0 {
            return Err(GeometryError::Internal(format!(
                "cannot orient normal of face {}",
                i + 1
            )));
        }
        if outward < 0.0 {
            normal = normal.scaled(-1.0);
        }
        areas.push(area);
        normals.push(normal);
    }
    Ok(FaceData { areas, normals })
}

/// Gram matrix of the outward unit normals, `G_ij = <f_i, f_j>`.
///
/// Off-diagonal entries are `-cos` of the interior dihedral angles.
pub fn gram_matrix(s: &Simplex) -> Result<Matrix, GeometryError> {
    Ok(gram_from_faces(&face_geometry(s)?))
}

pub(crate) fn gram_from_faces(faces: &FaceData) -> Matrix {
    let k = faces.normals.len();
    let mut g = Matrix::identity(k);
    for i in 0..k {
        for j in i + 1..k {
            let x = faces.normals[i].dot(&faces.normals[j]).clamp(-1.0, 1.0);
            g[(i, j)] = x;
            g[(j, i)] = x;
        }
    }
    g
}

/// `||sum A_i f_i|| / sum A_i`.
pub fn minkowski_residual(s: &Simplex) -> Result<f64, GeometryError> {
    Ok(closure_residual(&face_geometry(s)?))
}

pub(crate) fn closure_residual(faces: &FaceData) -> f64 {
    let n = faces.normals[0].dim();
    let mut sum = vec![0.0; n];
    for (a, f) in faces.areas.iter().zip(&faces.normals) {
        for r in 0..n {
            sum[r] += a * f[r];
        }
    }
    matrix::norm(&sum) / faces.areas.iter().sum::<f64>()
}

/// `(k-1)`-volume of `k` points from the bordered squared-distance
/// determinant. Works in any ambient dimension.
pub fn cayley_menger_area(points: &[&[f64]]) -> Result<f64, GeometryError> {
    let k = points.len();
    if k < 2 {
        return Err(GeometryError::TooFewPoints);
    }
    let mut cm = Matrix::zeros(k + 1, k + 1);
    let mut scale = 0.0f64;
    for i in 0..k {
        cm[(0, i + 1)] = 1.0;
        cm[(i + 1, 0)] = 1.0;
        for j in i + 1..k {
            let d = distance(points[i], points[j]);
            scale = scale.max(d);
            cm[(i + 1, j + 1)] = d * d;
            cm[(j + 1, i + 1)] = d * d;
        }
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    // normalize lengths so the determinant stays O(1)
    for i in 1..=k {
        for j in 1..=k {
            cm[(i, j)] /= scale * scale;
        }
    }
    let m = k - 1;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let v2 = sign * determinant(&cm)? / (2f64.powi(m as i32) * factorial(m).powi(2));
    if v2 < -1e-12 {
        return Err(GeometryError::NegativeVolume(v2));
    }
    Ok(v2.max(0.0).sqrt() * scale.powi(m as i32))
}

/// `(n-1)`-volume of the orthogonal projection of the simplex onto the
/// hyperplane normal to `w`. Supports `n = 2` (an interval) and `n = 3`
/// (a convex polygon).
pub fn shadow_area(s: &Simplex, w: &[f64]) -> Result<f64, GeometryError> {
    let n = s.dim;
    if n != 2 && n != 3 {
        return Err(GeometryError::UnsupportedDimension(n));
    }
    let wn = matrix::norm(w);
    if w.len() != n || !(wn > 0.0) || !wn.is_finite() {
        return Err(GeometryError::BadDirection(n));
    }
    let w: Vec<f64> = w.iter().map(|x| x / wn).collect();
    if n == 2 {
        let t = [-w[1], w[0]];
        let proj: Vec<f64> = s.vertices.iter().map(|v| matrix::dot(v, &t)).collect();
        let lo = proj.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return Ok(hi - lo);
    }
    let (u1, u2) = plane_basis(&w);
    let pts: Vec<[f64; 2]> = s
        .vertices
        .iter()
        .map(|v| [matrix::dot(v, &u1), matrix::dot(v, &u2)])
        .collect();
    Ok(polygon_area(&convex_hull(pts)))
}

fn plane_basis(w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    // pick the axis least aligned with w
    let k = (0..3)
        .min_by(|&a, &b| w[a].abs().total_cmp(&w[b].abs()))
        .unwrap();
    let mut a = [0.0; 3];
    a[k] = 1.0;
    let u1 = cross(w, &a);
    let l = matrix::norm(&u1);
    let u1: Vec<f64> = u1.iter().map(|x| x / l).collect();
    let u2 = cross(w, &u1).to_vec();
    (u1, u2)
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Andrew's monotone chain. Returns the hull counter-clockwise.
fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &[f64; 2], a: &[f64; 2], b: &[f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && turn(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull
}

fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let twice: f64 = (0..poly.len())
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    twice.abs() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn trirectangular() -> Simplex {
        build_simplex(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    fn equilateral() -> Simplex {
        build_simplex(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]]).unwrap()
    }

    fn regular_tetrahedron() -> Simplex {
        let r = 1.0 / (2.0 * 2f64.sqrt());
        build_simplex(vec![
            vec![r, r, r],
            vec![r, -r, -r],
            vec![-r, r, -r],
            vec![-r, -r, r],
        ])
        .unwrap()
    }

    #[test]
    fn build_accepts_and_rejects() {
        assert!(build_simplex(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).is_ok());
        assert!(build_simplex(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0]
        ])
        .is_ok());
        assert!(matches!(
            build_simplex(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]),
            Err(GeometryError::Degenerate { .. })
        ));
        assert!(matches!(
            build_simplex(vec![vec![0.0, 0.0], vec![1.0, 1.0]]),
            Err(GeometryError::VertexCount { expected: 3, found: 2, .. })
        ));
        assert!(matches!(
            build_simplex(vec![vec![0.0, 0.0], vec![1.0], vec![0.0, 1.0]]),
            Err(GeometryError::DimensionMismatch { vertex: 1, .. })
        ));
        assert!(matches!(
            build_simplex(vec![vec![0.0, f64::NAN], vec![1.0, 0.0], vec![0.0, 1.0]]),
            Err(GeometryError::NonFinite { vertex: 0 })
        ));
    }

    #[test]
    fn trirectangular_faces() {
        let f = face_geometry(&trirectangular()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert_relative_eq!(f.areas.as_slice(), [0.5, 0.5, 0.5, h].as_slice(), epsilon = 1e-15);
        let u = 1.0 / 3f64.sqrt();
        let expected = [
            [-1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, -1.0],
            [u, u, u],
        ];
        for (n, e) in f.normals.iter().zip(expected) {
            assert_relative_eq!(n.as_slice(), e.as_slice(), epsilon = 1e-15);
        }
    }

    #[test]
    fn equilateral_and_regular_areas() {
        let f = face_geometry(&equilateral()).unwrap();
        assert_relative_eq!(f.areas.as_slice(), [1.0; 3].as_slice(), epsilon = 1e-15);

        let f = face_geometry(&regular_tetrahedron()).unwrap();
        let a = 3f64.sqrt() / 4.0;
        assert_relative_eq!(f.areas.as_slice(), [a; 4].as_slice(), epsilon = 1e-15);
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(&equilateral()).unwrap();
        let expected =
            Matrix::from_rows(&[[1.0, -0.5, -0.5], [-0.5, 1.0, -0.5], [-0.5, -0.5, 1.0]]).unwrap();
        assert!(g.max_abs_diff(&expected) <= 1e-15);

        let g = gram_matrix(&trirectangular()).unwrap();
        let u = -1.0 / 3f64.sqrt();
        let expected = Matrix::from_rows(&[
            [1.0, 0.0, 0.0, u],
            [0.0, 1.0, 0.0, u],
            [0.0, 0.0, 1.0, u],
            [u, u, u, 1.0],
        ])
        .unwrap();
        assert!(g.max_abs_diff(&expected) <= 1e-15);

        let g = gram_matrix(&regular_tetrahedron()).unwrap();
        for i in 0..4 {
            assert_eq!(g[(i, i)], 1.0);
            for j in (0..4).filter(|&j| j != i) {
                assert_relative_eq!(g[(i, j)], -1.0 / 3.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn closure_on_symmetric_cases() {
        assert!(minkowski_residual(&trirectangular()).unwrap() <= 1e-15);
        assert!(minkowski_residual(&equilateral()).unwrap() <= 1e-15);
    }

    #[test]
    fn cayley_menger_examples() {
        assert_relative_eq!(
            cayley_menger_area(&[&[0.0, 0.0], &[3.0, 4.0]]).unwrap(),
            5.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            cayley_menger_area(&[&[0.0, 0.0], &[3.0, 0.0], &[0.0, 4.0]]).unwrap(),
            6.0,
            epsilon = 1e-14
        );
        let t = regular_tetrahedron();
        let pts: Vec<&[f64]> = t.vertices().iter().map(Vec::as_slice).collect();
        assert_relative_eq!(
            cayley_menger_area(&pts).unwrap(),
            1.0 / (6.0 * 2f64.sqrt()),
            epsilon = 1e-14
        );
        assert_eq!(cayley_menger_area(&[&[1.0]]), Err(GeometryError::TooFewPoints));
    }

    #[test]
    fn shadow_examples() {
        let tri = build_simplex(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_relative_eq!(shadow_area(&tri, &[0.0, 1.0]).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            shadow_area(&trirectangular(), &[0.0, 0.0, 1.0]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_eq!(
            shadow_area(&tri, &[0.0, 0.0]),
            Err(GeometryError::BadDirection(2))
        );
        let s4 = build_simplex(vec![
            vec![0.0; 4],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(
            shadow_area(&s4, &[1.0, 0.0, 0.0, 0.0]),
            Err(GeometryError::UnsupportedDimension(4))
        );
    }

    #[test]
    fn normals_are_outward() {
        for s in [trirectangular(), equilateral(), regular_tetrahedron()] {
            let f = face_geometry(&s).unwrap();
            for i in 0..=s.dim() {
                let p = s.face_vertices(i)[0];
                let d: f64 = (0..s.dim()).map(|r| f.normals[i][r] * (s.vertex(i)[r] - p[r])).sum();
                assert!(d < 0.0);
            }
        }
    }
}
