//! Closed-form triangle and tetrahedron identities.
//!
//! Faces are indexed opposite vertices. The edge joining vertices `i` and `m`
//! lies in the two faces not indexed `i` or `m`, so the link of vertex `i`
//! is the spherical triangle whose angles are the three dihedral angles
//! `α_jk` with `i ∉ {j, k}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{cofactor_matrix, CompensatedSum, Matrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("angle {name} = {value} is outside (0, pi)")]
    AngleOutOfRange { name: String, value: f64 },
    #[error("angles not realizable as a tetrahedron: {0}")]
    NotRealizable(String),
    #[error("expected a 4x4 Gram matrix, got {0}x{1}")]
    NotTetrahedral(usize, usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn check_angle(name: &str, value: f64) -> Result<(), ClosedFormError> {
    if value > 0.0 && value < PI {
        Ok(())
    } else {
        Err(ClosedFormError::AngleOutOfRange {
            name: name.to_string(),
            value,
        })
    }
}

/// Triangle angles in radians. The sum is deliberately not forced to `π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleIdentities {
    /// cofactor (1,1), identically `sin² α`
    pub g11: f64,
    /// cofactor (2,2), identically `sin² β`
    pub g22: f64,
    /// cofactor (1,2) = `cos γ + cos α cos β`
    pub offdiag: f64,
    pub sin2_alpha: f64,
    pub sin2_beta: f64,
    pub sin_product: f64,
    /// `α + β + γ - π`
    pub angle_sum_defect: f64,
}

impl TriangleAngles {
    /// The normal Gram matrix of a triangle with these angles: vertices
    /// `A, B, C` carry `α, β, γ`; face 1 is `BC`, face 2 `AC`, face 3 `AB`.
    pub fn gram(&self) -> Matrix {
        let (ca, cb, cg) = (self.alpha.cos(), self.beta.cos(), self.gamma.cos());
        Matrix::from_rows(&[[1.0, -cg, -cb], [-cg, 1.0, -ca], [-cb, -ca, 1.0]])
            .expect("finite 3x3")
    }
}

/// Cofactors of the triangle Gram matrix next to the sines they should match.
///
/// `offdiag == sin_product` holds exactly when the angle sum is `π`; the
/// cosine addition formula and the angle sum are equivalent through it.
pub fn triangle_identities(t: &TriangleAngles) -> Result<TriangleIdentities, ClosedFormError> {
    check_angle("alpha", t.alpha)?;
    check_angle("beta", t.beta)?;
    check_angle("gamma", t.gamma)?;
    let cof = cofactor_matrix(&t.gram())?;
    Ok(TriangleIdentities {
        g11: cof[(0, 0)],
        g22: cof[(1, 1)],
        offdiag: cof[(0, 1)],
        sin2_alpha: t.alpha.sin().powi(2),
        sin2_beta: t.beta.sin().powi(2),
        sin_product: t.alpha.sin() * t.beta.sin(),
        angle_sum_defect: t.alpha + t.beta + t.gamma - PI,
    })
}

/// The six interior dihedral angles of a tetrahedron, indexed by unordered
/// face pairs (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DihedralSet {
    /// order: 12, 13, 14, 23, 24, 34 (1-based face labels)
    angles: [f64; 6],
    /// Cosines of `angles`; taken verbatim from `-G` when built from a Gram
    /// matrix, so no precision is lost to an `acos`/`cos` round trip.
    cosines: [f64; 6],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_slot(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .unwrap_or_else(|| panic!("no dihedral angle between faces {i} and {j}"))
}

impl DihedralSet {
    /// Angles in the order `α12, α13, α14, α23, α24, α34`.
    pub fn new(angles: [f64; 6]) -> Result<Self, ClosedFormError> {
        for (k, a) in angles.iter().enumerate() {
            let (i, j) = PAIRS[k];
            check_angle(&format!("alpha{}{}", i + 1, j + 1), *a)?;
        }
        Ok(Self {
            angles,
            cosines: angles.map(f64::cos),
        })
    }

    /// Interior angles `acos(-G_ij)` of a 4x4 normal Gram matrix.
    pub fn from_gram(g: &Matrix) -> Result<Self, ClosedFormError> {
        if g.rows() != 4 || g.cols() != 4 {
            return Err(ClosedFormError::NotTetrahedral(g.rows(), g.cols()));
        }
        let mut cosines = [0.0; 6];
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            cosines[k] = (-g[(i, j)]).clamp(-1.0, 1.0);
        }
        let d = Self::new(cosines.map(f64::acos))?;
        Ok(Self { cosines, ..d })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.angles[pair_slot(i, j)]
    }

    /// `S_i`: the solid angle at vertex `i`, the sum of the three dihedral
    /// angles along its edges minus `π`.
    pub fn link_excess(&self, i: usize) -> f64 {
        let [j, k, l] = Self::others(i);
        self.get(j, k) + self.get(j, l) + self.get(k, l) - PI
    }

    pub fn cos(&self, i: usize, j: usize) -> f64 {
        self.cosines[pair_slot(i, j)]
    }

    pub fn as_array(&self) -> [f64; 6] {
        self.angles
    }

    /// The three faces other than `i`, ascending.
    fn others(i: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for (slot, f) in out.iter_mut().zip((0..4).filter(|&f| f != i)) {
            *slot = f;
        }
        out
    }
}

/// `A_4² / A_3²` from the dihedral cosines:
///
/// ```text
/// 1 - c12² - c13² - c23² - 2 c12 c23 c13
/// --------------------------------------
/// 1 - c12² - c14² - c24² - 2 c12 c24 c14
/// ```
///
/// Numerator and denominator are the cofactors `Ĝ_44` and `Ĝ_33`. Both are
/// summed with compensation since slivers cancel them to nearly zero.
pub fn tetra_ratio_sineq(d: &DihedralSet) -> Result<f64, ClosedFormError> {
    let c = |i: usize, j: usize| d.cos(i - 1, j - 1);
    let cubic = |x: f64, y: f64, z: f64| {
        let mut acc = CompensatedSum::default();
        acc.add(1.0);
        for t in [x, y, z] {
            acc.add_product(-t, t);
        }
        acc.add_product3(-2.0 * x, y, z);
        acc.value()
    };
    let num = cubic(c(1, 2), c(1, 3), c(2, 3));
    let den = cubic(c(1, 2), c(1, 4), c(2, 4));
    if !(num > 0.0) || !(den > 0.0) {
        return Err(ClosedFormError::NotRealizable(format!(
            "numerator {num:.6e}, denominator {den:.6e}"
        )));
    }
    Ok(num / den)
}

/// Spherical areas attached to each vertex of a tetrahedron (steradians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkQuantities {
    /// `S_i`: area of the link of vertex `i` (its solid angle),
    /// `α_jk + α_jl + α_kl - π`.
    pub link_excess: [f64; 4],
    /// `E_i`: area of the polar of the link, `2π -` (sum of the face angles
    /// at vertex `i`).
    pub polar_excess: [f64; 4],
    /// Face angles at each vertex, recovered from the link angles.
    pub face_angles: [[f64; 3]; 4],
}

const COS_SLACK: f64 = 1e-9;

pub fn link_quantities(d: &DihedralSet) -> Result<LinkQuantities, ClosedFormError> {
    let mut link_excess = [0.0; 4];
    let mut polar_excess = [0.0; 4];
    let mut face_angles = [[0.0; 3]; 4];
    for i in 0..4 {
        let [j, k, l] = DihedralSet::others(i);
        let angles = [d.get(j, k), d.get(j, l), d.get(k, l)];
        link_excess[i] = d.link_excess(i);
        for s in 0..3 {
            let a = angles[s];
            let b = angles[(s + 1) % 3];
            let c = angles[(s + 2) % 3];
            // dual law of cosines: side opposite angle a
            let cos_side = (a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin());
            if !(cos_side.abs() <= 1.0 + COS_SLACK) {
                return Err(ClosedFormError::NotRealizable(format!(
                    "link of vertex {} has side cosine {cos_side:.6}",
                    i + 1
                )));
            }
            face_angles[i][s] = cos_side.clamp(-1.0, 1.0).acos();
        }
        polar_excess[i] = 2.0 * PI - face_angles[i].iter().sum::<f64>();
        if !(link_excess[i] > 0.0 && polar_excess[i] > 0.0) {
            return Err(ClosedFormError::NotRealizable(format!(
                "vertex {} has link excess {:.6} and polar excess {:.6}",
                i + 1,
                link_excess[i],
                polar_excess[i]
            )));
        }
    }
    Ok(LinkQuantities {
        link_excess,
        polar_excess,
        face_angles,
    })
}

/// Two half-angle expressions for `A_4 / A_3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfAngleRatios {
    /// `sin(S4/2) cos(α13/2) cos(α23/2) / (sin(S3/2) cos(α14/2) cos(α24/2))`
    /// with link excesses. Does not equal the area ratio in general.
    pub link_form: f64,
    /// `sin(E4/2) sin(α13/2) sin(α23/2) / (sin(E3/2) sin(α14/2) sin(α24/2))`
    /// with polar excesses; Cagnoli's formula applied to the spherical
    /// triangle of unit normals. Matches the area ratio.
    pub polar_form: f64,
}

pub fn half_angle_ratios(d: &DihedralSet) -> Result<HalfAngleRatios, ClosedFormError> {
    let links = link_quantities(d)?;
    let a = |i: usize, j: usize| d.get(i - 1, j - 1) / 2.0;
    let (s3, s4) = (links.link_excess[2], links.link_excess[3]);
    let (e3, e4) = (links.polar_excess[2], links.polar_excess[3]);
    let link_form = ((s4 / 2.0).sin() * a(1, 3).cos() * a(2, 3).cos())
        / ((s3 / 2.0).sin() * a(1, 4).cos() * a(2, 4).cos());
    let polar_form = ((e4 / 2.0).sin() * a(1, 3).sin() * a(2, 3).sin())
        / ((e3 / 2.0).sin() * a(1, 4).sin() * a(2, 4).sin());
    Ok(HalfAngleRatios {
        link_form,
        polar_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn trirectangular() -> DihedralSet {
        let b = (1.0 / 3f64.sqrt()).acos();
        // 12, 13, 14, 23, 24, 34
        DihedralSet::new([FRAC_PI_2, FRAC_PI_2, b, FRAC_PI_2, b, b]).unwrap()
    }

    fn regular() -> DihedralSet {
        DihedralSet::new([(1.0f64 / 3.0).acos(); 6]).unwrap()
    }

    #[test]
    fn equilateral_triangle_identities() {
        let t = TriangleAngles {
            alpha: FRAC_PI_3,
            beta: FRAC_PI_3,
            gamma: FRAC_PI_3,
        };
        let r = triangle_identities(&t).unwrap();
        assert_relative_eq!(r.g11, 0.75, epsilon = 1e-15);
        assert_relative_eq!(r.g22, 0.75, epsilon = 1e-15);
        assert_relative_eq!(r.offdiag, 0.75, epsilon = 1e-15);
        assert_relative_eq!(r.sin_product, 0.75, epsilon = 1e-15);
        assert!(r.angle_sum_defect.abs() < 1e-15);
    }

    #[test]
    fn right_isosceles_offdiag() {
        let t = TriangleAngles {
            alpha: FRAC_PI_4,
            beta: FRAC_PI_4,
            gamma: FRAC_PI_2,
        };
        let r = triangle_identities(&t).unwrap();
        assert_relative_eq!(r.offdiag, 0.5, epsilon = 1e-15);
        assert_relative_eq!(r.sin_product, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn all_right_angles_break_the_identity() {
        let t = TriangleAngles {
            alpha: FRAC_PI_2,
            beta: FRAC_PI_2,
            gamma: FRAC_PI_2,
        };
        let r = triangle_identities(&t).unwrap();
        assert!(r.offdiag.abs() < 1e-15);
        assert_relative_eq!(r.sin_product, 1.0);
        assert_relative_eq!(r.angle_sum_defect, FRAC_PI_2, epsilon = 1e-15);
        assert!((r.offdiag - r.sin_product).abs() >= 0.1);
    }

    #[test]
    fn triangle_rejects_bad_angles() {
        let t = TriangleAngles {
            alpha: 0.0,
            beta: 1.0,
            gamma: 1.0,
        };
        assert!(matches!(
            triangle_identities(&t),
            Err(ClosedFormError::AngleOutOfRange { .. })
        ));
    }

    #[test]
    fn sineq_examples() {
        assert_relative_eq!(tetra_ratio_sineq(&trirectangular()).unwrap(), 3.0, epsilon = 1e-14);
        assert_relative_eq!(tetra_ratio_sineq(&regular()).unwrap(), 1.0, epsilon = 1e-14);
        let flat = DihedralSet::new([FRAC_PI_6; 6]).unwrap();
        assert!(matches!(
            tetra_ratio_sineq(&flat),
            Err(ClosedFormError::NotRealizable(_))
        ));
    }

    #[test]
    fn link_examples() {
        let l = link_quantities(&trirectangular()).unwrap();
        assert_relative_eq!(l.link_excess[3], FRAC_PI_2, epsilon = 1e-15);
        assert_relative_eq!(l.polar_excess[2], 7.0 * PI / 6.0, epsilon = 1e-14);
        let mut sides = l.face_angles[2];
        sides.sort_by(f64::total_cmp);
        assert_relative_eq!(
            sides.as_slice(),
            [FRAC_PI_4, FRAC_PI_4, FRAC_PI_3].as_slice(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            l.link_excess[2],
            2.0 * (1.0 / 3f64.sqrt()).acos() - FRAC_PI_2,
            epsilon = 1e-15
        );

        let l = link_quantities(&regular()).unwrap();
        for s in l.link_excess {
            assert_relative_eq!(s, 0.551285598, epsilon = 1e-9);
        }
        for e in &l.polar_excess[1..] {
            assert_relative_eq!(*e, l.polar_excess[0], epsilon = 1e-14);
        }
    }

    #[test]
    fn half_angle_examples() {
        let r = half_angle_ratios(&regular()).unwrap();
        assert_relative_eq!(r.link_form, 1.0, epsilon = 1e-14);
        assert_relative_eq!(r.polar_form, 1.0, epsilon = 1e-14);

        let r = half_angle_ratios(&trirectangular()).unwrap();
        assert_relative_eq!(r.polar_form, 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(r.link_form, 2.650990482, epsilon = 1e-9);
    }

    #[test]
    fn dihedral_access_is_symmetric() {
        let d = trirectangular();
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }
}
