//! Deterministic random simplices and the property-suite driver.
//!
//! Every random draw is keyed by `(seed, dimension, index)` through a
//! counter-based ChaCha stream, so any single trial can be replayed without
//! running the ones before it, and trials may run in parallel.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::{
    half_angle_ratios, link_quantities, tetra_ratio_sineq, triangle_identities, DihedralSet,
    TriangleAngles,
};
use crate::matrix::{
    self, cofactor_matrix, determinant, null_vector, outer_product, pseudo_determinant,
    rank1_decompose, symmetric_eigen, Matrix, DEFAULT_NULL_TOL,
};
use crate::recover::{simplex_from_gram, validate_gram};
use crate::simplex::{
    build_simplex, cayley_menger_area, face_geometry, gram_matrix, minkowski_residual,
    shadow_area, GeometryError, Simplex,
};
use crate::sines::{areas_from_gram, gram_rank1_report, sine_ratio, verify_simplex};

const MAX_DRAWS: usize = 32;

/// Minimum singular-value ratio of the edge matrix for Gaussian and
/// uniform draws. Every identity here passes through the normal Gram
/// matrix, whose f64 rounding limits relative accuracy to about
/// `eps / λ`, with `λ` its smallest positive eigenvalue (roughly the square
/// of this ratio). Thinner draws are redrawn; slivers are exercised on
/// purpose by [`Distribution::NearDegenerate`].
pub const GENERIC_CONDITIONING_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("invalid random spec: {0}")]
    InvalidSpec(String),
    #[error("no nondegenerate draw after {MAX_DRAWS} attempts (seed {seed}, index {index})")]
    RetryBudget { seed: u64, index: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Distribution {
    /// Independent standard normal coordinates.
    GaussianVertices,
    /// Coordinates uniform in `[-1, 1]`.
    UniformCube,
    /// A Gaussian simplex with vertex 1 moved to distance
    /// `gap × diameter` (of the unmoved draw) from the hyperplane of the
    /// opposite face.
    NearDegenerate { gap: f64 },
}

impl Distribution {
    fn tag(&self) -> u64 {
        match self {
            Self::GaussianVertices => 0,
            Self::UniformCube => 1,
            Self::NearDegenerate { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub dimension: usize,
    pub distribution: Distribution,
    pub seed: u64,
    pub trials: usize,
}

impl RandomSpec {
    pub fn gaussian(dimension: usize, seed: u64, trials: usize) -> Self {
        Self {
            dimension,
            distribution: Distribution::GaussianVertices,
            seed,
            trials,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.dimension < 2 {
            return Err(HarnessError::InvalidSpec(format!(
                "dimension {} < 2",
                self.dimension
            )));
        }
        if self.trials == 0 {
            return Err(HarnessError::InvalidSpec("trials must be >= 1".into()));
        }
        if let Distribution::NearDegenerate { gap } = self.distribution {
            if !(gap > 0.0) {
                return Err(HarnessError::InvalidSpec(format!("gap {gap} must be > 0")));
            }
        }
        Ok(())
    }

    /// Independent stream for `(index, purpose)`. Purpose 0 draws vertices.
    fn stream(&self, index: usize, purpose: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        let key = ((self.dimension as u64) << 48)
            ^ (self.distribution.tag() << 44)
            ^ (purpose << 36)
            ^ index as u64;
        rng.set_stream(key);
        rng
    }
}

/// The default corpus: Gaussian simplices in dimensions 2 through 8.
pub fn default_specs(seed: u64, trials: usize) -> Vec<RandomSpec> {
    (2..=8).map(|d| RandomSpec::gaussian(d, seed, trials)).collect()
}

fn gaussian_points(rng: &mut ChaCha12Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect()
}

/// Draws simplex number `index` of `spec`. Deterministic in `(spec, index)`.
pub fn random_simplex(spec: &RandomSpec, index: usize) -> Result<Simplex, HarnessError> {
    draw(spec, index).map(|(s, _)| s)
}

/// The simplex and the number of discarded draws before it.
fn draw(spec: &RandomSpec, index: usize) -> Result<(Simplex, usize), HarnessError> {
    spec.validate()?;
    let n = spec.dimension;
    let mut rng = spec.stream(index, 0);
    let floor = match spec.distribution {
        Distribution::NearDegenerate { .. } => 0.0,
        _ => GENERIC_CONDITIONING_FLOOR,
    };
    let mut base = None;
    for attempt in 0..MAX_DRAWS {
        let pts = match spec.distribution {
            Distribution::UniformCube => (0..=n)
                .map(|_| (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect())
                .collect(),
            _ => gaussian_points(&mut rng, n + 1, n),
        };
        if let Ok(s) = build_simplex(pts) {
            if s.conditioning() >= floor {
                base = Some((s, attempt));
                break;
            }
        }
    }
    let base = base.ok_or(HarnessError::RetryBudget {
        seed: spec.seed,
        index,
    })?;
    let (base, redraws) = base;
    let Distribution::NearDegenerate { gap } = spec.distribution else {
        return Ok((base, redraws));
    };

    let faces = face_geometry(&base)?;
    let normal = &faces.normals[0];
    let anchor = base.vertex(1);
    let v0 = base.vertex(0);
    let height: f64 = (0..n).map(|r| (v0[r] - anchor[r]) * normal[r]).sum();
    let offset = gap * base.diameter();
    let mut vertices = base.vertices().to_vec();
    // outward normal points away from vertex 0, so step against it
    vertices[0] = (0..n)
        .map(|r| v0[r] - height * normal[r] - offset * normal[r])
        .collect();
    Ok((build_simplex(vertices)?, redraws))
}

/// Per-property pass thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub minkowski: f64,
    pub oracle_area: f64,
    pub gram_null_eigen: f64,
    pub null_space: f64,
    pub rank1: f64,
    pub c_consistency: f64,
    pub area_vector: f64,
    pub multisine: f64,
    pub verify: f64,
    pub classical: f64,
    pub triangle: f64,
    pub shadow: f64,
    pub rigid: f64,
    pub scaling: f64,
    pub recover_gram: f64,
    pub recover_shape: f64,
    pub recover_areas: f64,
    pub sineq_direct: f64,
    pub sineq_adjugate: f64,
    pub polar_form: f64,
    pub cramer: f64,
    pub adjugate_transpose: f64,
    pub outer_action: f64,
    pub rank1_spectrum: f64,
    pub c_theorem: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            minkowski: 1e-10,
            oracle_area: 1e-10,
            gram_null_eigen: 1e-10,
            null_space: 1e-10,
            rank1: 1e-9,
            c_consistency: 1e-8,
            area_vector: 1e-8,
            multisine: 1e-8,
            verify: 1e-8,
            classical: 1e-10,
            triangle: 1e-10,
            shadow: 1e-10,
            rigid: 1e-10,
            scaling: 1e-10,
            recover_gram: 1e-8,
            recover_shape: 1e-7,
            recover_areas: 1e-8,
            sineq_direct: 1e-8,
            sineq_adjugate: 1e-12,
            polar_form: 1e-9,
            cramer: 1e-10,
            adjugate_transpose: 1e-12,
            outer_action: 1e-12,
            rank1_spectrum: 1e-12,
            c_theorem: 1e-8,
        }
    }
}

impl Tolerances {
    /// Every threshold set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        Self {
            minkowski: tol,
            oracle_area: tol,
            gram_null_eigen: tol,
            null_space: tol,
            rank1: tol,
            c_consistency: tol,
            area_vector: tol,
            multisine: tol,
            verify: tol,
            classical: tol,
            triangle: tol,
            shadow: tol,
            rigid: tol,
            scaling: tol,
            recover_gram: tol,
            recover_shape: tol,
            recover_areas: tol,
            sineq_direct: tol,
            sineq_adjugate: tol,
            polar_form: tol,
            cramer: tol,
            adjugate_transpose: tol,
            outer_action: tol,
            rank1_spectrum: tol,
            c_theorem: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    MinkowskiClosure,
    CayleyMengerOracle,
    GramSignature,
    NullSpace,
    Rank1Adjugate,
    CConsistency,
    AreaVector,
    Multisine,
    VerifyPass,
    ClassicalSines,
    TriangleIdentity,
    Shadow,
    RigidMotion,
    Scaling,
    RecoverGram,
    RecoverShape,
    RecoverAreas,
    SineqDirect,
    SineqAdjugate,
    PolarForm,
    LinkPositivity,
    LinkFlattening,
    CramerRule,
    AdjugateTranspose,
    OuterAction,
    Rank1Spectrum,
    CTheorem,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MinkowskiClosure => "minkowski_closure",
            Self::CayleyMengerOracle => "cayley_menger_oracle",
            Self::GramSignature => "gram_signature",
            Self::NullSpace => "null_space",
            Self::Rank1Adjugate => "rank1_adjugate",
            Self::CConsistency => "c_consistency",
            Self::AreaVector => "area_vector",
            Self::Multisine => "multisine",
            Self::VerifyPass => "verify_pass",
            Self::ClassicalSines => "classical_sines",
            Self::TriangleIdentity => "triangle_identity",
            Self::Shadow => "shadow",
            Self::RigidMotion => "rigid_motion",
            Self::Scaling => "scaling",
            Self::RecoverGram => "recover_gram",
            Self::RecoverShape => "recover_shape",
            Self::RecoverAreas => "recover_areas",
            Self::SineqDirect => "sineq_direct",
            Self::SineqAdjugate => "sineq_adjugate",
            Self::PolarForm => "polar_form",
            Self::LinkPositivity => "link_positivity",
            Self::LinkFlattening => "link_flattening",
            Self::CramerRule => "cramer_rule",
            Self::AdjugateTranspose => "adjugate_transpose",
            Self::OuterAction => "outer_action",
            Self::Rank1Spectrum => "rank1_spectrum",
            Self::CTheorem => "c_theorem",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Names of the library operations the suite must reach on a default run.
pub const COVERED_OPS: &[&str] = &[
    "determinant",
    "cofactor_matrix",
    "outer_product",
    "null_vector",
    "rank1_decompose",
    "pseudo_determinant",
    "build_simplex",
    "face_geometry",
    "gram_matrix",
    "minkowski_residual",
    "cayley_menger_area",
    "shadow_area",
    "sine_ratio",
    "areas_from_gram",
    "gram_rank1_report",
    "verify_simplex",
    "triangle_identities",
    "tetra_ratio_sineq",
    "link_quantities",
    "half_angle_ratios",
    "validate_gram",
    "simplex_from_gram",
    "random_simplex",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseRef {
    pub spec: usize,
    pub dimension: usize,
    pub seed: u64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub tolerance: Option<f64>,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub worst_case: Option<CaseRef>,
    /// First failing trial, for replay.
    pub first_failure: Option<CaseRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub spec: RandomSpec,
    pub accepted: usize,
    /// Draws discarded inside `random_simplex` before an accepted one.
    pub redraws: usize,
    /// Draws refused by `build_simplex` (expected for near-degenerate specs).
    pub rejected: usize,
    pub first_rejection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub tolerances: Tolerances,
    pub specs: Vec<SpecSummary>,
    pub properties: Vec<PropertyRecord>,
    pub op_calls: BTreeMap<String, u64>,
    pub overall_pass: bool,
}

impl SuiteReport {
    pub fn property(&self, p: Property) -> Option<&PropertyRecord> {
        self.properties.iter().find(|r| r.name == p.name())
    }

    pub fn total_failures(&self) -> usize {
        self.properties.iter().map(|p| p.failures).sum()
    }
}

#[derive(Default)]
struct OpCounter(BTreeMap<&'static str, u64>);

impl OpCounter {
    fn hit(&mut self, name: &'static str) {
        *self.0.entry(name).or_default() += 1;
    }
}

#[derive(Debug, Clone, Copy)]
struct Check {
    residual: f64,
    pass: bool,
}

fn within(residual: f64, tol: f64) -> Check {
    Check {
        residual,
        pass: residual <= tol,
    }
}

fn flag(ok: bool) -> Check {
    Check {
        residual: if ok { 0.0 } else { 1.0 },
        pass: ok,
    }
}

/// A failed computation counts as a failed check with residual 1.
fn or_fail(r: Result<Check, String>) -> Check {
    r.unwrap_or(Check {
        residual: 1.0,
        pass: false,
    })
}

struct TrialOutcome {
    redraws: usize,
    rejection: Option<String>,
    checks: Vec<(Property, Check)>,
    ops: OpCounter,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| rel(*x, *y)).fold(0.0, f64::max)
}

fn random_orthogonal(rng: &mut ChaCha12Rng, n: usize) -> Matrix {
    // Gram-Schmidt twice on Gaussian columns
    let mut cols: Vec<Vec<f64>> = gaussian_points(rng, n, n);
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let p = matrix::dot(&cols[j], &cols[k]);
                let (head, tail) = cols.split_at_mut(j);
                for r in 0..n {
                    tail[0][r] -= p * head[k][r];
                }
            }
        }
        let l = matrix::norm(&cols[j]);
        cols[j].iter_mut().for_each(|x| *x /= l);
    }
    let mut q = Matrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            q[(i, j)] = *x;
        }
    }
    q
}

fn interior_angle(at: &[f64], p: &[f64], q: &[f64]) -> f64 {
    let u: Vec<f64> = p.iter().zip(at).map(|(a, b)| a - b).collect();
    let v: Vec<f64> = q.iter().zip(at).map(|(a, b)| a - b).collect();
    (matrix::dot(&u, &v) / (matrix::norm(&u) * matrix::norm(&v)))
        .clamp(-1.0, 1.0)
        .acos()
}

fn run_trial(spec: &RandomSpec, index: usize, tol: &Tolerances) -> TrialOutcome {
    let mut ops = OpCounter::default();
    let mut checks = Vec::new();

    matrix_properties(spec, index, tol, &mut ops, &mut checks);

    ops.hit("random_simplex");
    ops.hit("build_simplex");
    let (s, redraws) = match draw(spec, index) {
        Ok(d) => d,
        Err(e) => {
            return TrialOutcome {
                redraws: 0,
                rejection: Some(e.to_string()),
                checks,
                ops,
            }
        }
    };
    simplex_properties(spec, index, &s, tol, &mut ops, &mut checks);
    TrialOutcome {
        redraws,
        rejection: None,
        checks,
        ops,
    }
}

fn matrix_properties(
    spec: &RandomSpec,
    index: usize,
    tol: &Tolerances,
    ops: &mut OpCounter,
    checks: &mut Vec<(Property, Check)>,
) {
    let mut rng = spec.stream(index, 1);
    let size = 2 + index % 7;
    let data: Vec<f64> = (0..size * size).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let m = Matrix::new(size, size, data).expect("finite");

    ops.hit("cofactor_matrix");
    ops.hit("determinant");
    let cof = cofactor_matrix(&m).expect("square");
    let det = determinant(&m).expect("square");
    let lhs = m.matmul(&cof.transpose()).expect("square");
    let cramer = lhs.max_abs_diff(&Matrix::identity(size).scaled(det));
    checks.push((
        Property::CramerRule,
        within(cramer / (det.abs().max(1.0) * size as f64), tol.cramer),
    ));

    ops.hit("cofactor_matrix");
    let cof_t = cofactor_matrix(&m.transpose()).expect("square");
    checks.push((
        Property::AdjugateTranspose,
        within(cof_t.max_abs_diff(&cof.transpose()), tol.adjugate_transpose),
    ));

    let v: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let w: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let x: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..=1.0)).collect();
    ops.hit("outer_product");
    let vw = outer_product(&v, &w).expect("same length");
    let applied = vw.mul_vec(&x).expect("same length");
    let wx = matrix::dot(&w, &x);
    let action = (0..size).map(|i| (applied[i] - wx * v[i]).abs()).fold(0.0, f64::max);
    let scale = matrix::norm(&v) * matrix::norm(&w);
    checks.push((
        Property::OuterAction,
        within(action / (scale * matrix::norm(&x)), tol.outer_action),
    ));
    ops.hit("determinant");
    let spectrum = (vw.trace() - matrix::dot(&v, &w))
        .abs()
        .max(determinant(&vw).expect("square").abs() / scale.powi(size as i32))
        / scale;
    checks.push((Property::Rank1Spectrum, within(spectrum, tol.rank1_spectrum)));

    let c_check = c_theorem_residual(&mut rng, size, ops).map(|r| within(r, tol.c_theorem));
    checks.push((Property::CTheorem, or_fail(c_check)));
}

/// Builds one symmetric `QᵗDQ` and one asymmetric `P D Q` matrix with a
/// single zero in `D` and checks `c <left,right> = pseudo_determinant`.
fn c_theorem_residual(rng: &mut ChaCha12Rng, size: usize, ops: &mut OpCounter) -> Result<f64, String> {
    let mut d: Vec<f64> = (0..size).map(|_| rng.random_range(0.5..=2.0)).collect();
    d[0] = 0.0;
    let q = random_orthogonal(rng, size);
    // left null vector P e1, right null vector Qᵗ e1; keep them away from
    // orthogonal, where the pseudo-determinant divides by nearly zero
    let mut p = random_orthogonal(rng, size);
    for _ in 0..MAX_DRAWS {
        if matrix::dot(&p.column(0), q.row(0)).abs() >= 0.1 {
            break;
        }
        p = random_orthogonal(rng, size);
    }
    let dm = Matrix::diagonal(&d);
    let sym = q.transpose().matmul(&dm).and_then(|a| a.matmul(&q)).map_err(|e| e.to_string())?;
    let asym = p.matmul(&dm).and_then(|a| a.matmul(&q)).map_err(|e| e.to_string())?;

    let mut worst = 0.0f64;
    for (m, symmetric) in [(sym, true), (asym, false)] {
        ops.hit("cofactor_matrix");
        ops.hit("rank1_decompose");
        ops.hit("pseudo_determinant");
        let cof = cofactor_matrix(&m).map_err(|e| e.to_string())?;
        let f = rank1_decompose(&cof, 1e-6).map_err(|e| e.to_string())?;
        // cofactor = c · (left null of m) · (right null of m)ᵗ
        let pd = pseudo_determinant(&m, &f.right, &f.left).map_err(|e| e.to_string())?;
        let lhs = f.c * matrix::dot(&f.left, &f.right);
        worst = worst.max(rel(lhs, pd)).max(rel(cof.trace(), pd));
        if symmetric {
            ops.hit("null_vector");
            let v = null_vector(&m, DEFAULT_NULL_TOL).map_err(|e| e.to_string())?;
            let pd_null = pseudo_determinant(&m, &v, &v).map_err(|e| e.to_string())?;
            let product: f64 = d[1..].iter().product();
            worst = worst.max(rel(pd_null, product)).max(rel(pd, product));
        }
    }
    Ok(worst)
}

fn simplex_properties(
    spec: &RandomSpec,
    index: usize,
    s: &Simplex,
    tol: &Tolerances,
    ops: &mut OpCounter,
    checks: &mut Vec<(Property, Check)>,
) {
    let n = s.dim();
    let mut rng = spec.stream(index, 2);

    ops.hit("face_geometry");
    ops.hit("gram_matrix");
    ops.hit("minkowski_residual");
    let (faces, g) = match (face_geometry(s), gram_matrix(s)) {
        (Ok(f), Ok(g)) => (f, g),
        _ => {
            checks.push((Property::MinkowskiClosure, flag(false)));
            return;
        }
    };
    let areas = &faces.areas;
    let a_norm = matrix::norm(areas);
    let a_unit: Vec<f64> = areas.iter().map(|x| x / a_norm).collect();

    checks.push((
        Property::MinkowskiClosure,
        or_fail(minkowski_residual(s).map(|r| within(r, tol.minkowski)).map_err(|e| e.to_string())),
    ));

    let mut cm_worst = 0.0f64;
    for (i, &area) in areas.iter().enumerate() {
        ops.hit("cayley_menger_area");
        match cayley_menger_area(&s.face_vertices(i)) {
            Ok(a) => cm_worst = cm_worst.max(rel(a, area)),
            Err(_) => cm_worst = f64::MAX,
        }
    }
    checks.push((Property::CayleyMengerOracle, within(cm_worst, tol.oracle_area)));

    let eig = symmetric_eigen(&g).expect("square");
    let lmax = eig.values[0];
    let positive = eig.values.iter().filter(|l| **l > 1e-8).count();
    let lmin = eig.values[n].abs() / lmax;
    checks.push((
        Property::GramSignature,
        Check {
            residual: lmin,
            pass: positive == n && lmin <= tol.gram_null_eigen,
        },
    ));

    let null_res = g.mul_vec(areas).expect("square").norm() / a_norm;
    checks.push((Property::NullSpace, within(null_res, tol.null_space)));

    ops.hit("verify_simplex");
    match verify_simplex(s, tol.multisine) {
        Ok(r) => {
            checks.push((
                Property::Rank1Adjugate,
                Check {
                    residual: r.rank1_residual,
                    pass: r.rank1_residual <= tol.rank1 && r.checks.cofactors_positive,
                },
            ));
            let mut ratio_worst = r.max_ratio_error;
            // one spot check through the public single-quadruple entry point
            let q: Vec<usize> = (0..4).map(|_| rng.random_range(0..=n)).collect();
            ops.hit("sine_ratio");
            match sine_ratio(&g, q[0], q[1], q[2], q[3]) {
                Ok(x) => {
                    let direct = areas[q[0]] * areas[q[1]] / (areas[q[2]] * areas[q[3]]);
                    ratio_worst = ratio_worst.max(rel(x, direct));
                }
                Err(_) => ratio_worst = f64::MAX,
            }
            checks.push((Property::Multisine, within(ratio_worst, tol.multisine)));
            let verify_tol = tol.verify;
            let strict = verify_simplex(s, verify_tol).map(|r| r.pass).unwrap_or(false);
            checks.push((Property::VerifyPass, flag(strict)));

            ops.hit("gram_rank1_report");
            let c_check = gram_rank1_report(&g).map(|rep| {
                let worst = r.c_mismatch.max(rep.c_mismatch).max(rel(rep.factorization.c, r.c_value));
                Check {
                    residual: worst,
                    pass: worst <= tol.c_consistency && r.c_value > 0.0 && rep.factorization.c > 0.0,
                }
            });
            checks.push((Property::CConsistency, or_fail(c_check.map_err(|e| e.to_string()))));
        }
        Err(_) => {
            for p in [Property::Rank1Adjugate, Property::Multisine, Property::VerifyPass, Property::CConsistency] {
                checks.push((p, flag(false)));
            }
        }
    }

    ops.hit("areas_from_gram");
    let recovered = areas_from_gram(&g);
    checks.push((
        Property::AreaVector,
        or_fail(
            recovered
                .as_ref()
                .map(|a| {
                    let d = a.iter().zip(&a_unit).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                    within(d, tol.area_vector)
                })
                .map_err(|e| e.to_string()),
        ),
    ));

    if n == 2 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in (0..3).filter(|&j| j != i) {
                ops.hit("sine_ratio");
                match sine_ratio(&g, i, i, j, j) {
                    Ok(r) => worst = worst.max(rel(r.sqrt(), areas[i] / areas[j])),
                    Err(_) => worst = f64::MAX,
                }
            }
        }
        checks.push((Property::ClassicalSines, within(worst, tol.classical)));

        let v = s.vertices();
        let t = TriangleAngles {
            alpha: interior_angle(&v[0], &v[1], &v[2]),
            beta: interior_angle(&v[1], &v[0], &v[2]),
            gamma: interior_angle(&v[2], &v[0], &v[1]),
        };
        ops.hit("triangle_identities");
        let check = triangle_identities(&t).map(|r| {
            let res = (r.offdiag - r.sin_product)
                .abs()
                .max((r.g11 - r.sin2_alpha).abs())
                .max((r.g22 - r.sin2_beta).abs())
                .max(t.gram().max_abs_diff(&g));
            within(res, tol.triangle)
        });
        checks.push((Property::TriangleIdentity, or_fail(check.map_err(|e| e.to_string()))));
    }

    if n <= 3 {
        let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let wn = matrix::norm(&w);
        let (mut pos, mut neg) = (0.0, 0.0);
        for (a, f) in areas.iter().zip(&faces.normals) {
            let p = a * matrix::dot(f, &w);
            if p > 0.0 {
                pos += p;
            } else {
                neg -= p;
            }
        }
        ops.hit("shadow_area");
        let check = shadow_area(s, &w).map(|sh| within(rel(neg, pos).max(rel(sh * wn, pos)), tol.shadow));
        checks.push((Property::Shadow, or_fail(check.map_err(|e| e.to_string()))));
    }

    let rot = random_orthogonal(&mut rng, n);
    let shift: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..=10.0)).collect();
    let check = s
        .transformed(&rot, 1.0, &shift)
        .and_then(|moved| {
            let f2 = face_geometry(&moved)?;
            let g2 = gram_matrix(&moved)?;
            Ok(within(
                g2.max_abs_diff(&g).max(max_rel(&f2.areas, areas)),
                tol.rigid,
            ))
        })
        .map_err(|e| e.to_string());
    checks.push((Property::RigidMotion, or_fail(check)));

    let factor = rng.random_range(0.1..=10.0);
    let check = s
        .transformed(&Matrix::identity(n), factor, &vec![0.0; n])
        .and_then(|scaled| {
            let f2 = face_geometry(&scaled)?;
            let expected: Vec<f64> = areas.iter().map(|a| a * factor.powi(n as i32 - 1)).collect();
            let normals = f2
                .normals
                .iter()
                .zip(&faces.normals)
                .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            let g2 = gram_matrix(&scaled)?;
            Ok(within(
                max_rel(&expected, &f2.areas).max(normals).max(g2.max_abs_diff(&g)),
                tol.scaling,
            ))
        })
        .map_err(|e| e.to_string());
    checks.push((Property::Scaling, or_fail(check)));

    recovery_properties(s, &g, recovered.ok().as_deref(), tol, ops, checks);

    if n == 3 {
        closed_form_properties(s, &g, areas, &mut rng, tol, ops, checks);
    }
}

fn sorted_normalized_edges(s: &Simplex) -> Vec<f64> {
    let mut e = s.edge_lengths();
    let max = e.iter().copied().fold(0.0, f64::max);
    e.iter_mut().for_each(|x| *x /= max);
    e.sort_by(f64::total_cmp);
    e
}

fn recovery_properties(
    s: &Simplex,
    g: &Matrix,
    recovered_areas: Option<&[f64]>,
    tol: &Tolerances,
    ops: &mut OpCounter,
    checks: &mut Vec<(Property, Check)>,
) {
    ops.hit("validate_gram");
    let realizable = validate_gram(g, DEFAULT_NULL_TOL).map(|r| r.realizable).unwrap_or(false);
    ops.hit("simplex_from_gram");
    let rebuilt = match simplex_from_gram(g, DEFAULT_NULL_TOL) {
        Ok(r) if realizable => r,
        _ => {
            for p in [Property::RecoverGram, Property::RecoverShape, Property::RecoverAreas] {
                checks.push((p, flag(false)));
            }
            return;
        }
    };
    let g2 = gram_matrix(&rebuilt).expect("validated simplex");
    checks.push((Property::RecoverGram, within(g2.max_abs_diff(g), tol.recover_gram)));

    let shape = sorted_normalized_edges(&rebuilt)
        .iter()
        .zip(sorted_normalized_edges(s))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push((Property::RecoverShape, within(shape, tol.recover_shape)));

    let check = match (face_geometry(&rebuilt), recovered_areas) {
        (Ok(f), Some(a)) => {
            let l = matrix::norm(&f.areas);
            let unit: Vec<f64> = f.areas.iter().map(|x| x / l).collect();
            within(max_rel(&unit, a), tol.recover_areas)
        }
        _ => flag(false),
    };
    checks.push((Property::RecoverAreas, check));
}

fn closed_form_properties(
    s: &Simplex,
    g: &Matrix,
    areas: &[f64],
    rng: &mut ChaCha12Rng,
    tol: &Tolerances,
    ops: &mut OpCounter,
    checks: &mut Vec<(Property, Check)>,
) {
    let d = match DihedralSet::from_gram(g) {
        Ok(d) => d,
        Err(_) => {
            checks.push((Property::SineqDirect, flag(false)));
            return;
        }
    };
    let direct = areas[3] / areas[2];

    ops.hit("tetra_ratio_sineq");
    ops.hit("sine_ratio");
    match (tetra_ratio_sineq(&d), sine_ratio(g, 3, 3, 2, 2)) {
        (Ok(r), Ok(adj)) => {
            checks.push((Property::SineqDirect, within(rel(r, direct * direct), tol.sineq_direct)));
            checks.push((Property::SineqAdjugate, within(rel(r, adj), tol.sineq_adjugate)));
        }
        _ => {
            checks.push((Property::SineqDirect, flag(false)));
            checks.push((Property::SineqAdjugate, flag(false)));
        }
    }

    ops.hit("half_angle_ratios");
    let check = half_angle_ratios(&d).map(|r| within(rel(r.polar_form, direct), tol.polar_form));
    checks.push((Property::PolarForm, or_fail(check.map_err(|e| e.to_string()))));

    ops.hit("link_quantities");
    let positive = link_quantities(&d)
        .map(|l| l.link_excess.iter().chain(&l.polar_excess).all(|x| *x > 0.0))
        .unwrap_or(false);
    checks.push((Property::LinkPositivity, flag(positive)));

    checks.push((Property::LinkFlattening, flag(flattening_is_monotone(s, rng))));
}

/// Slides vertex `j` along a straight line to an interior point of the
/// opposite face; the solid angle at another vertex `i` of that face must
/// shrink monotonically to zero.
fn flattening_is_monotone(s: &Simplex, rng: &mut ChaCha12Rng) -> bool {
    let i = rng.random_range(0..4usize);
    let j = (i + 1 + rng.random_range(0..3usize)) % 4;
    let face = s.face_vertices(j);
    let mut weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..=1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let target: Vec<f64> = (0..3)
        .map(|r| face.iter().zip(&weights).map(|(p, w)| p[r] * w).sum())
        .collect();
    let start = s.vertex(j).to_vec();

    let mut last = f64::INFINITY;
    let mut first = None;
    for t in [1.0, 0.75, 0.5, 0.25, 1e-3] {
        let mut verts = s.vertices().to_vec();
        verts[j] = (0..3).map(|r| target[r] + t * (start[r] - target[r])).collect();
        // the flattened vertex's polar excess rounds to zero near t = 0, so
        // read S_i off the dihedral angles rather than the full link report
        let excess = build_simplex(verts)
            .ok()
            .and_then(|t| gram_matrix(&t).ok())
            .and_then(|g| DihedralSet::from_gram(&g).ok())
            .map(|d| d.link_excess(i));
        let Some(x) = excess else { return false };
        if !(x < last) {
            return false;
        }
        first.get_or_insert(x);
        last = x;
    }
    first.is_some_and(|f| last <= 0.1 * f)
}

#[derive(Default)]
struct Accumulator {
    trials: usize,
    failures: usize,
    worst: Option<(f64, CaseRef)>,
    first_failure: Option<CaseRef>,
}

/// Runs every property over every trial of every spec. Trials run in
/// parallel; aggregation walks them in `(spec, index)` order, so the report
/// is identical across runs.
pub fn run_property_suite(specs: &[RandomSpec], tol: &Tolerances) -> Result<SuiteReport, HarnessError> {
    for s in specs {
        s.validate()?;
    }
    let jobs: Vec<(usize, usize)> = specs
        .iter()
        .enumerate()
        .flat_map(|(k, s)| (0..s.trials).map(move |i| (k, i)))
        .collect();
    let outcomes: Vec<TrialOutcome> = jobs
        .par_iter()
        .map(|&(k, i)| run_trial(&specs[k], i, tol))
        .collect();

    let mut summaries: Vec<SpecSummary> = specs
        .iter()
        .map(|s| SpecSummary {
            spec: *s,
            accepted: 0,
            redraws: 0,
            rejected: 0,
            first_rejection: None,
        })
        .collect();
    let mut acc: BTreeMap<Property, Accumulator> = BTreeMap::new();
    let mut op_calls: BTreeMap<String, u64> = BTreeMap::new();

    for (&(k, index), out) in jobs.iter().zip(outcomes) {
        let case = CaseRef {
            spec: k,
            dimension: specs[k].dimension,
            seed: specs[k].seed,
            index,
        };
        summaries[k].redraws += out.redraws;
        match out.rejection {
            Some(msg) => {
                summaries[k].rejected += 1;
                summaries[k]
                    .first_rejection
                    .get_or_insert_with(|| format!("index {index}: {msg}"));
            }
            None => summaries[k].accepted += 1,
        }
        for (p, c) in out.checks {
            let a = acc.entry(p).or_default();
            a.trials += 1;
            if !c.pass {
                a.failures += 1;
                a.first_failure.get_or_insert(case);
            }
            if a.worst.is_none_or(|(w, _)| c.residual > w) {
                a.worst = Some((c.residual, case));
            }
        }
        for (name, count) in out.ops.0 {
            *op_calls.entry(name.to_string()).or_default() += count;
        }
    }

    let properties: Vec<PropertyRecord> = acc
        .into_iter()
        .map(|(p, a)| PropertyRecord {
            name: p.name().to_string(),
            tolerance: tolerance_of(p, tol),
            trials: a.trials,
            failures: a.failures,
            worst_residual: a.worst.map_or(0.0, |w| w.0),
            worst_case: a.worst.map(|w| w.1),
            first_failure: a.first_failure,
        })
        .collect();
    let overall_pass = properties.iter().all(|p| p.failures == 0);
    Ok(SuiteReport {
        tolerances: *tol,
        specs: summaries,
        properties,
        op_calls,
        overall_pass,
    })
}

fn tolerance_of(p: Property, t: &Tolerances) -> Option<f64> {
    use Property::*;
    Some(match p {
        MinkowskiClosure => t.minkowski,
        CayleyMengerOracle => t.oracle_area,
        GramSignature => t.gram_null_eigen,
        NullSpace => t.null_space,
        Rank1Adjugate => t.rank1,
        CConsistency => t.c_consistency,
        AreaVector => t.area_vector,
        Multisine => t.multisine,
        VerifyPass => t.verify,
        ClassicalSines => t.classical,
        TriangleIdentity => t.triangle,
        Shadow => t.shadow,
        RigidMotion => t.rigid,
        Scaling => t.scaling,
        RecoverGram => t.recover_gram,
        RecoverShape => t.recover_shape,
        RecoverAreas => t.recover_areas,
        SineqDirect => t.sineq_direct,
        SineqAdjugate => t.sineq_adjugate,
        PolarForm => t.polar_form,
        CramerRule => t.cramer,
        AdjugateTranspose => t.adjugate_transpose,
        OuterAction => t.outer_action,
        Rank1Spectrum => t.rank1_spectrum,
        CTheorem => t.c_theorem,
        LinkPositivity | LinkFlattening => return None,
    })
}
