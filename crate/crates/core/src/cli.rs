//! Command-line front end: input documents, subcommands and report writers.
//!
//! Reports go to the output stream and diagnostics to the error stream.
//! Exit codes: 0 success, 1 a verification or realizability failure,
//! 2 invalid input or usage.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::closedform::{half_angle_ratios, link_quantities, tetra_ratio_sineq, DihedralSet};
use crate::harness::{run_property_suite, RandomSpec, SuiteReport, Tolerances};
use crate::matrix::{cofactor_matrix, Matrix, DEFAULT_NULL_TOL};
use crate::recover::{simplex_from_gram, validate_gram, RealizabilityReport, RecoverError};
use crate::report::{sig9, sig9_list, to_json};
use crate::simplex::{build_simplex, face_geometry, gram_matrix, Simplex};
use crate::sines::{gram_rank1_report, sine_ratio, verify_simplex, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Relative slack allowed between `polar_form` and the measured area ratio.
pub const POLAR_FORM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: InputError },
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("document must contain exactly one of `vertices` or `gram`")]
    AmbiguousForm,
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// A parsed input file: either simplex vertices or a normal Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum InputDocument {
    Vertices {
        label: Option<String>,
        dimension: usize,
        vertices: Vec<Vec<f64>>,
    },
    Gram {
        label: Option<String>,
        gram: Matrix,
    },
}

impl InputDocument {
    pub fn label(&self) -> Option<&str> {
        match self {
            Self::Vertices { label, .. } | Self::Gram { label, .. } => label.as_deref(),
        }
    }
}

fn number_rows(v: &Value, field: &str) -> Result<Vec<Vec<f64>>, InputError> {
    let rows = v
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array of arrays"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let name = format!("{field}[{i}]");
            row.as_array()
                .ok_or_else(|| field_err(&name, "expected an array of numbers"))?
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_f64()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| field_err(format!("{name}[{j}]"), "expected a finite number"))
                })
                .collect()
        })
        .collect()
}

/// Parses and shape-checks an input document.
pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| InputError::Syntax("top level must be an object".into()))?;
    if let Some(k) = obj
        .keys()
        .find(|k| !["dimension", "vertices", "gram", "label"].contains(&k.as_str()))
    {
        return Err(field_err(k.as_str(), "unknown field"));
    }
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(field_err("label", "expected a string")),
    };

    match (obj.get("vertices"), obj.get("gram")) {
        (Some(v), None) => {
            let dimension = obj
                .get("dimension")
                .ok_or_else(|| field_err("dimension", "required with `vertices`"))?
                .as_u64()
                .filter(|d| *d >= 1)
                .ok_or_else(|| field_err("dimension", "expected a positive integer"))?
                as usize;
            let vertices = number_rows(v, "vertices")?;
            if vertices.len() != dimension + 1 {
                return Err(field_err(
                    "vertices",
                    format!(
                        "expected {} points for dimension {dimension}, got {}",
                        dimension + 1,
                        vertices.len()
                    ),
                ));
            }
            if let Some((i, p)) = vertices.iter().enumerate().find(|(_, p)| p.len() != dimension) {
                return Err(field_err(
                    format!("vertices[{i}]"),
                    format!("expected {dimension} coordinates, got {}", p.len()),
                ));
            }
            Ok(InputDocument::Vertices {
                label,
                dimension,
                vertices,
            })
        }
        (None, Some(g)) => {
            if obj.contains_key("dimension") {
                return Err(field_err("dimension", "not allowed with `gram`"));
            }
            let rows = number_rows(g, "gram")?;
            let size = rows.len();
            if size == 0 {
                return Err(field_err("gram", "empty matrix"));
            }
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != size) {
                return Err(field_err(
                    format!("gram[{i}]"),
                    format!("expected {size} entries for a square matrix, got {}", r.len()),
                ));
            }
            let gram = Matrix::from_rows(&rows).map_err(|e| field_err("gram", e.to_string()))?;
            Ok(InputDocument::Gram { label, gram })
        }
        _ => Err(InputError::AmbiguousForm),
    }
}

#[derive(Debug, Parser)]
#[command(name = "simplex-sines", version, about = "Law of sines for simplices: analysis, verification and recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Face areas, normals, Gram matrix, adjugate and sine ratios
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check every identity of the sine law on one simplex
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a simplex and its areas from a normal Gram matrix
    Recover {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NULL_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Tetrahedron dihedral-angle formulas for the ratio of faces 4 and 3
    Closedform {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized property suite
    Fuzz {
        /// Inclusive dimension range, e.g. 2..8
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: usize = a.trim().parse().map_err(|_| format!("bad lower bound `{a}`"))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("bad upper bound `{b}`"))?;
    if lo < 2 || hi < lo {
        return Err(format!("need 2 <= a <= b, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn check_tol(tol: f64) -> Result<f64, CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Usage(format!("--tol must be a positive number, got {tol}")))
    }
}

fn load(path: &Path) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_input(&text).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn simplex_of(path: &Path, doc: &InputDocument, command: &str) -> Result<Simplex, CliError> {
    match doc {
        InputDocument::Vertices { vertices, .. } => {
            build_simplex(vertices.clone()).map_err(|e| CliError::Input {
                path: path.to_path_buf(),
                source: field_err("vertices", e.to_string()),
            })
        }
        InputDocument::Gram { .. } => Err(CliError::Input {
            path: path.to_path_buf(),
            source: field_err("gram", format!("`{command}` needs the vertices form")),
        }),
    }
}

fn geometry_failure(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        source: field_err("vertices", e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub label: Option<String>,
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    /// Face `i` is opposite vertex `i`.
    pub areas: Vec<f64>,
    pub normals: Vec<Vec<f64>>,
    pub gram: Matrix,
    pub adjugate: Matrix,
    /// Scale in `adjugate = c · a aᵗ` for the unit area vector `a`.
    pub c: f64,
    pub area_vector: Vec<f64>,
    /// `A_i / A_j` from the adjugate of the Gram matrix alone.
    pub area_ratios: Vec<Vec<f64>>,
}

pub fn analyze(s: &Simplex, label: Option<String>) -> Result<AnalyzeReport, String> {
    let faces = face_geometry(s).map_err(|e| e.to_string())?;
    let g = gram_matrix(s).map_err(|e| e.to_string())?;
    let adjugate = cofactor_matrix(&g).map_err(|e| e.to_string())?;
    let rank1 = gram_rank1_report(&g).map_err(|e| e.to_string())?;
    let size = s.dim() + 1;
    let mut area_ratios = vec![vec![0.0; size]; size];
    for (i, row) in area_ratios.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = sine_ratio(&g, i, i, j, j).map_err(|e| e.to_string())?.sqrt();
        }
    }
    Ok(AnalyzeReport {
        label,
        dimension: s.dim(),
        vertices: s.vertices().to_vec(),
        areas: faces.areas.to_vec(),
        normals: faces.normals.iter().map(|n| n.to_vec()).collect(),
        gram: g,
        adjugate,
        c: rank1.factorization.c,
        area_vector: rank1.factorization.left.to_vec(),
        area_ratios,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub label: Option<String>,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverOutput {
    pub label: Option<String>,
    pub realizable: bool,
    pub message: String,
    pub realizability: RealizabilityReport,
    /// Representative simplex, longest edge 1.
    pub vertices: Option<Vec<Vec<f64>>>,
    /// Unit area vector from the Gram null space.
    pub areas: Option<Vec<f64>>,
    pub edge_lengths: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedformOutput {
    pub label: Option<String>,
    /// `α12, α13, α14, α23, α24, α34` in radians.
    pub dihedral_angles: [f64; 6],
    /// `A_4² / A_3²` from the dihedral cosines.
    pub squared_ratio: f64,
    pub link_excess: [f64; 4],
    pub polar_excess: [f64; 4],
    pub link_form: f64,
    pub polar_form: f64,
    /// `A_4 / A_3` from coordinates, when vertices were given.
    pub measured_ratio: Option<f64>,
    pub polar_form_error: Option<f64>,
    /// `(link_form - polar_form) / polar_form`
    pub link_form_discrepancy: f64,
    pub note: String,
}

pub fn closedform(g: &Matrix, measured: Option<f64>, label: Option<String>) -> Result<ClosedformOutput, String> {
    let d = DihedralSet::from_gram(g).map_err(|e| e.to_string())?;
    let squared_ratio = tetra_ratio_sineq(&d).map_err(|e| e.to_string())?;
    let links = link_quantities(&d).map_err(|e| e.to_string())?;
    let h = half_angle_ratios(&d).map_err(|e| e.to_string())?;
    let discrepancy = (h.link_form - h.polar_form) / h.polar_form;
    let note = if discrepancy.abs() > POLAR_FORM_TOL {
        format!(
            "link_form (link excesses, half-angle cosines) differs from polar_form by {} relative; \
             polar_form (polar excesses, half-angle sines) is the one equal to A4/A3",
            sig9(discrepancy)
        )
    } else {
        "link_form and polar_form agree on this tetrahedron".to_string()
    };
    Ok(ClosedformOutput {
        label,
        dihedral_angles: d.as_array(),
        squared_ratio,
        link_excess: links.link_excess,
        polar_excess: links.polar_excess,
        link_form: h.link_form,
        polar_form: h.polar_form,
        measured_ratio: measured,
        polar_form_error: measured.map(|m| (h.polar_form - m).abs() / m),
        link_form_discrepancy: discrepancy,
        note,
    })
}

struct Outcome {
    text: String,
    pass: bool,
}

fn emit<T: Serialize>(json: bool, report: &T, human: impl FnOnce(&T) -> String, pass: bool) -> Result<Outcome, CliError> {
    let text = if json {
        to_json(report).map_err(|e| CliError::Usage(format!("serialization failed: {e}")))? + "\n"
    } else {
        human(report)
    };
    Ok(Outcome { text, pass })
}

fn heading(label: Option<&str>, what: &str) -> String {
    match label {
        Some(l) => format!("{what}: {l}\n"),
        None => format!("{what}\n"),
    }
}

fn matrix_lines(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let _ = writeln!(out, "  {:>3}  {}", i + 1, sig9_list(m.row(i)));
    }
}

fn human_analyze(r: &AnalyzeReport) -> String {
    let mut o = heading(r.label.as_deref(), "analyze");
    let _ = writeln!(o, "dimension {}", r.dimension);
    let _ = writeln!(o, "face  area             outward normal");
    for (i, (a, n)) in r.areas.iter().zip(&r.normals).enumerate() {
        let _ = writeln!(o, "  {:>3}  {:<15}  {}", i + 1, sig9(*a), sig9_list(n));
    }
    o.push_str("Gram matrix <f_i, f_j>\n");
    matrix_lines(&mut o, &r.gram);
    o.push_str("adjugate\n");
    matrix_lines(&mut o, &r.adjugate);
    let _ = writeln!(o, "c = {}", sig9(r.c));
    let _ = writeln!(o, "area vector  {}", sig9_list(&r.area_vector));
    o.push_str("sine-ratio table A_i / A_j\n");
    for (i, row) in r.area_ratios.iter().enumerate() {
        let _ = writeln!(o, "  {:>3}  {}", i + 1, sig9_list(row));
    }
    o
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn human_verify(v: &VerifyOutput) -> String {
    let r = &v.report;
    let c = &r.checks;
    let mut o = heading(v.label.as_deref(), "verify");
    let _ = writeln!(o, "tolerance {}", sig9(r.tolerance));
    let rows = [
        ("minkowski closure", c.minkowski, r.minkowski_residual),
        ("Gram null space", c.null_space, r.gram_null_residual),
        ("rank-1 adjugate", c.rank1, r.rank1_residual),
        ("sine ratios", c.ratios, r.max_ratio_error),
        ("c vs pseudo-determinant", c.c_consistency, r.c_mismatch),
    ];
    for (name, ok, res) in rows {
        let _ = writeln!(o, "  {name:<24} {}  residual {}", mark(ok), sig9(res));
    }
    let _ = writeln!(o, "  {:<24} {}", "adjugate entries > 0", mark(c.cofactors_positive));
    let _ = writeln!(o, "  {:<24} {}  c = {}", "c > 0", mark(c.c_positive), sig9(r.c_value));
    let _ = writeln!(
        o,
        "quadruples checked {}, skipped {}",
        r.quadruples_checked, r.quadruples_skipped
    );
    let _ = writeln!(o, "result: {}", mark(r.pass));
    o
}

fn human_recover(r: &RecoverOutput) -> String {
    let mut o = heading(r.label.as_deref(), "recover");
    let rz = &r.realizability;
    let _ = writeln!(o, "eigenvalues  {}", sig9_list(&rz.eigenvalues));
    let _ = writeln!(o, "eigen signature {}", rz.eigen_signature);
    if let (Some(v), Some(a)) = (&r.vertices, &r.areas) {
        let _ = writeln!(o, "area vector  {}", sig9_list(a));
        o.push_str("vertices (longest edge 1)\n");
        for (i, p) in v.iter().enumerate() {
            let _ = writeln!(o, "  {:>3}  {}", i + 1, sig9_list(p));
        }
    }
    let _ = writeln!(o, "{}", r.message);
    o
}

fn human_closedform(r: &ClosedformOutput) -> String {
    let mut o = heading(r.label.as_deref(), "closedform");
    let _ = writeln!(o, "dihedral angles α12 α13 α14 α23 α24 α34\n  {}", sig9_list(&r.dihedral_angles));
    let _ = writeln!(o, "A4²/A3² from dihedral cosines  {}", sig9(r.squared_ratio));
    let _ = writeln!(o, "link excess S_i   {}", sig9_list(&r.link_excess));
    let _ = writeln!(o, "polar excess E_i  {}", sig9_list(&r.polar_excess));
    let _ = writeln!(o, "link_form  {}", sig9(r.link_form));
    let _ = writeln!(o, "polar_form {}", sig9(r.polar_form));
    if let (Some(m), Some(e)) = (r.measured_ratio, r.polar_form_error) {
        let _ = writeln!(o, "measured A4/A3 {}  (polar_form error {})", sig9(m), sig9(e));
    }
    let _ = writeln!(o, "note: {}", r.note);
    o
}

fn human_fuzz(r: &SuiteReport) -> String {
    let mut o = String::from("property               trials  fail  worst residual  worst case (dim, index)\n");
    for p in &r.properties {
        let case = p
            .worst_case
            .map(|c| format!("({}, {})", c.dimension, c.index))
            .unwrap_or_default();
        let _ = writeln!(
            o,
            "{:<22} {:>6} {:>5}  {:<14}  {case}",
            p.name,
            p.trials,
            p.failures,
            sig9(p.worst_residual)
        );
    }
    let redraws: usize = r.specs.iter().map(|s| s.redraws).sum();
    let rejected: usize = r.specs.iter().map(|s| s.rejected).sum();
    let _ = writeln!(o, "redraws below conditioning floor: {redraws}");
    let _ = writeln!(o, "rejected draws: {rejected}");
    let _ = writeln!(o, "result: {}", mark(r.overall_pass));
    o
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Analyze { file, json } => {
            let doc = load(&file)?;
            let s = simplex_of(&file, &doc, "analyze")?;
            let r = analyze(&s, doc.label().map(String::from)).map_err(|e| geometry_failure(&file, e))?;
            emit(json, &r, human_analyze, true)
        }
        Command::Verify { file, tol, json } => {
            let tol = check_tol(tol)?;
            let doc = load(&file)?;
            let s = simplex_of(&file, &doc, "verify")?;
            let report = verify_simplex(&s, tol).map_err(|e| geometry_failure(&file, e))?;
            let pass = report.pass;
            let v = VerifyOutput {
                label: doc.label().map(String::from),
                report,
            };
            emit(json, &v, human_verify, pass)
        }
        Command::Recover { file, tol, json } => {
            let tol = check_tol(tol)?;
            let doc = load(&file)?;
            let g = match &doc {
                InputDocument::Gram { gram, .. } => gram.clone(),
                InputDocument::Vertices { .. } => {
                    let s = simplex_of(&file, &doc, "recover")?;
                    gram_matrix(&s).map_err(|e| geometry_failure(&file, e))?
                }
            };
            let realizability = validate_gram(&g, tol).map_err(|e| CliError::Input {
                path: file.clone(),
                source: field_err("gram", e.to_string()),
            })?;
            let (simplex, message) = match simplex_from_gram(&g, tol) {
                Ok(s) => (Some(s), "realizable".to_string()),
                Err(e @ RecoverError::NotRealizable(_)) => (None, e.to_string()),
                Err(e) => (None, format!("reconstruction failed: {e}")),
            };
            let out = RecoverOutput {
                label: doc.label().map(String::from),
                realizable: simplex.is_some(),
                message,
                areas: realizability.recovered_areas.as_ref().map(|a| a.to_vec()),
                realizability,
                vertices: simplex.as_ref().map(|s| s.vertices().to_vec()),
                edge_lengths: simplex.as_ref().map(|s| s.edge_lengths()),
            };
            let pass = out.realizable;
            emit(json, &out, human_recover, pass)
        }
        Command::Closedform { file, json } => {
            let doc = load(&file)?;
            let (g, measured) = match &doc {
                InputDocument::Gram { gram, .. } => (gram.clone(), None),
                InputDocument::Vertices { dimension, .. } => {
                    if *dimension != 3 {
                        return Err(CliError::Input {
                            path: file,
                            source: field_err("dimension", "closedform needs a tetrahedron (dimension 3)"),
                        });
                    }
                    let s = simplex_of(&file, &doc, "closedform")?;
                    let faces = face_geometry(&s).map_err(|e| geometry_failure(&file, e))?;
                    let g = gram_matrix(&s).map_err(|e| geometry_failure(&file, e))?;
                    (g, Some(faces.areas[3] / faces.areas[2]))
                }
            };
            let field = if measured.is_some() { "vertices" } else { "gram" };
            let r = closedform(&g, measured, doc.label().map(String::from)).map_err(|e| CliError::Input {
                path: file.clone(),
                source: field_err(field, e),
            })?;
            let pass = r.polar_form_error.is_none_or(|e| e <= POLAR_FORM_TOL);
            emit(json, &r, human_closedform, pass)
        }
        Command::Fuzz {
            dims,
            trials,
            seed,
            json,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be >= 1".into()));
            }
            let specs: Vec<RandomSpec> = (dims.0..=dims.1)
                .map(|d| RandomSpec::gaussian(d, seed, trials))
                .collect();
            let r = run_property_suite(&specs, &Tolerances::default()).map_err(|e| CliError::Usage(e.to_string()))?;
            let pass = r.overall_pass;
            emit(json, &r, human_fuzz, pass)
        }
    }
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_cli_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_INVALID,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(o) => {
            if let Err(e) = out.write_all(o.text.as_bytes()) {
                let _ = writeln!(err, "error: writing report: {e}");
                return EXIT_INVALID;
            }
            if o.pass {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let v = parse_input(r#"{"dimension": 2, "vertices": [[0,0],[1,0],[0,1]], "label": "t"}"#).unwrap();
        assert_eq!(v.label(), Some("t"));
        assert!(matches!(v, InputDocument::Vertices { dimension: 2, .. }));
        let g = parse_input(r#"{"gram": [[1,-0.5,-0.5],[-0.5,1,-0.5],[-0.5,-0.5,1]]}"#).unwrap();
        assert!(matches!(g, InputDocument::Gram { .. }));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let cases = [
            (r#"{"dimension": 2, "vertices": [[0,0],[1,0]]}"#, "`vertices`"),
            (r#"{"dimension": 2, "vertices": [[0,0],[1],[0,1]]}"#, "`vertices[1]`"),
            (r#"{"dimension": 2, "vertices": [[0,0],[1,"x"],[0,1]]}"#, "`vertices[1][1]`"),
            (r#"{"vertices": [[0,0],[1,0],[0,1]]}"#, "`dimension`"),
            (r#"{"gram": [[1,0],[0]]}"#, "`gram[1]`"),
            (r#"{"gram": [[1]], "colour": 1}"#, "`colour`"),
            (r#"{"gram": [[1]], "label": 3}"#, "`label`"),
        ];
        for (text, field) in cases {
            let e = parse_input(text).unwrap_err().to_string();
            assert!(e.contains(field), "{text} -> {e}");
        }
        assert_eq!(
            parse_input(r#"{"dimension": 1, "vertices": [[0],[1]], "gram": [[1]]}"#),
            Err(InputError::AmbiguousForm)
        );
        assert_eq!(parse_input("{}"), Err(InputError::AmbiguousForm));
        assert!(matches!(parse_input("[1"), Err(InputError::Syntax(_))));
    }

    #[test]
    fn dims_ranges() {
        assert_eq!(parse_dims("2..8"), Ok((2, 8)));
        assert_eq!(parse_dims("3..=5"), Ok((3, 5)));
        assert_eq!(parse_dims("4"), Ok((4, 4)));
        assert!(parse_dims("1..3").is_err());
        assert!(parse_dims("5..3").is_err());
    }
}
