//! Command implementations for the `rotpoly` binary.
//!
//! Inputs are JSON system documents tagged by `kind`; outputs are CSV tables
//! (or a `transfer_function` document for the conversion commands) written
//! as strings so the binary only has to route them to stdout/stderr.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::freqresp::{
    baseline_ops, eval_jomega, predicted_ops, sweep, FrequencyGrid, GridScale, TransferFunctionSpec,
};
use crate::horner::{self, eval, eval_derivative, CoefficientKind, PolySpec};
use crate::poly2d::{check_separable, eval2d, response2d, Poly2DSpec};
use crate::rotation::ComplexPoint;
use crate::sysmodel::{leverrier, mat_pow, tc_to_tf, StateSpace, TimeConstantForm};

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or arguments; exit status 1.
    #[error("{0}")]
    Parse(String),
    /// A well-formed request that hits a numerical domain error; exit status 2.
    #[error(transparent)]
    Domain(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

/// Coefficients given either as a bare real list or split into parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyField {
    Real(Vec<f64>),
    Parts {
        coeff_real: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeff_imag: Option<Vec<f64>>,
    },
}

impl PolyField {
    fn to_poly(&self) -> Result<PolySpec, CliError> {
        match self {
            PolyField::Real(c) => PolySpec::real(c.clone()),
            PolyField::Parts {
                coeff_real,
                coeff_imag: None,
            } => PolySpec::real(coeff_real.clone()),
            PolyField::Parts {
                coeff_real,
                coeff_imag: Some(im),
            } => PolySpec::new(coeff_real.clone(), im.clone()),
        }
        .map_err(parse_err)
    }

    fn from_poly(p: &PolySpec) -> PolyField {
        match p.kind() {
            CoefficientKind::Real => PolyField::Real(p.alpha().to_vec()),
            CoefficientKind::Complex => PolyField::Parts {
                coeff_real: p.alpha().to_vec(),
                coeff_imag: Some(p.beta().to_vec()),
            },
        }
    }
}

/// `B` as a flat list or as an n×1 column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorField {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

impl VectorField {
    fn flatten(&self) -> Result<Vec<f64>, CliError> {
        match self {
            VectorField::Flat(v) => Ok(v.clone()),
            VectorField::Nested(rows) => {
                if rows.len() == 1 {
                    return Ok(rows[0].clone());
                }
                if rows.iter().any(|r| r.len() != 1) {
                    return Err(CliError::Parse(
                        "vector must be a flat list, a single row or a single column".into(),
                    ));
                }
                Ok(rows.iter().map(|r| r[0]).collect())
            }
        }
    }
}

fn default_gain() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemDocument {
    Polynomial {
        coeff_real: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coeff_imag: Option<Vec<f64>>,
    },
    TransferFunction {
        numerator: PolyField,
        denominator: PolyField,
        #[serde(default = "default_gain")]
        gain: f64,
    },
    TimeConstants {
        numerator: Vec<f64>,
        denominator: Vec<f64>,
    },
    StateSpace {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: VectorField,
        #[serde(rename = "C")]
        c: VectorField,
    },
    Poly2d {
        #[serde(rename = "P")]
        p: Vec<Vec<f64>>,
        #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
        q: Option<Vec<Vec<f64>>>,
    },
}

impl SystemDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid document: {e}")))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SystemDocument::Polynomial { .. } => "polynomial",
            SystemDocument::TransferFunction { .. } => "transfer_function",
            SystemDocument::TimeConstants { .. } => "time_constants",
            SystemDocument::StateSpace { .. } => "state_space",
            SystemDocument::Poly2d { .. } => "poly2d",
        }
    }

    pub fn from_transfer_function(tf: &TransferFunctionSpec) -> Self {
        SystemDocument::TransferFunction {
            numerator: PolyField::from_poly(&tf.numerator),
            denominator: PolyField::from_poly(&tf.denominator),
            gain: tf.gain,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("documents serialize");
        s.push('\n');
        s
    }

    fn wrong_kind(&self, expected: &str) -> CliError {
        CliError::Parse(format!(
            "expected a {expected} document, got kind {}",
            self.kind()
        ))
    }

    fn polynomial(&self) -> Result<PolySpec, CliError> {
        match self {
            SystemDocument::Polynomial {
                coeff_real,
                coeff_imag,
            } => PolyField::Parts {
                coeff_real: coeff_real.clone(),
                coeff_imag: coeff_imag.clone(),
            }
            .to_poly(),
            other => Err(other.wrong_kind("polynomial")),
        }
    }

    fn state_space(&self) -> Result<StateSpace, CliError> {
        match self {
            SystemDocument::StateSpace { a, b, c } => {
                StateSpace::from_rows(a, &b.flatten()?, &c.flatten()?).map_err(parse_err)
            }
            other => Err(other.wrong_kind("state_space")),
        }
    }

    fn time_constants(&self) -> Result<TimeConstantForm, CliError> {
        match self {
            SystemDocument::TimeConstants {
                numerator,
                denominator,
            } => TimeConstantForm::new(numerator.clone(), denominator.clone()).map_err(parse_err),
            other => Err(other.wrong_kind("time_constants")),
        }
    }

    /// Any document describing a SISO system, converted to `K·q/p`.
    pub fn transfer_function(
        &self,
        diagnostics: &mut Vec<String>,
    ) -> Result<TransferFunctionSpec, CliError> {
        let tf = match self {
            SystemDocument::TransferFunction {
                numerator,
                denominator,
                gain,
            } => TransferFunctionSpec::new(numerator.to_poly()?, denominator.to_poly()?, *gain)
                .map_err(parse_err)?,
            SystemDocument::TimeConstants { .. } => tc_to_tf(&self.time_constants()?),
            SystemDocument::StateSpace { .. } => {
                leverrier(&self.state_space()?).transfer_function()
            }
            other => {
                return Err(other.wrong_kind("transfer_function, time_constants or state_space"))
            }
        };
        if !tf.is_proper() {
            diagnostics.push("warning: numerator degree exceeds denominator degree".into());
        }
        Ok(tf)
    }
}

/// Shortest representation that parses back to the identical `f64`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub stdout: String,
    pub diagnostics: Vec<String>,
}

fn csv_row(out: &mut String, cells: impl IntoIterator<Item = String>) {
    let line = cells.into_iter().collect::<Vec<_>>().join(",");
    out.push_str(&line);
    out.push('\n');
}

pub fn parse_point(s: &str) -> Result<ComplexPoint, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected a point as a,b but got {s:?}"))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|e| format!("bad real part {re:?}: {e}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
    ComplexPoint::new(re, im).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub derivative: bool,
    pub reciprocal: bool,
}

/// One row: `u, v, abs_sq, conj_sum, conj_diff_imag`, plus the derivative
/// and reciprocal when requested.
pub fn cmd_eval(
    doc: &SystemDocument,
    point: ComplexPoint,
    opts: EvalOptions,
) -> Result<CommandOutput, CliError> {
    let poly = doc.polynomial()?;
    let r = eval(&poly, point);
    let conj = horner::conjugate_products(&poly, point);

    let mut header = vec!["u", "v", "abs_sq", "conj_sum", "conj_diff_imag"];
    let mut row = vec![r.u, r.v, conj.abs_squared, conj.sum, conj.diff_imag];
    if opts.derivative {
        let d = eval_derivative(&poly, point);
        header.extend(["du", "dv"]);
        row.extend([d.u, d.v]);
    }
    if opts.reciprocal {
        let inv = horner::reciprocal(&poly, point)?;
        header.extend(["recip_re", "recip_im"]);
        row.extend([inv.re, inv.im]);
    }

    let mut out = String::new();
    csv_row(&mut out, header.into_iter().map(String::from));
    csv_row(&mut out, row.into_iter().map(fmt_num));
    Ok(CommandOutput {
        stdout: out,
        diagnostics: vec![],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseFormat {
    Nyquist,
    Bode,
}

/// Frequency sweep as CSV. Nyquist columns: `omega, re, im, mag,
/// phase_rad`; Bode columns: `omega, mag_db, phase_deg`. Rows at poles keep
/// `omega` and leave the other cells empty.
pub fn cmd_freqresp(
    doc: &SystemDocument,
    grid: &FrequencyGrid,
    format: ResponseFormat,
) -> Result<CommandOutput, CliError> {
    let mut diagnostics = vec![];
    let tf = doc.transfer_function(&mut diagnostics)?;
    let sw = sweep(&tf, grid);

    let mut out = String::new();
    let header: &[&str] = match format {
        ResponseFormat::Nyquist => &["omega", "re", "im", "mag", "phase_rad"],
        ResponseFormat::Bode => &["omega", "mag_db", "phase_deg"],
    };
    csv_row(&mut out, header.iter().map(|h| h.to_string()));
    let mut poles = 0;
    for s in &sw.samples {
        let mut cells = vec![fmt_num(s.omega)];
        match (s.response, format) {
            (Some(r), ResponseFormat::Nyquist) => {
                cells.extend([r.re, r.im, r.magnitude, r.phase].map(fmt_num));
            }
            (Some(r), ResponseFormat::Bode) => {
                cells.extend([20.0 * r.magnitude.log10(), r.phase.to_degrees()].map(fmt_num));
            }
            (None, _) => {
                poles += 1;
                cells.extend(std::iter::repeat_n(String::new(), header.len() - 1));
            }
        }
        csv_row(&mut out, cells);
    }
    if poles > 0 {
        diagnostics.push(format!("{poles} sample(s) fall on a pole"));
    }
    Ok(CommandOutput {
        stdout: out,
        diagnostics,
    })
}

/// Measured per-frequency cost of the `s = jω` recursion against the
/// claimed `2(n+4)`/`2(n+1)` and the conventional `6(n+1)+2`/`2(n+1)`.
/// Coefficients and frequencies come from a seeded generator.
pub fn cmd_opcount(
    n_min: usize,
    n_max: usize,
    kind: CoefficientKind,
    seed: u64,
) -> Result<CommandOutput, CliError> {
    if n_min > n_max {
        return Err(CliError::Parse(format!(
            "empty degree range {n_min}..={n_max}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    csv_row(
        &mut out,
        [
            "n",
            "measured_mults",
            "measured_adds",
            "predicted_mults",
            "predicted_adds",
            "baseline_mults",
            "baseline_adds",
        ]
        .map(String::from),
    );
    for n in n_min..=n_max {
        let mut coeffs = || {
            (0..=n)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect::<Vec<f64>>()
        };
        let alpha = coeffs();
        let beta = match kind {
            CoefficientKind::Real => vec![0.0; n + 1],
            CoefficientKind::Complex => coeffs(),
        };
        let poly = PolySpec::new(alpha, beta)?;
        let omega = rng.random_range(0.1..10.0);
        let measured = eval_jomega(&poly, omega)?.ops;
        let predicted = predicted_ops(n, kind);
        let baseline = baseline_ops(n);
        csv_row(
            &mut out,
            [
                n as u64,
                measured.mults,
                measured.adds,
                predicted.mults,
                predicted.adds,
                baseline.mults,
                baseline.adds,
            ]
            .map(|x| x.to_string()),
        );
    }
    Ok(CommandOutput {
        stdout: out,
        diagnostics: vec![],
    })
}

/// `eta_p, theta_p, separable`, and when the document carries a numerator
/// `Q`: `eta_q, theta_q, mag, phase_rad, re, im` of `G = Q/P`.
pub fn cmd_eval2d(
    doc: &SystemDocument,
    s1: ComplexPoint,
    s2: ComplexPoint,
    tol: f64,
) -> Result<CommandOutput, CliError> {
    let (p, q) = match doc {
        SystemDocument::Poly2d { p, q } => (p, q),
        other => return Err(other.wrong_kind("poly2d")),
    };
    let p2d = Poly2DSpec::new(p.clone()).map_err(parse_err)?;
    let q2d = q
        .as_ref()
        .map(|q| Poly2DSpec::new(q.clone()))
        .transpose()
        .map_err(parse_err)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Parse(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let rp = eval2d(&p2d, s1, s2);
    let separable = match check_separable(&p2d, tol) {
        Ok(f) => f.is_some(),
        Err(Error::ZeroMatrix) => false,
        Err(e) => return Err(e.into()),
    };
    let mut header = vec!["eta_p", "theta_p", "separable"];
    let mut row = vec![
        fmt_num(rp.eta_p),
        fmt_num(rp.theta_p),
        u8::from(separable).to_string(),
    ];
    if let Some(q2d) = q2d {
        let rq = eval2d(&q2d, s1, s2);
        let g = response2d(&q2d, &p2d, s1, s2)?;
        header.extend(["eta_q", "theta_q", "mag", "phase_rad", "re", "im"]);
        row.extend([rq.eta_p, rq.theta_p, g.magnitude, g.phase, g.re, g.im].map(fmt_num));
    }
    let mut out = String::new();
    csv_row(&mut out, header.into_iter().map(String::from));
    csv_row(&mut out, row);
    Ok(CommandOutput {
        stdout: out,
        diagnostics: vec![],
    })
}

#[derive(Debug, Deserialize)]
struct MatrixDocument {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
}

/// Matrix input for `matpow`: a document with an `A` field, or a bare
/// nested array.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let rows: Vec<Vec<f64>> = match serde_json::from_str::<MatrixDocument>(text) {
        Ok(doc) => doc.a,
        Err(_) => serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("invalid matrix: {e}")))?,
    };
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Parse(
            "matrix rows must be non-empty and of equal length".into(),
        ));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(DMatrix::from_row_slice(n, m, &flat))
}

/// `A^ρ` as CSV, one matrix row per line under a `c0, c1, ...` header.
pub fn cmd_matpow(a: &DMatrix<f64>, rho: i64) -> Result<CommandOutput, CliError> {
    let r = mat_pow(a, rho)?;
    let mut out = String::new();
    csv_row(&mut out, (0..r.matrix.ncols()).map(|j| format!("c{j}")));
    for row in r.matrix.row_iter() {
        csv_row(&mut out, row.iter().map(|&x| fmt_num(x)));
    }
    Ok(CommandOutput {
        stdout: out,
        diagnostics: vec![format!("matrix multiplications: {}", r.multiplications)],
    })
}

pub fn cmd_ss2tf(doc: &SystemDocument) -> Result<CommandOutput, CliError> {
    let ss = doc.state_space()?;
    let lev = leverrier(&ss);
    let tf = lev.transfer_function();
    Ok(CommandOutput {
        stdout: SystemDocument::from_transfer_function(&tf).to_json(),
        diagnostics: vec![format!(
            "closure residual |A F_n + p_n I| = {:e}",
            lev.closure_residual
        )],
    })
}

pub fn cmd_tc2tf(doc: &SystemDocument) -> Result<CommandOutput, CliError> {
    let form = doc.time_constants()?;
    let mut diagnostics = vec![];
    if !form.is_proper() {
        diagnostics.push("warning: more numerator than denominator time constants".into());
    }
    let tf = tc_to_tf(&form);
    Ok(CommandOutput {
        stdout: SystemDocument::from_transfer_function(&tf).to_json(),
        diagnostics,
    })
}

pub fn grid_from_flags(
    omega_min: f64,
    omega_max: f64,
    points: usize,
    scale: GridScale,
) -> Result<FrequencyGrid, CliError> {
    FrequencyGrid::new(omega_min, omega_max, points, scale).map_err(parse_err)
}
