//! Frequency response of transfer functions along `s = jω`.
//!
//! With `a = 0, b = ω` the companion matrix becomes `[[0, 1], [-ω², 0]]`, so
//! each recursion step costs a single multiplication, and the real and
//! imaginary parts come out as
//!
//! ```text
//! [u; v] = [[0, 1], [ω, 0]] z_α + [[-ω, 0], [0, 1]] z_β
//! ```
//!
//! All quantities here stay in natural units (absolute magnitude, radians).

use crate::error::{Error, Result};
use crate::horner::{eval, quadratic_form, CoefficientKind, EvalResult, OpCounter, PolySpec};
use crate::rotation::{wrap_angle, ComplexPoint};

/// `H(s) = K·q(s)/p(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunctionSpec {
    pub numerator: PolySpec,
    pub denominator: PolySpec,
    pub gain: f64,
}

impl TransferFunctionSpec {
    pub fn new(numerator: PolySpec, denominator: PolySpec, gain: f64) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidPolynomial(
                "denominator is identically zero".into(),
            ));
        }
        if !gain.is_finite() {
            return Err(Error::NonFinite("gain"));
        }
        Ok(TransferFunctionSpec {
            numerator,
            denominator,
            gain,
        })
    }

    /// Unity-gain transfer function from real descending-power coefficients.
    pub fn from_real(numerator: &[f64], denominator: &[f64]) -> Result<Self> {
        Self::new(
            PolySpec::real(numerator.to_vec())?,
            PolySpec::real(denominator.to_vec())?,
            1.0,
        )
    }

    /// `deg q ≤ deg p`, ignoring leading zeros.
    pub fn is_proper(&self) -> bool {
        self.numerator.trimmed().degree() <= self.denominator.trimmed().degree()
    }
}

/// `|H(jω)|`, `φ(ω)` and the Cartesian parts of `H(jω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseValue {
    pub magnitude: f64,
    /// Radians in `(-π, π]`.
    pub phase: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySample {
    pub omega: f64,
    pub u_q: f64,
    pub v_q: f64,
    pub u_p: f64,
    pub v_p: f64,
    /// `None` when the denominator vanishes at this frequency.
    pub response: Option<ResponseValue>,
}

impl FrequencySample {
    pub fn is_pole(&self) -> bool {
        self.response.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    omega_min: f64,
    omega_max: f64,
    points: usize,
    scale: GridScale,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, points: usize, scale: GridScale) -> Result<Self> {
        if !omega_min.is_finite() || !omega_max.is_finite() {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if points == 0 {
            return Err(Error::InvalidGrid("at least one point is required".into()));
        }
        if omega_min > omega_max {
            return Err(Error::InvalidGrid(format!(
                "omega_min {omega_min} exceeds omega_max {omega_max}"
            )));
        }
        if scale == GridScale::Log && omega_min <= 0.0 {
            return Err(Error::InvalidGrid("log grids need omega_min > 0".into()));
        }
        Ok(FrequencyGrid {
            omega_min,
            omega_max,
            points,
            scale,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Ascending frequencies, both endpoints included.
    pub fn omegas(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.omega_min];
        }
        let last = (n - 1) as f64;
        let mut out: Vec<f64> = match self.scale {
            GridScale::Linear => {
                let step = (self.omega_max - self.omega_min) / last;
                (0..n).map(|i| self.omega_min + i as f64 * step).collect()
            }
            GridScale::Log => {
                let (lo, hi) = (self.omega_min.log10(), self.omega_max.log10());
                let step = (hi - lo) / last;
                (0..n).map(|i| 10f64.powf(lo + i as f64 * step)).collect()
            }
        };
        out[0] = self.omega_min;
        out[n - 1] = self.omega_max;
        out
    }
}

/// Evaluate `poly` at `s = jω` with the specialized extraction matrices.
/// Real-coefficient polynomials skip the `β` recursion entirely; `ω = 0`
/// falls back to real Horner at the origin.
pub fn eval_jomega(poly: &PolySpec, omega: f64) -> Result<EvalResult> {
    let point = ComplexPoint::jomega(omega)?;
    if omega == 0.0 {
        return Ok(eval(poly, point));
    }
    let mut ops = OpCounter::default();
    let omega_sq = omega * omega;
    ops.count_mul(1);

    let step = |coeffs: &[f64], ops: &mut OpCounter| -> [f64; 2] {
        let mut rest = coeffs.iter();
        let mut z = [0.0, *rest.next().expect("non-empty coefficients")];
        for &c in rest {
            z = [z[1], c - omega_sq * z[0]];
            ops.count_mul(1);
            ops.count_add(1);
        }
        z
    };

    let z_alpha = step(poly.alpha(), &mut ops);
    match poly.kind() {
        CoefficientKind::Real => {
            ops.count_mul(1);
            Ok(EvalResult {
                u: z_alpha[1],
                v: omega * z_alpha[0],
                z_alpha,
                z_beta: [0.0, 0.0],
                ops,
            })
        }
        CoefficientKind::Complex => {
            let z_beta = step(poly.beta(), &mut ops);
            ops.count_mul(2);
            ops.count_add(2);
            Ok(EvalResult {
                u: z_alpha[1] - omega * z_beta[0],
                v: omega * z_alpha[0] + z_beta[1],
                z_alpha,
                z_beta,
                ops,
            })
        }
    }
}

/// The 4×4 quadratic form of `|p(jω)|²` over `[z_α; z_β]`.
pub fn jomega_block(omega: f64) -> [[f64; 4]; 4] {
    let w2 = omega * omega;
    [
        [w2, 0.0, 0.0, omega],
        [0.0, 1.0, -omega, 0.0],
        [0.0, -omega, w2, 0.0],
        [omega, 0.0, 0.0, 1.0],
    ]
}

/// `|p(jω)|²`. Complex coefficients use the 4×4 block form, real ones the
/// reduced `z_αᵀ diag(ω², 1) z_α`.
pub fn abs_squared_jomega(poly: &PolySpec, omega: f64) -> Result<f64> {
    let r = eval_jomega(poly, omega)?;
    if omega == 0.0 {
        return Ok(r.norm_sqr());
    }
    let (za, zb) = (r.z_alpha, r.z_beta);
    let m = match poly.kind() {
        CoefficientKind::Real => omega * omega * za[0] * za[0] + za[1] * za[1],
        CoefficientKind::Complex => {
            quadratic_form(&jomega_block(omega), [za[0], za[1], zb[0], zb[1]])
        }
    };
    Ok(m.max(0.0))
}

/// `p(jω) + p*(-jω)`: `2([0 1] z_α + [-ω 0] z_β)`, or `[0 2] z_α` for real
/// coefficients.
pub fn conj_sum_jomega(poly: &PolySpec, omega: f64) -> Result<f64> {
    let r = eval_jomega(poly, omega)?;
    if omega == 0.0 {
        return Ok(2.0 * r.u);
    }
    let (za, zb) = (r.z_alpha, r.z_beta);
    Ok(match poly.kind() {
        CoefficientKind::Real => 2.0 * za[1],
        CoefficientKind::Complex => 2.0 * (za[1] - omega * zb[0]),
    })
}

fn sample_at(tf: &TransferFunctionSpec, omega: f64) -> Result<(FrequencySample, OpCounter)> {
    let q = eval_jomega(&tf.numerator, omega)?;
    let p = eval_jomega(&tf.denominator, omega)?;
    let ops = q.ops + p.ops;
    let den = p.norm_sqr();
    let mut sample = FrequencySample {
        omega,
        u_q: q.u,
        v_q: q.v,
        u_p: p.u,
        v_p: p.v,
        response: None,
    };
    if den <= f64::MIN_POSITIVE {
        return Ok((sample, ops));
    }

    let magnitude = tf.gain.abs() * (q.norm_sqr() / den).sqrt();
    // arg(q·p*) keeps the quadrant that a bare arctangent of the ratio loses
    let cross = p.u * q.v - q.u * p.v;
    let dot = p.u * q.u + q.v * p.v;
    let mut phase = cross.atan2(dot);
    if tf.gain < 0.0 {
        phase += std::f64::consts::PI;
    }
    phase = wrap_angle(phase);
    sample.response = Some(ResponseValue {
        magnitude,
        phase,
        re: magnitude * phase.cos(),
        im: magnitude * phase.sin(),
    });
    Ok((sample, ops))
}

/// `H(jω)` at a single frequency.
pub fn response_at(tf: &TransferFunctionSpec, omega: f64) -> Result<FrequencySample> {
    let (sample, _) = sample_at(tf, omega)?;
    if sample.is_pole() {
        return Err(Error::PoleOnGrid(omega));
    }
    Ok(sample)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub samples: Vec<FrequencySample>,
    /// Summed numerator and denominator evaluation costs over all samples.
    pub ops: OpCounter,
}

/// One sample per grid frequency. Poles are flagged (`response = None`)
/// rather than aborting the sweep.
pub fn sweep(tf: &TransferFunctionSpec, grid: &FrequencyGrid) -> Sweep {
    let mut ops = OpCounter::default();
    let samples = grid
        .omegas()
        .into_iter()
        .map(|w| {
            let (s, o) = sample_at(tf, w).expect("grid frequencies are finite");
            ops += o;
            s
        })
        .collect();
    Sweep { samples, ops }
}

/// Per-frequency cost claimed for the matrix method: `2(n+4)` real
/// multiplications and `2(n+1)` additions.
pub fn predicted_ops(n: usize, _kind: CoefficientKind) -> OpCounter {
    let n = n as u64;
    OpCounter::new(2 * (n + 4), 2 * (n + 1))
}

/// Per-frequency cost quoted for conventional complex evaluation:
/// `6(n+1)+2` multiplications and `2(n+1)` additions.
pub fn baseline_ops(n: usize) -> OpCounter {
    let n = n as u64;
    OpCounter::new(6 * (n + 1) + 2, 2 * (n + 1))
}

/// Textbook evaluation in complex arithmetic: accumulate `γ_l · s^(n-l)`
/// while stepping the power `s^k` by one complex multiplication per term.
///
/// A complex×complex product costs 4 multiplications and 2 additions; a
/// real coefficient times a complex power costs 2 multiplications.
pub fn conventional_eval(poly: &PolySpec, omega: f64) -> Result<EvalResult> {
    ComplexPoint::jomega(omega)?;
    let (sr, si) = (0.0, omega);
    let kind = poly.kind();
    let mut ops = OpCounter::default();

    let (mut pr, mut pi) = (1.0, 0.0);
    let (mut ur, mut ui) = (0.0, 0.0);
    let n = poly.degree();
    for k in 0..=n {
        let (alpha, beta) = (poly.alpha()[n - k], poly.beta()[n - k]);
        let (tr, ti) = match kind {
            CoefficientKind::Real => {
                ops.count_mul(2);
                (alpha * pr, alpha * pi)
            }
            CoefficientKind::Complex => {
                ops.count_mul(4);
                ops.count_add(2);
                (alpha * pr - beta * pi, alpha * pi + beta * pr)
            }
        };
        ur += tr;
        ui += ti;
        ops.count_add(2);
        if k < n {
            let next = (pr * sr - pi * si, pr * si + pi * sr);
            (pr, pi) = next;
            ops.count_mul(4);
            ops.count_add(2);
        }
    }
    Ok(EvalResult {
        u: ur,
        v: ui,
        z_alpha: [0.0, 0.0],
        z_beta: [0.0, 0.0],
        ops,
    })
}
