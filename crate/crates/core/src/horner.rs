//! One-variable polynomial evaluation at a complex point with real arithmetic.
//!
//! For `p(s) = Σ α_l s^(n-l)` the companion recursion
//!
//! ```text
//! z_0 = (0, 0),   z_{l+1} = R_c z_l + α_l w,   w = (0, 1)
//! ```
//!
//! ends in `z_{n+1}` with `T z_{n+1} = (Re p(s), -Im p(s))`. A complex
//! coefficient list `γ_l = α_l + jβ_l` runs two such recursions over the same
//! `R_c` and combines them as `[u; v] = U T z_α + G T z_β` with
//! `U = diag(1, -1)` and `G` the 2×2 exchange matrix.
//!
//! Coefficients are in descending powers: `alpha[0]` multiplies `s^n`.
//!
//! Points on the real axis (`b = 0`) make `T` singular; there the evaluation
//! falls back to ordinary real Horner, which is exact and cheaper.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};
use crate::rotation::{companion, ComplexPoint, Mat2};

/// Real multiplications and additions/subtractions actually executed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounter {
    pub mults: u64,
    pub adds: u64,
}

impl OpCounter {
    pub fn new(mults: u64, adds: u64) -> Self {
        OpCounter { mults, adds }
    }

    #[inline]
    pub(crate) fn count_mul(&mut self, n: u64) {
        self.mults += n;
    }

    #[inline]
    pub(crate) fn count_add(&mut self, n: u64) {
        self.adds += n;
    }
}

impl Add for OpCounter {
    type Output = OpCounter;

    fn add(self, rhs: OpCounter) -> OpCounter {
        OpCounter::new(self.mults + rhs.mults, self.adds + rhs.adds)
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: OpCounter) {
        *self = *self + rhs;
    }
}

impl Sum for OpCounter {
    fn sum<I: Iterator<Item = OpCounter>>(iter: I) -> OpCounter {
        iter.fold(OpCounter::default(), Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    Real,
    Complex,
}

/// A polynomial `Σ (α_l + jβ_l) s^(n-l)` with descending-power coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl PolySpec {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidPolynomial("no coefficients".into()));
        }
        if alpha.len() != beta.len() {
            return Err(Error::InvalidPolynomial(format!(
                "{} real but {} imaginary coefficients",
                alpha.len(),
                beta.len()
            )));
        }
        if alpha.iter().chain(&beta).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("polynomial coefficients"));
        }
        Ok(PolySpec { alpha, beta })
    }

    pub fn real(alpha: Vec<f64>) -> Result<Self> {
        let beta = vec![0.0; alpha.len()];
        Self::new(alpha, beta)
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn kind(&self) -> CoefficientKind {
        if self.beta.iter().all(|&b| b == 0.0) {
            CoefficientKind::Real
        } else {
            CoefficientKind::Complex
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(|&c| c == 0.0)
    }

    /// Drop leading coefficients that are exactly zero, keeping at least one.
    pub fn trimmed(&self) -> PolySpec {
        let lead = (0..self.alpha.len() - 1)
            .find(|&i| self.alpha[i] != 0.0 || self.beta[i] != 0.0)
            .unwrap_or(self.alpha.len() - 1);
        PolySpec {
            alpha: self.alpha[lead..].to_vec(),
            beta: self.beta[lead..].to_vec(),
        }
    }

    /// Coefficients `ν_l = (n-l)γ_l`, `0 ≤ l ≤ n-1`, of `dp/ds`.
    fn derivative(&self, ops: &mut OpCounter) -> Result<PolySpec> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        let scale = |c: &[f64], ops: &mut OpCounter| -> Vec<f64> {
            ops.count_mul(n as u64);
            c[..n]
                .iter()
                .enumerate()
                .map(|(l, &x)| (n - l) as f64 * x)
                .collect()
        };
        let alpha = scale(&self.alpha, ops);
        let beta = match self.kind() {
            CoefficientKind::Real => vec![0.0; n],
            CoefficientKind::Complex => scale(&self.beta, ops),
        };
        Ok(PolySpec { alpha, beta })
    }
}

/// Outcome of one polynomial evaluation.
///
/// `z_alpha`/`z_beta` are the final recursion states. On the real-axis
/// fallback they hold the scalar Horner results as `(0, p_α(a))` and
/// `(0, p_β(a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub u: f64,
    pub v: f64,
    pub z_alpha: [f64; 2],
    pub z_beta: [f64; 2],
    pub ops: OpCounter,
}

impl EvalResult {
    pub fn value(&self) -> ComplexPoint {
        ComplexPoint {
            re: self.u,
            im: self.v,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }
}

/// The nontrivial row of `R_c = [[0, 1], [-(a²+b²), 2a]]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CompanionRow {
    neg_norm: f64,
    two_a: f64,
}

impl CompanionRow {
    pub(crate) fn new(point: ComplexPoint, ops: &mut OpCounter) -> Result<Self> {
        let pair = companion(point)?;
        let [_, [neg_norm, two_a]] = pair.rc.0;
        // a² + b², and 2a as a + a
        ops.count_mul(2);
        ops.count_add(2);
        Ok(CompanionRow { neg_norm, two_a })
    }

    /// Run `z_{l+1} = R_c z_l + c_l w` from `z_0 = 0`. The first step reduces
    /// to `z_1 = (0, c_0)` and costs nothing.
    pub(crate) fn accumulate(&self, coeffs: &[f64], ops: &mut OpCounter) -> [f64; 2] {
        let mut z = [0.0, 0.0];
        let mut rest = coeffs.iter();
        if let Some(&c0) = rest.next() {
            z = [0.0, c0];
        }
        for &c in rest {
            z = [z[1], self.neg_norm * z[0] + self.two_a * z[1] + c];
            ops.count_mul(2);
            ops.count_add(2);
        }
        z
    }
}

/// `(Re, Im)` from `T z = (-a z_0 + z_1, -b z_0) = (Re, -Im)`.
fn extract(z: [f64; 2], point: ComplexPoint, ops: &mut OpCounter) -> (f64, f64) {
    ops.count_mul(2);
    ops.count_add(1);
    (z[1] - point.re * z[0], point.im * z[0])
}

/// Plain real Horner at a real point.
pub(crate) fn real_horner(coeffs: &[f64], x: f64, ops: &mut OpCounter) -> f64 {
    let mut rest = coeffs.iter();
    let mut acc = rest.next().copied().unwrap_or(0.0);
    for &c in rest {
        acc = acc * x + c;
        ops.count_mul(1);
        ops.count_add(1);
    }
    acc
}

/// Run the companion recursion on a real coefficient list and return
/// `z_{n+1}`. The counter receives every real operation performed, including
/// forming `R_c`.
pub fn horner_accumulate(
    coeffs: &[f64],
    point: ComplexPoint,
    counter: &mut OpCounter,
) -> Result<[f64; 2]> {
    if coeffs.is_empty() {
        return Err(Error::InvalidPolynomial("no coefficients".into()));
    }
    let row = CompanionRow::new(point, counter)?;
    Ok(row.accumulate(coeffs, counter))
}

/// Evaluate the real part `Σ α_l s^(n-l)` of `poly`; any imaginary
/// coefficients are ignored (see [`eval_complex`]).
pub fn eval_real(poly: &PolySpec, point: ComplexPoint) -> EvalResult {
    let mut ops = OpCounter::default();
    if point.on_real_axis() {
        let u = real_horner(&poly.alpha, point.re, &mut ops);
        return EvalResult {
            u,
            v: 0.0,
            z_alpha: [0.0, u],
            z_beta: [0.0, 0.0],
            ops,
        };
    }
    let row = CompanionRow::new(point, &mut ops).expect("point is off the real axis");
    let z_alpha = row.accumulate(&poly.alpha, &mut ops);
    let (u, v) = extract(z_alpha, point, &mut ops);
    EvalResult {
        u,
        v,
        z_alpha,
        z_beta: [0.0, 0.0],
        ops,
    }
}

/// Evaluate `Σ (α_l + jβ_l) s^(n-l)` with two recursions sharing one `R_c`.
pub fn eval_complex(poly: &PolySpec, point: ComplexPoint) -> EvalResult {
    let mut ops = OpCounter::default();
    if point.on_real_axis() {
        let u = real_horner(&poly.alpha, point.re, &mut ops);
        let v = real_horner(&poly.beta, point.re, &mut ops);
        return EvalResult {
            u,
            v,
            z_alpha: [0.0, u],
            z_beta: [0.0, v],
            ops,
        };
    }
    let row = CompanionRow::new(point, &mut ops).expect("point is off the real axis");
    let z_alpha = row.accumulate(&poly.alpha, &mut ops);
    let z_beta = row.accumulate(&poly.beta, &mut ops);
    let (u_alpha, v_alpha) = extract(z_alpha, point, &mut ops);
    let (u_beta, v_beta) = extract(z_beta, point, &mut ops);
    // U T z_α + G T z_β
    ops.count_add(2);
    EvalResult {
        u: u_alpha - v_beta,
        v: v_alpha + u_beta,
        z_alpha,
        z_beta,
        ops,
    }
}

/// Evaluate with the cheaper real-coefficient path whenever every `β_l` is zero.
pub fn eval(poly: &PolySpec, point: ComplexPoint) -> EvalResult {
    match poly.kind() {
        CoefficientKind::Real => eval_real(poly, point),
        CoefficientKind::Complex => eval_complex(poly, point),
    }
}

/// `dp/ds` at `point`, from the recursion over `ν_l = (n-l)γ_l` run for
/// `n` steps. A constant polynomial gives `(0, 0)`.
pub fn eval_derivative(poly: &PolySpec, point: ComplexPoint) -> EvalResult {
    let mut ops = OpCounter::default();
    let d = match poly.derivative(&mut ops) {
        Ok(d) => d,
        Err(_) => {
            return EvalResult {
                u: 0.0,
                v: 0.0,
                z_alpha: [0.0, 0.0],
                z_beta: [0.0, 0.0],
                ops,
            }
        }
    };
    let mut r = eval(&d, point);
    r.ops += ops;
    r
}

/// `|p|²`, `p + p*` and the `d` in `p - p* = j·d`, all from one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateProducts {
    pub abs_squared: f64,
    pub sum: f64,
    pub diff_imag: f64,
}

/// The 4×4 block form `[[A, B], [-B, A]]` with `A = [[a²+b², -a], [-a, 1]]`
/// and `B = [[0, b], [-b, 0]]`.
pub fn conjugate_block(point: ComplexPoint) -> [[f64; 4]; 4] {
    let (a, b) = (point.re, point.im);
    let n = a * a + b * b;
    [
        [n, -a, 0.0, b],
        [-a, 1.0, -b, 0.0],
        [0.0, -b, n, -a],
        [b, 0.0, -a, 1.0],
    ]
}

pub(crate) fn quadratic_form(m: &[[f64; 4]; 4], x: [f64; 4]) -> f64 {
    m.iter()
        .zip(x)
        .map(|(row, xi)| xi * row.iter().zip(x).map(|(mij, xj)| mij * xj).sum::<f64>())
        .sum()
}

pub fn conjugate_products(poly: &PolySpec, point: ComplexPoint) -> ConjugateProducts {
    let r = eval_complex(poly, point);
    if point.on_real_axis() {
        return ConjugateProducts {
            abs_squared: r.norm_sqr(),
            sum: 2.0 * r.u,
            diff_imag: 2.0 * r.v,
        };
    }
    let (za, zb) = (r.z_alpha, r.z_beta);
    let abs_squared = quadratic_form(&conjugate_block(point), [za[0], za[1], zb[0], zb[1]]);

    let (a, b) = (point.re, point.im);
    let a_blk = Mat2::new(a * a + b * b, -a, -a, 1.0);
    let b_blk = Mat2::new(0.0, b, -b, 0.0);
    let plus = |x: [f64; 2], y: [f64; 2]| [x[0] + y[0], x[1] + y[1]];
    // 2[0 1](A z_α + B z_β) and 2[0 1](-B z_α + A z_β)
    let sum = 2.0 * plus(a_blk.mul_vec(za), b_blk.mul_vec(zb))[1];
    let diff_imag = 2.0 * plus((-b_blk).mul_vec(za), a_blk.mul_vec(zb))[1];

    ConjugateProducts {
        abs_squared: abs_squared.max(0.0),
        sum,
        diff_imag,
    }
}

/// `|p(s)|² = p(s)·p*(s*)`.
pub fn abs_squared(poly: &PolySpec, point: ComplexPoint) -> f64 {
    conjugate_products(poly, point).abs_squared
}

/// `p + p* = 2 Re p`.
pub fn conj_sum(poly: &PolySpec, point: ComplexPoint) -> f64 {
    conjugate_products(poly, point).sum
}

/// The real `d` with `p - p* = j·d`, i.e. `2 Im p`.
pub fn conj_diff_imag(poly: &PolySpec, point: ComplexPoint) -> f64 {
    conjugate_products(poly, point).diff_imag
}

/// `1/p = p*/|p|²`.
pub fn reciprocal(poly: &PolySpec, point: ComplexPoint) -> Result<ComplexPoint> {
    let r = eval_complex(poly, point);
    let m = abs_squared(poly, point);
    if m <= f64::MIN_POSITIVE {
        return Err(Error::EvaluationAtRoot {
            re: point.re,
            im: point.im,
        });
    }
    Ok(ComplexPoint {
        re: r.u / m,
        im: -r.v / m,
    })
}
