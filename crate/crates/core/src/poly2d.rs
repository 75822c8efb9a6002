//! Two-variable polynomials `p(s₁, s₂) = Σ_l Σ_k p_lk s₁^(n₂-l) s₂^(m₂-k)`.
//!
//! The general evaluation runs two passes of the companion recursion. The
//! inner (horizontal) pass evaluates each column polynomial
//! `f_k(s₁) = Σ_l p_lk s₁^(n₂-l)` as `α_k + jβ_k`; the outer (vertical) pass
//! treats those as the complex coefficients of a polynomial in `s₂`.
//!
//! This module uses the transform `T = [[-a, 1], [b, 0]]`, under which
//! `T w` reads out `(Re, +Im)` directly.

use crate::error::{Error, Result};
use crate::horner::{eval_real, real_horner, CompanionRow, OpCounter, PolySpec};
use crate::rotation::{field_op, wrap_angle, ComplexPoint, FieldOp, Mat2, RotationForm};

/// Coefficient matrix `P`, row `l` ↔ `s₁^(n₂-l)`, column `k` ↔ `s₂^(m₂-k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2DSpec {
    rows: usize,
    cols: usize,
    coeffs: Vec<f64>,
}

impl Poly2DSpec {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::InvalidPolynomial("empty coefficient matrix".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(
                "coefficient rows have unequal lengths".into(),
            ));
        }
        let coeffs: Vec<f64> = rows.into_iter().flatten().collect();
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("2D coefficient matrix"));
        }
        Ok(Poly2DSpec {
            rows: coeffs.len() / cols,
            cols,
            coeffs,
        })
    }

    /// `n₂`, the degree in `s₁`.
    pub fn degree_s1(&self) -> usize {
        self.rows - 1
    }

    /// `m₂`, the degree in `s₂`.
    pub fn degree_s2(&self) -> usize {
        self.cols - 1
    }

    pub fn get(&self, l: usize, k: usize) -> f64 {
        self.coeffs[l * self.cols + k]
    }

    pub fn row(&self, l: usize) -> &[f64] {
        &self.coeffs[l * self.cols..(l + 1) * self.cols]
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.rows).map(|l| self.get(l, k)).collect()
    }

    fn frobenius(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// `P = η ϱᵀ`, i.e. `p(s₁, s₂) = p₁(s₁)·p₂(s₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableFactors {
    pub eta: Vec<f64>,
    pub rho: Vec<f64>,
}

impl SeparableFactors {
    pub fn outer(&self) -> Poly2DSpec {
        let rows = self
            .eta
            .iter()
            .map(|e| self.rho.iter().map(|r| e * r).collect())
            .collect();
        Poly2DSpec::new(rows).expect("finite factors")
    }
}

fn integer_gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_exact_integer(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() < 9.0e15
}

/// Rank-1 factorization of `P`, if one exists within `tol` (relative
/// Frobenius residual).
///
/// The pivot is the largest-magnitude entry. `ϱ` is the pivot's row of `P`
/// and `η` carries the column ratios, so `η` is 1 at the pivot row. When all
/// entries are integers each `η_l` is instead the gcd of row `l` (signed like
/// the pivot column entry), and `ϱ` is the pivot row divided by its gcd.
pub fn check_separable(p2d: &Poly2DSpec, tol: f64) -> Result<Option<SeparableFactors>> {
    let norm = p2d.frobenius();
    if norm == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let (mut pl, mut pk) = (0, 0);
    for l in 0..p2d.rows {
        for k in 0..p2d.cols {
            if p2d.get(l, k).abs() > p2d.get(pl, pk).abs() {
                (pl, pk) = (l, k);
            }
        }
    }
    let pivot = p2d.get(pl, pk);

    let factors = if p2d.coeffs.iter().all(|&c| is_exact_integer(c)) {
        let gcd_row = |l: usize| {
            let g = p2d.row(l).iter().fold(0, |g, &c| integer_gcd(g, c as i64)) as f64;
            if p2d.get(l, pk) < 0.0 {
                -g
            } else {
                g
            }
        };
        let eta: Vec<f64> = (0..p2d.rows).map(gcd_row).collect();
        let rho = p2d.row(pl).iter().map(|c| c / eta[pl]).collect();
        SeparableFactors { eta, rho }
    } else {
        let eta = (0..p2d.rows).map(|l| p2d.get(l, pk) / pivot).collect();
        SeparableFactors {
            eta,
            rho: p2d.row(pl).to_vec(),
        }
    };

    let recon = factors.outer();
    let residual = p2d
        .coeffs
        .iter()
        .zip(&recon.coeffs)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
        / norm;
    Ok((residual <= tol).then_some(factors))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eval2DResult {
    /// Real part `η_p`.
    pub eta_p: f64,
    /// Imaginary part `ϑ_p`.
    pub theta_p: f64,
    /// `(α_k, β_k) = f_k(s₁)` for `k = 0..=m₂`.
    pub inner_parts: Vec<(f64, f64)>,
    pub ops: OpCounter,
}

impl Eval2DResult {
    pub fn norm_sqr(&self) -> f64 {
        self.eta_p * self.eta_p + self.theta_p * self.theta_p
    }
}

/// `p₁(s₁)·p₂(s₂)`: evaluate the factors separately and multiply, so
/// magnitudes multiply and phases add.
pub fn eval_separable(
    factors: &SeparableFactors,
    s1: ComplexPoint,
    s2: ComplexPoint,
) -> Result<Eval2DResult> {
    let p1 = eval_real(&PolySpec::real(factors.eta.clone())?, s1);
    let p2 = eval_real(&PolySpec::real(factors.rho.clone())?, s2);
    let prod = field_op(
        RotationForm::new(p1.u, p1.v),
        RotationForm::new(p2.u, p2.v),
        FieldOp::Mul,
    )?;
    let mut ops = p1.ops + p2.ops;
    ops.count_mul(4 + 2 * factors.rho.len() as u64);
    ops.count_add(2);
    Ok(Eval2DResult {
        eta_p: prod.a,
        theta_p: prod.b,
        inner_parts: factors.rho.iter().map(|r| (r * p1.u, r * p1.v)).collect(),
        ops,
    })
}

/// `T = [[-a, 1], [b, 0]]`.
fn readout(point: ComplexPoint) -> Mat2 {
    Mat2::new(-point.re, 1.0, point.im, 0.0)
}

/// Evaluate `p(s₁, s₂)` by the horizontal-then-vertical recursion.
///
/// Inner pass per column `k`: `w_{l+1,k} = R_c1 w_lk + p_lk e`, then
/// `(α_k, β_k) = T₁ w_{n₂+1,k}`. Outer pass: `u_{k+1} = R_c2 u_k + α_k e`,
/// `v_{k+1} = R_c2 v_k + β_k e`, and `[η; ϑ] = T₂u + JᵀT₂v`. An axis with
/// zero imaginary part uses real Horner instead.
pub fn eval2d(p2d: &Poly2DSpec, s1: ComplexPoint, s2: ComplexPoint) -> Eval2DResult {
    let mut ops = OpCounter::default();

    let inner_parts: Vec<(f64, f64)> = if s1.on_real_axis() {
        (0..p2d.cols)
            .map(|k| (real_horner(&p2d.column(k), s1.re, &mut ops), 0.0))
            .collect()
    } else {
        let rc1 = CompanionRow::new(s1, &mut ops).expect("s1 is off the real axis");
        let t1 = readout(s1);
        (0..p2d.cols)
            .map(|k| {
                let w = rc1.accumulate(&p2d.column(k), &mut ops);
                ops.count_mul(2);
                ops.count_add(1);
                let [alpha, beta] = t1.mul_vec(w);
                (alpha, beta)
            })
            .collect()
    };

    let alphas: Vec<f64> = inner_parts.iter().map(|p| p.0).collect();
    let betas: Vec<f64> = inner_parts.iter().map(|p| p.1).collect();

    let (eta_p, theta_p) = if s2.on_real_axis() {
        (
            real_horner(&alphas, s2.re, &mut ops),
            real_horner(&betas, s2.re, &mut ops),
        )
    } else {
        let rc2 = CompanionRow::new(s2, &mut ops).expect("s2 is off the real axis");
        let t2 = readout(s2);
        let u = t2.mul_vec(rc2.accumulate(&alphas, &mut ops));
        let v = Mat2::J
            .transpose()
            .mul_vec(t2.mul_vec(rc2.accumulate(&betas, &mut ops)));
        ops.count_mul(4);
        ops.count_add(4);
        (u[0] + v[0], u[1] + v[1])
    };

    Eval2DResult {
        eta_p,
        theta_p,
        inner_parts,
        ops,
    }
}

/// Value of `G(s₁, s₂) = q/p` in polar and Cartesian form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Response2D {
    pub magnitude: f64,
    /// `φ_q - φ_p` wrapped to `(-π, π]`.
    pub phase: f64,
    pub re: f64,
    pub im: f64,
}

pub fn response2d(
    q2d: &Poly2DSpec,
    p2d: &Poly2DSpec,
    s1: ComplexPoint,
    s2: ComplexPoint,
) -> Result<Response2D> {
    let q = eval2d(q2d, s1, s2);
    let p = eval2d(p2d, s1, s2);
    let den = p.norm_sqr();
    if den <= f64::MIN_POSITIVE {
        return Err(Error::PoleAtPoint);
    }
    let magnitude = (q.norm_sqr() / den).sqrt();
    let phase = wrap_angle(q.theta_p.atan2(q.eta_p) - p.theta_p.atan2(p.eta_p));
    Ok(Response2D {
        magnitude,
        phase,
        re: magnitude * phase.cos(),
        im: magnitude * phase.sin(),
    })
}
