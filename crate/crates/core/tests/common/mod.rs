//! Independent reference implementations and random generators shared by
//! the integration suites. Everything here works in ordinary complex
//! arithmetic (`num-complex`) so it shares no code path with the library.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotpoly::{ComplexPoint, PolySpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(p: ComplexPoint) -> Complex64 {
    Complex64::new(p.re, p.im)
}

pub fn pt(z: Complex64) -> ComplexPoint {
    ComplexPoint::new(z.re, z.im).unwrap()
}

/// Direct complex Horner over descending coefficients.
pub fn horner(coeffs: &[Complex64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

pub fn complex_coeffs(p: &PolySpec) -> Vec<Complex64> {
    p.alpha()
        .iter()
        .zip(p.beta())
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect()
}

pub fn poly_oracle(p: &PolySpec, s: Complex64) -> Complex64 {
    horner(&complex_coeffs(p), s)
}

/// `p'(s)` from the term-wise differentiated coefficients.
pub fn derivative_oracle(p: &PolySpec, s: Complex64) -> Complex64 {
    let coeffs = complex_coeffs(p);
    let n = coeffs.len() - 1;
    let d: Vec<Complex64> = coeffs[..n]
        .iter()
        .enumerate()
        .map(|(l, &c)| c * (n - l) as f64)
        .collect();
    horner(&d, s)
}

/// `Σ_l Σ_k P[l][k] s₁^(n₂-l) s₂^(m₂-k)`: complex Horner in `s₁` down each
/// column, then complex Horner in `s₂` over the column values.
pub fn poly2d_oracle(p: &[Vec<f64>], s1: Complex64, s2: Complex64) -> Complex64 {
    let cols = p[0].len();
    let column_values: Vec<Complex64> = (0..cols)
        .map(|k| {
            let col: Vec<Complex64> = p.iter().map(|row| Complex64::new(row[k], 0.0)).collect();
            horner(&col, s1)
        })
        .collect();
    horner(&column_values, s2)
}

pub fn uniform_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Random polynomial of degree ≤ `max_degree` with coefficients uniform in
/// `[-1, 1]`; complex coefficients when `complex` is set.
pub fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize, complex: bool) -> PolySpec {
    let n = rng.random_range(0..=max_degree);
    let alpha = uniform_coeffs(rng, n + 1);
    if complex {
        PolySpec::new(alpha, uniform_coeffs(rng, n + 1)).unwrap()
    } else {
        PolySpec::real(alpha).unwrap()
    }
}

/// Uniform in the closed disc of the given radius.
pub fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random_range(0.0f64..=1.0).sqrt();
    let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(r, theta)
}

/// `|x - y| ≤ rel·|y|`, relaxed to `abs` when `|y| < 1`.
pub fn close_c(x: Complex64, y: Complex64, rel: f64, abs: f64) -> bool {
    let err = (x - y).norm();
    let scale = y.norm();
    if scale < 1.0 {
        err <= abs.max(rel * scale)
    } else {
        err <= rel * scale
    }
}

pub fn close(x: f64, y: f64, rel: f64, abs: f64) -> bool {
    close_c(Complex64::new(x, 0.0), Complex64::new(y, 0.0), rel, abs)
}

/// Error measured against the tolerance of [`close_c`]; ≤ 1 means pass.
pub fn err_ratio(x: Complex64, y: Complex64, rel: f64, abs: f64) -> f64 {
    let err = (x - y).norm();
    let scale = y.norm();
    let tol = if scale < 1.0 {
        abs.max(rel * scale)
    } else {
        rel * scale
    };
    if tol == 0.0 {
        if err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        err / tol
    }
}
