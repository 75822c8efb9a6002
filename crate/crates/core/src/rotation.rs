//! Complex numbers as 2×2 real rotation matrices.
//!
//! `s = a + jb` corresponds one-to-one to `R = aI + bJ = [[a, b], [-b, a]]`,
//! and the field operations on `s` map onto matrix operations on `R`. For
//! `b ≠ 0` the similarity transform `T = [[-a, 1], [-b, 0]]` takes `R` to the
//! companion matrix `R_c = T⁻¹RT = [[0, 1], [-(a² + b²), 2a]]`, which is what
//! the Horner recursions in [`crate::horner`] iterate with.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An evaluation point `a + jb`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinite("complex point"));
        }
        Ok(ComplexPoint { re, im })
    }

    /// Point on the imaginary axis, `s = jω`.
    pub fn jomega(omega: f64) -> Result<Self> {
        Self::new(0.0, omega)
    }

    pub fn conj(self) -> Self {
        ComplexPoint {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn on_real_axis(self) -> bool {
        self.im == 0.0
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}j", self.re, -self.im)
        } else {
            write!(f, "{}+{}j", self.re, self.im)
        }
    }
}

/// Row-major 2×2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);
    /// `J = [[0, 1], [-1, 0]]`, the image of the imaginary unit.
    pub const J: Mat2 = Mat2([[0.0, 1.0], [-1.0, 0.0]]);

    pub fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        let m = &self.0;
        Mat2([[k * m[0][0], k * m[0][1]], [k * m[1][0], k * m[1][1]]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn mul_vec(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

/// `R = aI + bJ`. Only the two scalars are stored; [`RotationForm::matrix`]
/// derives the full entries on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationForm {
    pub a: f64,
    pub b: f64,
}

impl RotationForm {
    pub const ONE: RotationForm = RotationForm { a: 1.0, b: 0.0 };
    pub const ZERO: RotationForm = RotationForm { a: 0.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Self {
        RotationForm { a, b }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, -self.b, self.a)
    }

    /// Read the complex number back out: `Re{s} = R[0][0]`, `Im{s} = R[0][1]`.
    pub fn point(&self) -> ComplexPoint {
        ComplexPoint {
            re: self.a,
            im: self.b,
        }
    }

    /// `a² + b²`, the scalar in `RRᵀ = (a² + b²)I`.
    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    pub fn transpose(&self) -> RotationForm {
        RotationForm::new(self.a, -self.b)
    }

    /// `R⁻¹ = Rᵀ / (a² + b²)`.
    pub fn inverse(&self) -> Result<RotationForm> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::DivisionByZeroRotation);
        }
        let t = self.transpose();
        Ok(RotationForm::new(t.a / n, t.b / n))
    }

    fn mul(&self, rhs: &RotationForm) -> RotationForm {
        // (a1 I + b1 J)(a2 I + b2 J) with J² = -I
        RotationForm::new(
            self.a * rhs.a - self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
        )
    }
}

/// Map a complex point to its rotation form.
pub fn embed(s: ComplexPoint) -> RotationForm {
    RotationForm::new(s.re, s.im)
}

/// `J^k`, read off the period-4 table: `J, -I, -J, I, J, ...`.
pub fn j_power(k: u64) -> Mat2 {
    match k % 4 {
        0 => Mat2::IDENTITY,
        1 => Mat2::J,
        2 => -Mat2::IDENTITY,
        _ => -Mat2::J,
    }
}

/// `R^k` through the spectral decomposition `R^k = λ₁ᵏE₁ + λ₂ᵏE₂`.
///
/// With `λ₁ = a + jb = r·e^{jθ}`, `λ₂ = λ₁*` and `E₁ = (I - jJ)/2`,
/// `E₂ = E₁*`, the two terms are complex conjugates, so the sum is
/// `2·Re{λ₁ᵏE₁} = Re{λ₁ᵏ}·I + Im{λ₁ᵏ}·J`. `λ₁ᵏ` itself is taken in polar form.
pub fn rot_power(r: RotationForm, k: u32) -> RotationForm {
    if k == 0 {
        return RotationForm::ONE;
    }
    let modulus = r.a.hypot(r.b);
    if modulus == 0.0 {
        return RotationForm::ZERO;
    }
    let theta = r.b.atan2(r.a);
    let rk = modulus.powi(k as i32);
    let phase = wrap_angle(theta * f64::from(k));
    let (sin, cos) = phase.sin_cos();
    RotationForm::new(rk * cos, rk * sin)
}

/// Reduce an angle to `(-π, π]`.
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Apply a field operation in rotation-matrix form. Division computes
/// `R₁R₂⁻¹` (which equals `R₂⁻¹R₁`).
pub fn field_op(r1: RotationForm, r2: RotationForm, op: FieldOp) -> Result<RotationForm> {
    Ok(match op {
        FieldOp::Add => RotationForm::new(r1.a + r2.a, r1.b + r2.b),
        FieldOp::Sub => RotationForm::new(r1.a - r2.a, r1.b - r2.b),
        FieldOp::Mul => r1.mul(&r2),
        FieldOp::Div => r1.mul(&r2.inverse()?),
    })
}

/// Companion matrix `R_c` and the transform `T` with `T·R_c = R·T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompanionPair {
    pub rc: Mat2,
    pub t: Mat2,
}

impl CompanionPair {
    /// `J_c = T⁻¹JT = (1/b)·[[-a, 1], [-(a² + b²), a]]`.
    pub fn jc(&self) -> Mat2 {
        let a = -self.t.0[0][0];
        let b = -self.t.0[1][0];
        Mat2::new(-a, 1.0, -(a * a + b * b), a).scale(1.0 / b)
    }
}

pub fn companion(s: ComplexPoint) -> Result<CompanionPair> {
    if s.im == 0.0 {
        return Err(Error::RealAxisPoint(s.re));
    }
    let (a, b) = (s.re, s.im);
    Ok(CompanionPair {
        rc: Mat2::new(0.0, 1.0, -(a * a + b * b), 2.0 * a),
        t: Mat2::new(-a, 1.0, -b, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn oracle(op: FieldOp, x: Complex64, y: Complex64) -> Complex64 {
        match op {
            FieldOp::Add => x + y,
            FieldOp::Sub => x - y,
            FieldOp::Mul => x * y,
            FieldOp::Div => x / y,
        }
    }

    fn repeated_j(k: u64) -> Mat2 {
        (0..k).fold(Mat2::IDENTITY, |acc, _| acc * Mat2::J)
    }

    #[test]
    fn embed_examples() {
        let z = embed(ComplexPoint::new(0.0, 0.0).unwrap());
        assert_eq!(z.matrix(), Mat2::ZERO);
        let one = embed(ComplexPoint::new(1.0, 0.0).unwrap());
        assert_eq!(one.matrix(), Mat2::IDENTITY);
        let r = embed(ComplexPoint::new(3.0, 4.0).unwrap()).matrix();
        assert_eq!(r * r.transpose(), Mat2::IDENTITY.scale(25.0));
        assert_eq!(r.transpose() * r, Mat2::IDENTITY.scale(25.0));
    }

    #[test]
    fn rejects_non_finite_points() {
        assert!(ComplexPoint::new(f64::NAN, 0.0).is_err());
        assert!(ComplexPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn j_power_table() {
        assert_eq!(j_power(2), -Mat2::IDENTITY);
        assert_eq!(j_power(4), Mat2::IDENTITY);
        assert_eq!(j_power(7), -Mat2::J);
        for k in 1..=64 {
            assert_eq!(j_power(k), repeated_j(k), "k = {k}");
        }
    }

    #[test]
    fn j_identities() {
        let j = Mat2::J;
        assert_eq!(j * j, -Mat2::IDENTITY);
        assert_eq!(j * (-j), Mat2::IDENTITY);
        assert_eq!(j * j.transpose(), Mat2::IDENTITY);
        assert_eq!(j.transpose() * j, Mat2::IDENTITY);
    }

    #[test]
    fn rot_power_examples() {
        let r = RotationForm::new(0.3, -2.0);
        assert_eq!(rot_power(r, 0), RotationForm::ONE);
        let p = rot_power(RotationForm::new(1.0, 1.0), 2);
        assert!(
            (p.a - 0.0).abs() < 1e-12 && (p.b - 2.0).abs() < 1e-12,
            "{p:?}"
        );
        let p = rot_power(RotationForm::new(0.0, 1.0), 4);
        assert!((p.a - 1.0).abs() < 1e-12 && p.b.abs() < 1e-12, "{p:?}");
        assert_eq!(rot_power(RotationForm::ZERO, 3), RotationForm::ZERO);
    }

    #[test]
    fn rot_power_matches_binomial_expansion() {
        // R^k = Σ C(k,m) a^m b^(k-m) J^(k-m)
        let r = RotationForm::new(0.7, -1.3);
        for k in 0..=12u32 {
            let mut acc = Mat2::ZERO;
            let mut binom = 1.0;
            for m in 0..=k {
                let term = j_power(u64::from(k - m))
                    .scale(binom * r.a.powi(m as i32) * r.b.powi((k - m) as i32));
                acc = acc + term;
                binom = binom * f64::from(k - m) / f64::from(m + 1);
            }
            let got = rot_power(r, k).matrix();
            assert!(got.max_abs_diff(&acc) < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn field_op_examples() {
        let m = field_op(
            RotationForm::new(1.0, 2.0),
            RotationForm::new(3.0, 4.0),
            FieldOp::Mul,
        );
        assert_eq!(m.unwrap(), RotationForm::new(-5.0, 10.0));
        let r = RotationForm::new(2.5, -1.0);
        assert_eq!(field_op(r, RotationForm::ZERO, FieldOp::Add).unwrap(), r);
        let d = field_op(RotationForm::ONE, RotationForm::new(0.0, 1.0), FieldOp::Div).unwrap();
        assert_eq!(d, RotationForm::new(0.0, -1.0));
        assert_eq!(
            field_op(r, RotationForm::ZERO, FieldOp::Div),
            Err(Error::DivisionByZeroRotation)
        );
    }

    #[test]
    fn division_commutes_with_inverse() {
        let r1 = RotationForm::new(1.5, -0.5);
        let r2 = RotationForm::new(-2.0, 0.25);
        let inv = r2.inverse().unwrap().matrix();
        let left = r1.matrix() * inv;
        let right = inv * r1.matrix();
        assert!(left.max_abs_diff(&right) < 1e-15);
        let d = field_op(r1, r2, FieldOp::Div).unwrap().matrix();
        assert!(d.max_abs_diff(&left) < 1e-15);
    }

    #[test]
    fn companion_examples() {
        let w = 2.5;
        let c = companion(ComplexPoint::jomega(w).unwrap()).unwrap();
        assert_eq!(c.rc, Mat2::new(0.0, 1.0, -w * w, 0.0));

        let s = ComplexPoint::new(1.0, 1.0).unwrap();
        let c = companion(s).unwrap();
        assert_eq!(c.rc, Mat2::new(0.0, 1.0, -2.0, 2.0));
        let r = embed(s).matrix();
        assert!((c.t * c.rc).max_abs_diff(&(r * c.t)) < 1e-15);

        assert_eq!(
            companion(ComplexPoint::new(0.0, 0.0).unwrap()),
            Err(Error::RealAxisPoint(0.0))
        );
    }

    #[test]
    fn companion_jc_is_similar_to_j() {
        let s = ComplexPoint::new(-0.4, 1.7).unwrap();
        let c = companion(s).unwrap();
        assert!((c.t * c.jc()).max_abs_diff(&(Mat2::J * c.t)) < 1e-14);
        // J_c follows the same period-4 table as J
        let jc = c.jc();
        assert!((jc * jc).max_abs_diff(&(-Mat2::IDENTITY)) < 1e-14);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(-0.5)).eq(&-0.5));
    }

    fn finite() -> impl Strategy<Value = f64> {
        -1e3..1e3f64
    }

    proptest! {
        #[test]
        fn round_trip(a in finite(), b in finite()) {
            let s = ComplexPoint::new(a, b).unwrap();
            prop_assert_eq!(embed(s).point(), s);
            let m = embed(s).matrix();
            prop_assert_eq!(m.0[0][0], a);
            prop_assert_eq!(m.0[0][1], b);
        }

        #[test]
        fn homomorphism(a1 in -10.0..10.0f64, b1 in -10.0..10.0f64,
                        a2 in -10.0..10.0f64, b2 in -10.0..10.0f64) {
            let (r1, r2) = (RotationForm::new(a1, b1), RotationForm::new(a2, b2));
            let (x, y) = (Complex64::new(a1, b1), Complex64::new(a2, b2));
            for op in [FieldOp::Add, FieldOp::Sub, FieldOp::Mul, FieldOp::Div] {
                if op == FieldOp::Div && y.norm_sqr() < 1e-3 {
                    continue;
                }
                let got = field_op(r1, r2, op).unwrap();
                let want = oracle(op, x, y);
                prop_assert!((got.a - want.re).abs() <= 1e-12 * want.norm().max(1.0));
                prop_assert!((got.b - want.im).abs() <= 1e-12 * want.norm().max(1.0));
            }
        }

        #[test]
        fn orthogonality_and_symplectic(a in -50.0..50.0f64, b in -50.0..50.0f64) {
            let r = RotationForm::new(a, b);
            let m = r.matrix();
            let n = r.norm_sqr();
            let tol = 1e-12 * n.max(1.0);
            prop_assert!((m * m.transpose()).max_abs_diff(&Mat2::IDENTITY.scale(n)) <= tol);
            prop_assert!((m.transpose() * m).max_abs_diff(&Mat2::IDENTITY.scale(n)) <= tol);
            if n > 1e-6 {
                let s = m.scale(1.0 / n.sqrt());
                prop_assert!((s * Mat2::J * s.transpose()).max_abs_diff(&Mat2::J) <= 1e-12);
                let inv = r.inverse().unwrap().matrix();
                prop_assert!((m * inv).max_abs_diff(&Mat2::IDENTITY) <= 1e-12);
            }
        }

        #[test]
        fn companion_similarity(a in -20.0..20.0f64, b in 0.01..20.0f64, neg in any::<bool>()) {
            let b = if neg { -b } else { b };
            let s = ComplexPoint::new(a, b).unwrap();
            let c = companion(s).unwrap();
            let r = embed(s).matrix();
            let scale = 1.0 + s.norm_sqr();
            prop_assert!((c.t * c.rc).max_abs_diff(&(r * c.t)) <= 1e-12 * scale);
            prop_assert!(c.t.det() != 0.0);
        }
    }

    #[test]
    fn rot_power_matches_repeated_multiplication() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let r = RotationForm::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let mut acc = RotationForm::ONE;
            for k in 0..=16u32 {
                let got = rot_power(r, k);
                let scale = r.norm_sqr().sqrt().powi(k as i32).max(f64::MIN_POSITIVE);
                let err = (got.a - acc.a).hypot(got.b - acc.b) / scale;
                assert!(err <= 1e-9, "k = {k}, r = {r:?}, err = {err}");
                acc = field_op(acc, r, FieldOp::Mul).unwrap();
            }
        }
    }
}
