//! Building transfer functions from time-constant and state-space
//! descriptions, and integer matrix powers.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::freqresp::TransferFunctionSpec;
use crate::horner::PolySpec;

/// Descending coefficients `[c_0, ..., c_n]` of `Π (s - r_i)`, so that
/// `c_f = (-1)^f e_f(r)` with `e_f` the f-th elementary symmetric polynomial.
///
/// Built by multiplying in one linear factor at a time.
pub fn expand_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(roots.len() + 1);
    c.push(1.0);
    for &r in roots {
        c.push(0.0);
        for i in (1..c.len()).rev() {
            c[i] -= r * c[i - 1];
        }
    }
    c
}

/// A single coefficient `c_f` of [`expand_roots`].
pub fn root_coefficient(roots: &[f64], f: usize) -> Option<f64> {
    expand_roots(roots).get(f).copied()
}

/// `G(s) = Π(1 + T_n s) / Π(1 + T_d s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeConstantForm {
    pub numerator_tcs: Vec<f64>,
    pub denominator_tcs: Vec<f64>,
}

impl TimeConstantForm {
    pub fn new(numerator_tcs: Vec<f64>, denominator_tcs: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = numerator_tcs
            .iter()
            .chain(&denominator_tcs)
            .find(|t| !(t.is_finite() && **t > 0.0))
        {
            return Err(Error::InvalidTimeConstant(bad));
        }
        Ok(TimeConstantForm {
            numerator_tcs,
            denominator_tcs,
        })
    }

    pub fn is_proper(&self) -> bool {
        self.numerator_tcs.len() <= self.denominator_tcs.len()
    }
}

/// Rewrite `Π(1 + T_n s) / Π(1 + T_d s)` as `K·q(s)/p(s)` with monic `q`, `p`
/// whose roots are `-1/T`, and `K = ΠT_n / ΠT_d`.
pub fn tc_to_tf(form: &TimeConstantForm) -> TransferFunctionSpec {
    let roots = |tcs: &[f64]| tcs.iter().map(|t| -1.0 / t).collect::<Vec<_>>();
    let gain =
        form.numerator_tcs.iter().product::<f64>() / form.denominator_tcs.iter().product::<f64>();
    let q = expand_roots(&roots(&form.numerator_tcs));
    let p = expand_roots(&roots(&form.denominator_tcs));
    TransferFunctionSpec::new(
        PolySpec::real(q).expect("finite coefficients"),
        PolySpec::real(p).expect("finite coefficients"),
        gain,
    )
    .expect("monic denominator")
}

/// Single-input single-output `ẋ = Ax + Bu`, `y = Cx`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.len() != n || c.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "A is {n}x{n} but B has {} and C has {} entries",
                b.len(),
                c.len()
            )));
        }
        if a.iter()
            .chain(b.iter())
            .chain(c.iter())
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite("state-space matrices"));
        }
        Ok(StateSpace { a, b, c })
    }

    /// From row-major nested lists.
    pub fn from_rows(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(
                "A rows have unequal lengths".into(),
            ));
        }
        let flat: Vec<f64> = a.iter().flatten().copied().collect();
        Self::new(
            DMatrix::from_row_slice(n, n, &flat),
            DVector::from_column_slice(b),
            DVector::from_column_slice(c),
        )
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeverrierResult {
    /// `p_0 = 1, p_1, ..., p_n` of `det(sI - A)`.
    pub p_coeffs: Vec<f64>,
    /// `q_1, ..., q_n` with `q(s) = Σ q_k s^(n-k)`.
    pub q_coeffs: Vec<f64>,
    /// `F_1, ..., F_n` with `adj(sI - A) = Σ F_k s^(n-k)`.
    pub f_matrices: Vec<DMatrix<f64>>,
    /// Frobenius norm of `A F_n + p_n I`, which vanishes in exact arithmetic.
    pub closure_residual: f64,
}

impl LeverrierResult {
    /// `G(s) = q(s)/p(s)` with leading numerator coefficients that are
    /// negligible against the largest one (≤ 1e-14 relative) dropped.
    pub fn transfer_function(&self) -> TransferFunctionSpec {
        let scale = self.q_coeffs.iter().fold(0.0f64, |m, q| m.max(q.abs()));
        let lead = self
            .q_coeffs
            .iter()
            .position(|q| q.abs() > 1e-14 * scale)
            .unwrap_or(self.q_coeffs.len() - 1);
        TransferFunctionSpec::new(
            PolySpec::real(self.q_coeffs[lead..].to_vec()).expect("finite"),
            PolySpec::real(self.p_coeffs.clone()).expect("finite"),
            1.0,
        )
        .expect("monic denominator")
    }
}

fn numerator_coeffs(ss: &StateSpace, f: &[DMatrix<f64>]) -> Vec<f64> {
    f.iter().map(|fk| ss.c.dot(&(fk * &ss.b))).collect()
}

/// Characteristic polynomial and adjugate expansion of `sI - A` by the
/// Leverrier–Faddeev recursion
///
/// ```text
/// F_1 = I,  p_l = -tr(A F_l)/l,  F_{l+1} = A F_l + p_l I
/// ```
///
/// with `q_k = C F_k B`. Intended for moderate orders (n ≤ 20); the
/// recursion loses accuracy quickly beyond that.
pub fn leverrier(ss: &StateSpace) -> LeverrierResult {
    let n = ss.order();
    let id = DMatrix::<f64>::identity(n, n);
    let mut p = vec![1.0];
    let mut f = vec![id.clone()];
    let mut closure_residual = 0.0;
    for l in 1..=n {
        let af = &ss.a * &f[l - 1];
        let pl = -af.trace() / l as f64;
        p.push(pl);
        let next = af + &id * pl;
        if l < n {
            f.push(next);
        } else {
            closure_residual = next.norm();
        }
    }
    LeverrierResult {
        q_coeffs: numerator_coeffs(ss, &f),
        p_coeffs: p,
        f_matrices: f,
        closure_residual,
    }
}

/// The same quantities from the closed forms
/// `F_k = Σ_{l<k} p_l A^(k-l-1)` and `p_k = -(1/k) Σ_{l<k} p_l tr(A^(k-l))`.
/// Costs a matrix power per step; kept as an independent cross-check.
pub fn leverrier_closed_form_check(ss: &StateSpace) -> LeverrierResult {
    let n = ss.order();
    let mut powers = vec![DMatrix::<f64>::identity(n, n)];
    for k in 1..=n {
        powers.push(&ss.a * &powers[k - 1]);
    }
    let traces: Vec<f64> = powers.iter().map(|m| m.trace()).collect();

    let mut p = vec![1.0];
    for k in 1..=n {
        let s: f64 = (0..k).map(|l| p[l] * traces[k - l]).sum();
        p.push(-s / k as f64);
    }
    let f_at = |k: usize| -> DMatrix<f64> {
        (0..k).fold(DMatrix::zeros(n, n), |acc, l| {
            acc + &powers[k - l - 1] * p[l]
        })
    };
    let f: Vec<DMatrix<f64>> = (1..=n).map(f_at).collect();
    let closure_residual = (f_at(n + 1)).norm();
    LeverrierResult {
        q_coeffs: numerator_coeffs(ss, &f),
        p_coeffs: p,
        f_matrices: f,
        closure_residual,
    }
}

/// Binary digits of a positive integer, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Horner-style reconstruction `ρ = (...((1)·2 + ρ_{k-2})·2 + ...) + ρ_0`.
    pub fn value(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| 2 * acc + u64::from(b))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn to_bits(rho: i64) -> Result<BitString> {
    if rho < 1 {
        return Err(Error::NonPositive(rho));
    }
    let k = 64 - rho.leading_zeros() as usize;
    Ok(BitString(
        (0..k).rev().map(|i| (rho >> i) & 1 == 1).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatPow {
    pub matrix: DMatrix<f64>,
    pub multiplications: usize,
}

/// `A^ρ` by left-to-right square-and-multiply: start from `m = A` at the
/// leading bit, then for each remaining bit square, and multiply by `A` when
/// the bit is set.
pub fn mat_pow(a: &DMatrix<f64>, rho: i64) -> Result<MatPow> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "matrix power needs a non-empty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let bits = to_bits(rho)?;
    let mut m = a.clone();
    let mut multiplications = 0;
    for &bit in &bits.bits()[1..] {
        m = &m * &m;
        multiplications += 1;
        if bit {
            m = &m * a;
            multiplications += 1;
        }
    }
    Ok(MatPow {
        matrix: m,
        multiplications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all index subsets of size f.
    fn subset_coefficient(roots: &[f64], f: usize) -> f64 {
        let n = roots.len();
        let mut e = 0.0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == f {
                e += (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| roots[i])
                    .product::<f64>();
            }
        }
        if f.is_multiple_of(2) {
            e
        } else {
            -e
        }
    }

    #[test]
    fn expand_roots_examples() {
        assert_eq!(expand_roots(&[-1.0, -2.0]), vec![1.0, 3.0, 2.0]);
        assert_eq!(expand_roots(&[]), vec![1.0]);
        assert_eq!(expand_roots(&[-5.0]), vec![1.0, 5.0]);
        assert_eq!(root_coefficient(&[-1.0, -2.0], 1), Some(3.0));
        assert_eq!(root_coefficient(&[-1.0, -2.0], 3), None);
    }

    #[test]
    fn expand_roots_matches_subset_enumeration() {
        let sets: [&[f64]; 4] = [
            &[1.0, 2.0, 3.0],
            &[-1.0, 4.0, -2.0, 0.0, 7.0],
            &[2.0, 2.0, 2.0, -3.0, 1.0, -1.0, 5.0, 6.0],
            &[-8.0, 3.0, 1.0, 1.0, -2.0, 9.0],
        ];
        for roots in sets {
            let c = expand_roots(roots);
            for (f, cf) in c.iter().enumerate() {
                assert_eq!(
                    *cf,
                    subset_coefficient(roots, f),
                    "roots {roots:?}, f = {f}"
                );
            }
        }
    }

    #[test]
    fn tc_to_tf_examples() {
        let tf = tc_to_tf(&TimeConstantForm::new(vec![], vec![1.0]).unwrap());
        assert_eq!(tf.gain, 1.0);
        assert_eq!(tf.numerator.alpha(), &[1.0]);
        assert_eq!(tf.denominator.alpha(), &[1.0, 1.0]);

        let tf = tc_to_tf(&TimeConstantForm::new(vec![2.0], vec![1.0, 1.0]).unwrap());
        assert_eq!(tf.gain, 2.0);
        assert_eq!(tf.numerator.alpha(), &[1.0, 0.5]);
        assert_eq!(tf.denominator.alpha(), &[1.0, 2.0, 1.0]);
        // K·(s + 1/2) = 1 + 2s
        let back: Vec<f64> = tf.numerator.alpha().iter().map(|c| tf.gain * c).collect();
        assert_eq!(back, [2.0, 1.0]);

        let tf = tc_to_tf(&TimeConstantForm::new(vec![], vec![]).unwrap());
        assert_eq!(
            (tf.gain, tf.numerator.alpha(), tf.denominator.alpha()),
            (1.0, &[1.0][..], &[1.0][..])
        );

        assert!(TimeConstantForm::new(vec![0.0], vec![]).is_err());
        assert!(TimeConstantForm::new(vec![], vec![-1.0]).is_err());
        assert!(!TimeConstantForm::new(vec![1.0, 2.0], vec![1.0])
            .unwrap()
            .is_proper());
    }

    #[test]
    fn leverrier_second_order_fixture() {
        let ss = StateSpace::from_rows(
            &[vec![0.0, 1.0], vec![-2.0, -3.0]],
            &[0.0, 1.0],
            &[1.0, 0.0],
        )
        .unwrap();
        let r = leverrier(&ss);
        assert_eq!(r.p_coeffs, vec![1.0, 3.0, 2.0]);
        assert_eq!(r.q_coeffs, vec![0.0, 1.0]);
        assert_eq!(r.closure_residual, 0.0);
        // adj(sI - A) = [[s+3, 1], [-2, s]] by hand
        assert_eq!(r.f_matrices[0], DMatrix::identity(2, 2));
        assert_eq!(
            r.f_matrices[1],
            DMatrix::from_row_slice(2, 2, &[3.0, 1.0, -2.0, 0.0])
        );
        let tf = r.transfer_function();
        assert_eq!(tf.numerator.alpha(), &[1.0]);
        assert_eq!(tf.denominator.alpha(), &[1.0, 3.0, 2.0]);
    }

    #[test]
    fn leverrier_scalar_and_identity() {
        let a = 2.5;
        let ss = StateSpace::from_rows(&[vec![a]], &[1.0], &[1.0]).unwrap();
        let r = leverrier(&ss);
        assert_eq!(r.p_coeffs, vec![1.0, -a]);
        assert_eq!(r.q_coeffs, vec![1.0]);

        let ss = StateSpace::new(
            DMatrix::identity(3, 3),
            DVector::from_element(3, 1.0),
            DVector::from_element(3, 1.0),
        )
        .unwrap();
        assert_eq!(leverrier(&ss).p_coeffs, vec![1.0, -3.0, 3.0, -1.0]);
    }

    #[test]
    fn leverrier_three_by_three_adjugate() {
        // A = [[1, 2, 0], [0, -1, 1], [3, 0, 2]], B = e1, C = e3.
        // det(sI - A) = s³ - 2s² - s - 4 and C adj(sI-A) B = adj[2][0] = 3(s + 1).
        let ss = StateSpace::from_rows(
            &[
                vec![1.0, 2.0, 0.0],
                vec![0.0, -1.0, 1.0],
                vec![3.0, 0.0, 2.0],
            ],
            &[1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0],
        )
        .unwrap();
        let r = leverrier(&ss);
        assert_eq!(r.p_coeffs, vec![1.0, -2.0, -1.0, -4.0]);
        assert_eq!(r.q_coeffs, vec![0.0, 3.0, 3.0]);
        assert_eq!(r.closure_residual, 0.0);
    }

    #[test]
    fn leverrier_closed_form_agrees() {
        let ss = StateSpace::from_rows(
            &[vec![0.0, 1.0], vec![-2.0, -3.0]],
            &[0.0, 1.0],
            &[1.0, 0.0],
        )
        .unwrap();
        let a = leverrier(&ss);
        let b = leverrier_closed_form_check(&ss);
        assert_eq!(a.p_coeffs, b.p_coeffs);
        assert_eq!(a.q_coeffs, b.q_coeffs);
    }

    #[test]
    fn state_space_dimensions() {
        assert!(matches!(
            StateSpace::from_rows(&[vec![1.0, 2.0], vec![3.0]], &[1.0, 1.0], &[1.0, 1.0]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            StateSpace::from_rows(&[vec![1.0]], &[1.0, 1.0], &[1.0]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            StateSpace::from_rows(&[], &[], &[]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn bits() {
        assert_eq!(to_bits(117).unwrap().to_string(), "1110101");
        assert_eq!(to_bits(1).unwrap().to_string(), "1");
        assert_eq!(to_bits(64).unwrap().to_string(), "1000000");
        assert_eq!(to_bits(117).unwrap().value(), 117);
        assert_eq!(to_bits(0), Err(Error::NonPositive(0)));
        assert_eq!(to_bits(-3), Err(Error::NonPositive(-3)));
    }

    #[test]
    fn mat_pow_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[0.3, -1.0, 2.0, 0.5]);
        let r = mat_pow(&a, 1).unwrap();
        assert_eq!((r.matrix, r.multiplications), (a.clone(), 0));

        let id = DMatrix::<f64>::identity(3, 3);
        let r = mat_pow(&id, 117).unwrap();
        assert_eq!(r.matrix, id);
        // 1110101: six squarings, four extra multiplications
        assert_eq!(r.multiplications, 10);

        let shear = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let r = mat_pow(&shear, 5).unwrap();
        assert_eq!(
            r.matrix,
            DMatrix::from_row_slice(2, 2, &[1.0, 5.0, 0.0, 1.0])
        );

        assert_eq!(mat_pow(&shear, 0), Err(Error::NonPositive(0)));
        assert!(matches!(
            mat_pow(&DMatrix::zeros(2, 3), 2),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
