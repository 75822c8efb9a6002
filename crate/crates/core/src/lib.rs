//! Evaluation of one- and two-variable complex polynomials using only real
//! arithmetic.
//!
//! A complex number `a + jb` is carried as the 2×2 real matrix `aI + bJ`
//! (with `J = [[0, 1], [-1, 0]]`). Similarity-transforming that matrix to
//! companion form gives a Horner recursion on a real 2-vector whose final
//! state encodes the real and imaginary parts of the polynomial value.
//!
//! Coefficient lists are in **descending** powers throughout the crate:
//! `[c0, c1, ..., cn]` is `c0·s^n + c1·s^(n-1) + ... + cn`.
//!
//! Modules:
//! - [`rotation`]: the complex/rotation-matrix isomorphism and companion forms.
//! - [`horner`]: one-variable evaluation, derivatives and conjugate arithmetic.
//! - [`freqresp`]: `s = jω` specialization, transfer-function sweeps and
//!   operation-count models.
//! - [`sysmodel`]: time-constant and state-space conversions, matrix powers.
//! - [`poly2d`]: two-variable polynomials and 2D transfer functions.
//! - [`cli`]: the command implementations behind the `rotpoly` binary.

pub mod cli;
pub mod error;
pub mod freqresp;
pub mod horner;
pub mod poly2d;
pub mod rotation;
pub mod sysmodel;

pub use error::{Error, Result};
pub use freqresp::{FrequencyGrid, FrequencySample, GridScale, TransferFunctionSpec};
pub use horner::{CoefficientKind, EvalResult, OpCounter, PolySpec};
pub use poly2d::{Eval2DResult, Poly2DSpec, SeparableFactors};
pub use rotation::{CompanionPair, ComplexPoint, Mat2, RotationForm};
