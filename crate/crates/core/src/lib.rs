//! Clamped cubic q-splines.
//!
//! A cubic q-spline replaces the ordinary derivative in the classical
//! clamped cubic spline by the Jackson q-derivative
//! `D_q f(x) = (f(qx) - f(x)) / (qx - x)`. Each piece is a polynomial of
//! degree at most three; the pieces interpolate the data, their formal
//! first and second q-derivatives agree at interior knots, and the first
//! q-derivative is prescribed at both ends. The second q-derivatives at the
//! knots (the *moments*) solve a tridiagonal system. At `q = 1` everything
//! reduces to the textbook clamped cubic spline.
//!
//! The crate is organised as:
//!
//! - [`qcalc`]: q-integers, q-factorials, q-shifted powers, the Jackson
//!   q-integral and q-derivatives of monomial-basis [`Polynomial`]s.
//! - [`spline`]: knot data, moment-system assembly and solution, piece
//!   construction and evaluation ([`QSplineModel`]).
//! - [`oracle`]: an independent dense solver over all piece coefficients and
//!   a residual-based [`oracle::VerificationReport`].
//! - [`cli`]: dataset ingestion, model documents, grid evaluation and
//!   q-sweeps, shared by the `qspline` binary.
//!
//! ```
//! use qspline::{fit, KnotDataSet, QParam};
//!
//! let q = QParam::new(2.0).unwrap();
//! let d = qspline::qcalc::q_bracket(4, q); // D_q x^4 = [4]_q x^3
//! let data = KnotDataSet::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], -d, d).unwrap();
//! let model = fit(&data, q).unwrap();
//! assert!((model.moments().as_slice()[1] + 6.0).abs() < 1e-12);
//! assert!((model.evaluate(0.5).unwrap() + 0.125).abs() < 1e-12);
//! ```

// `!(a <= b)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod dd;
pub mod error;
mod linalg;
pub mod oracle;
pub mod poly;
pub mod qcalc;
pub mod spline;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use qcalc::QParam;
pub use spline::{fit, KnotDataSet, Moments, QSplineModel, SplinePiece, TridiagonalSystem};
