//! Quantum-calculus primitives: q-integers, q-factorials, q-shifted powers,
//! the Jackson q-derivative and the Jackson q-integral.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Cap on the number of Jackson series terms.
pub const JACKSON_MAX_TERMS: usize = 10_000;

/// The deformation parameter `q`, validated to be finite and positive.
///
/// `q = 1` is legal everywhere and yields the classical (undeformed) limits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QParam(f64);

impl QParam {
    pub const CLASSICAL: QParam = QParam(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(Self(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<QParam> for f64 {
    fn from(q: QParam) -> f64 {
        q.0
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The q-integer `[n]_q = 1 + q + ... + q^(n-1)`.
///
/// Computed as an explicit geometric sum so `q = 1` needs no special case.
pub fn q_bracket(n: u32, q: QParam) -> f64 {
    let q = q.get();
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..n {
        sum += term;
        term *= q;
    }
    sum
}

/// The q-analogue of a real number, `[c]_q = (q^c - 1) / (q - 1)`, with the
/// analytic limit `c` at `q = 1`.
pub fn q_bracket_real(c: f64, q: QParam) -> f64 {
    if q.is_classical() {
        return c;
    }
    let q = q.get();
    // exp_m1/ln_1p keep precision when q is close to 1
    (c * q.ln()).exp_m1() / (q - 1.0)
}

/// The q-factorial `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: u32, q: QParam) -> f64 {
    (1..=n).map(|k| q_bracket(k, q)).product()
}

/// Value of the q-shifted power `(x - c)^n_q = (x - c)(x - cq)...(x - cq^(n-1))`.
pub fn q_shifted_power(x: f64, c: f64, n: u32, q: QParam) -> f64 {
    let mut out = 1.0;
    let mut shift = c;
    for _ in 0..n {
        out *= x - shift;
        shift *= q.get();
    }
    out
}

/// Monomial-basis expansion of the q-shifted power `(x - c)^n_q`.
///
/// The result is monic of degree `n`, with roots `c, cq, ..., cq^(n-1)`.
pub fn q_power_expand(c: f64, n: u32, q: QParam) -> Polynomial {
    let mut coeffs = vec![1.0];
    let mut shift = c;
    for _ in 0..n {
        // multiply by (x - shift)
        coeffs.push(0.0);
        for k in (0..coeffs.len()).rev() {
            let lower = if k > 0 { coeffs[k - 1] } else { 0.0 };
            coeffs[k] = lower - shift * coeffs[k];
        }
        shift *= q.get();
    }
    Polynomial::new(coeffs)
}

/// The literal Jackson difference quotient `(f(qx) - f(x)) / (qx - x)`.
///
/// Undefined (0/0) at `x = 0` and at `q = 1`; both are reported as
/// [`Error::Domain`] rather than silently replaced by a classical derivative.
pub fn q_diff_quotient<F>(f: F, x: f64, q: QParam) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if x == 0.0 {
        return Err(Error::Domain(
            "q-difference quotient is 0/0 at x = 0".to_string(),
        ));
    }
    if q.is_classical() {
        return Err(Error::Domain(
            "q-difference quotient is 0/0 at q = 1".to_string(),
        ));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite abscissa {x}")));
    }
    let qx = q.get() * x;
    Ok((f(qx) - f(x)) / (qx - x))
}

/// Jackson q-integral `(1 - q) x * sum_j q^j f(q^j x)` for `0 < q < 1`.
///
/// Summation stops once the geometric tail estimate `|t_j| q / (1 - q)` has
/// dropped below `tol * (1 + |partial|)` on two consecutive terms, so the
/// truncation error is of order `tol` relative to the result even for `q`
/// close to one. More than [`JACKSON_MAX_TERMS`] terms is a
/// [`Error::Convergence`].
pub fn jackson_integral<F>(f: F, x: f64, q: QParam, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let qv = q.get();
    if qv >= 1.0 {
        return Err(Error::Domain(format!(
            "Jackson series diverges for q = {qv} >= 1"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite abscissa {x}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let prefactor = (1.0 - qv) * x;
    let tail_factor = qv / (1.0 - qv);
    let mut partial = 0.0;
    let mut weight = 1.0; // q^j
    let mut small_run = 0;
    let mut last_term = f64::NAN;
    for _ in 0..JACKSON_MAX_TERMS {
        let term = prefactor * weight * f(weight * x);
        if !term.is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite at {}",
                weight * x
            )));
        }
        partial += term;
        last_term = term;
        if term.abs() * tail_factor < tol * (1.0 + partial.abs()) {
            small_run += 1;
            if small_run == 2 {
                return Ok(partial);
            }
        } else {
            small_run = 0;
        }
        weight *= qv;
    }
    Err(Error::Convergence {
        terms: JACKSON_MAX_TERMS,
        last_term,
    })
}
