//! Dense univariate polynomials in the ascending monomial basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::qcalc::{q_bracket, QParam};

/// A real polynomial stored as ascending monomial coefficients.
///
/// `coeffs()[k]` multiplies `x^k`. Trailing zero coefficients are always
/// trimmed, so the zero polynomial has no coefficients at all and two equal
/// polynomials have identical coefficient vectors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k`, zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Coefficients zero-padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        (0..len).map(|k| self.coeff(k)).collect()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Sum of `|c_k| |x|^k`, the natural round-off scale of [`Polynomial::eval`].
    pub fn abs_eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    /// Largest coefficient magnitude (zero for the zero polynomial).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Formal Jackson q-derivative: `D_q x^k = [k]_q x^(k-1)`.
    ///
    /// At `q = 1` this is the ordinary derivative.
    pub fn q_derivative(&self, q: QParam) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| q_bracket(k as u32, q) * c)
                .collect(),
        )
    }

    /// Formal q-antiderivative with zero constant term, the coefficient-level
    /// inverse of [`Polynomial::q_derivative`].
    pub fn q_antiderivative(&self, q: QParam) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / q_bracket(k as u32 + 1, q)),
        );
        Self::new(coeffs)
    }
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            // plain digits for ordinary magnitudes, exponent form otherwise
            let a = if (1e-5..1e16).contains(&a) {
                a.to_string()
            } else {
                format!("{a:e}")
            };
            match k {
                0 => write!(f, "{a}")?,
                1 if a == "1" => write!(f, "x")?,
                1 => write!(f, "{a}x")?,
                _ if a == "1" => write!(f, "x^{k}")?,
                _ => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.coeffs(), &[1.0, 2.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::new(vec![0.0, 0.0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn eval_examples() {
        let p = Polynomial::new(vec![8.0, 14.0, 7.0, 1.0]);
        assert_eq!(p.eval(-1.0), 0.0);
        assert_eq!(Polynomial::zero().eval(3.7), 0.0);
        let piece = Polynomial::new(vec![0.0, 0.0, -1.0, -2.0]);
        assert_eq!(piece.eval(-0.5), 0.0);
    }

    #[test]
    fn q_derivative_examples() {
        let cube = Polynomial::monomial(3);
        for qv in [0.3, 1.0, 2.0] {
            let d = cube.q_derivative(q(qv));
            assert_eq!(d.coeffs(), &[0.0, 0.0, 1.0 + qv + qv * qv]);
        }
        assert!(Polynomial::constant(5.0).q_derivative(q(0.7)).is_zero());
        assert_eq!(
            Polynomial::monomial(4).q_derivative(q(2.0)).coeffs(),
            &[0.0, 0.0, 0.0, 15.0]
        );
    }

    #[test]
    fn q_antiderivative_examples() {
        let a = Polynomial::monomial(2).q_antiderivative(q(2.0));
        assert_eq!(a.coeffs(), &[0.0, 0.0, 0.0, 1.0 / 7.0]);
        assert!(Polynomial::zero().q_antiderivative(q(0.5)).is_zero());
        assert_eq!(
            Polynomial::constant(1.0).q_antiderivative(q(2.0)).coeffs(),
            &[0.0, 1.0]
        );
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::new(vec![1.0, 1.0]);
        let b = Polynomial::new(vec![2.0, 1.0]);
        assert_eq!((&a * &b).coeffs(), &[2.0, 3.0, 1.0]);
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &b).coeffs(), &[3.0, 2.0]);
        assert_eq!((-&a).coeffs(), &[-1.0, -1.0]);
    }

    #[test]
    fn display_uses_exponent_for_extreme_magnitudes() {
        let p = Polynomial::new(vec![-3e-33, 0.0, 2.5e20]);
        assert_eq!(p.to_string(), "2.5e20x^2 - 3e-33");
    }

    #[test]
    fn display() {
        let p = Polynomial::new(vec![0.0, 0.0, -1.0, -2.0]);
        assert_eq!(p.to_string(), "-2x^3 - x^2");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
