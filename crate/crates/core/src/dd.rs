//! Double-double ("unevaluated sum of two f64") arithmetic, used where
//! monomial coefficients are formed from large, nearly cancelling terms.

/// Unevaluated sum `hi + lo` carrying roughly twice the working precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DoubleF64 {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let t = s - a;
    (s, (a - (s - t)) + (b - t))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> DoubleF64 {
    let s = a + b;
    DoubleF64 {
        hi: s,
        lo: b - (s - a),
    }
}

impl DoubleF64 {
    pub(crate) const ZERO: DoubleF64 = DoubleF64 { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: DoubleF64 = DoubleF64 { hi: 1.0, lo: 0.0 };

    pub fn add(self, o: DoubleF64) -> DoubleF64 {
        let (s, e) = two_sum(self.hi, o.hi);
        fast_two_sum(s, e + self.lo + o.lo)
    }

    pub fn mul(self, o: DoubleF64) -> DoubleF64 {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        fast_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn sub(self, o: DoubleF64) -> DoubleF64 {
        self.add(o.neg())
    }

    pub fn div(self, o: DoubleF64) -> DoubleF64 {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(DoubleF64::from(q1)));
        fast_two_sum(q1, r.hi / o.hi)
    }

    /// Rounded to the nearest `f64`.
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> DoubleF64 {
        DoubleF64 {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl From<f64> for DoubleF64 {
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

/// `[m]_q = 1 + q + ... + q^(m-1)`.
pub(crate) fn q_bracket(m: u32, q: f64) -> DoubleF64 {
    let qd = DoubleF64::from(q);
    let mut sum = DoubleF64::ZERO;
    let mut term = DoubleF64::ONE;
    for _ in 0..m {
        sum = sum.add(term);
        term = term.mul(qd);
    }
    sum
}

/// `(x - c)^n_q = (x - c)(x - cq)...(x - cq^(n-1))` at `x`.
pub(crate) fn q_shifted_power(x: f64, c: f64, n: u32, q: f64) -> DoubleF64 {
    let (xd, qd) = (DoubleF64::from(x), DoubleF64::from(q));
    let mut shift = DoubleF64::from(c);
    let mut acc = DoubleF64::ONE;
    for _ in 0..n {
        acc = acc.mul(xd.sub(shift));
        shift = shift.mul(qd);
    }
    acc
}

/// Monomial coefficients (lowest first) of `(x - c)^n_q`.
pub(crate) fn q_power_expand(c: f64, n: u32, q: f64) -> Vec<DoubleF64> {
    let qd = DoubleF64::from(q);
    let mut shift = DoubleF64::from(c);
    let mut coeffs = vec![DoubleF64::ONE];
    for _ in 0..n {
        // multiply by (x - shift)
        let mut next = vec![DoubleF64::ZERO; coeffs.len() + 1];
        for (k, &ck) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(ck);
            next[k] = next[k].sub(ck.mul(shift));
        }
        coeffs = next;
        shift = shift.mul(qd);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_f64_keeps_low_bits() {
        let third = DoubleF64::from(1.0 / 3.0);
        let three = DoubleF64::from(3.0);
        let p = third.mul(three);
        // 3 * fl(1/3) = 1 - 2^-54 exactly
        assert_eq!(p.hi + p.lo, 1.0);
        assert_eq!(p.add(DoubleF64::ONE.neg()).hi, -(2.0_f64).powi(-54));
        assert_eq!(DoubleF64::ZERO.add(DoubleF64::from(2.5)).hi, 2.5);
    }

    #[test]
    fn division_and_expansion() {
        let third = DoubleF64::ONE.div(DoubleF64::from(3.0));
        let back = third.mul(DoubleF64::from(3.0)).sub(DoubleF64::ONE);
        assert!(back.to_f64().abs() < 1e-30);
        assert_eq!(q_bracket(3, 2.0).to_f64(), 7.0);
        let e: Vec<f64> = q_power_expand(1.0, 3, 2.0).iter().map(|c| c.to_f64()).collect();
        assert_eq!(e, vec![-8.0, 14.0, -7.0, 1.0]);
        // (3 - 1)(3 - 2)(3 - 4)
        assert_eq!(q_shifted_power(3.0, 1.0, 3, 2.0).to_f64(), -2.0);
    }
}
