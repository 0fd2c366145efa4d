//! Clamped cubic q-spline construction and evaluation.
//!
//! With moments `mu_i = D_q^2 S(x_i)`, the second q-derivative of piece `i`
//! is the linear interpolant of `mu_(i-1)` and `mu_i` on `[x_(i-1), x_i]`.
//! Two q-integrations give
//!
//! ```text
//! S_i(x) = mu_i     / ([3]_q! h_i) (x - x_(i-1))^3_q
//!        - mu_(i-1) / ([3]_q! h_i) (x - x_i)^3_q
//!        + A_i (x - x_(i-1)) + B_i
//! ```
//!
//! where `A_i`, `B_i` enforce interpolation at both ends of the interval.
//! Matching formal first q-derivatives at interior knots and prescribing
//! them at both ends yields a tridiagonal system for the moments.
//!
//! Intervals are numbered `1..=n` throughout: interval `i` spans
//! `[x_(i-1), x_i]` and is stored at `pieces()[i - 1]`.

use crate::dd::{self, DoubleF64};
use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};
use crate::poly::Polynomial;
use crate::qcalc::QParam;

/// Relative residual bound accepted from the moment solve.
pub const MOMENT_RESIDUAL_RTOL: f64 = 1e-9;

/// Strictly increasing knots with values and the two clamped end conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotDataSet {
    knots: Vec<f64>,
    values: Vec<f64>,
    d_left: f64,
    d_right: f64,
}

impl KnotDataSet {
    /// `d_left` and `d_right` are the prescribed q-derivatives `D_q f(x_0)`
    /// and `D_q f(x_n)`.
    pub fn new(knots: Vec<f64>, values: Vec<f64>, d_left: f64, d_right: f64) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.len() < 2 {
            return Err(Error::InvalidData(
                "at least two knots are required".to_string(),
            ));
        }
        if let Some(i) = knots.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidData(format!("knot {i} is not finite")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("value {i} is not finite")));
        }
        if !d_left.is_finite() || !d_right.is_finite() {
            return Err(Error::InvalidData(
                "boundary q-derivatives must be finite".to_string(),
            ));
        }
        if let Some(i) = knots.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidData(format!(
                "knots must be strictly increasing: x[{}] = {} is not below x[{}] = {}",
                i,
                knots[i],
                i + 1,
                knots[i + 1]
            )));
        }
        Ok(Self {
            knots,
            values,
            d_left,
            d_right,
        })
    }

    /// Samples `f` at `knots`, with explicit boundary q-derivatives.
    pub fn from_fn<F: Fn(f64) -> f64>(
        knots: Vec<f64>,
        f: F,
        d_left: f64,
        d_right: f64,
    ) -> Result<Self> {
        let values = knots.iter().map(|&x| f(x)).collect();
        Self::new(knots, values, d_left, d_right)
    }

    /// Samples a polynomial and clamps both ends to its formal q-derivative.
    pub fn from_polynomial(p: &Polynomial, knots: Vec<f64>, q: QParam) -> Result<Self> {
        let dp = p.q_derivative(q);
        let (Some(&first), Some(&last)) = (knots.first(), knots.last()) else {
            return Err(Error::InvalidData("no knots given".to_string()));
        };
        let (dl, dr) = (dp.eval(first), dp.eval(last));
        Self::from_fn(knots, |x| p.eval(x), dl, dr)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn d_left(&self) -> f64 {
        self.d_left
    }

    pub fn d_right(&self) -> f64 {
        self.d_right
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    /// Width `h_i = x_i - x_(i-1)` of interval `i`.
    pub fn width(&self, i: usize) -> f64 {
        self.check_interval(i);
        self.knots[i] - self.knots[i - 1]
    }

    /// First-order divided difference `f[x_(i-1), x_i]` for interval `i`.
    pub fn divided_difference(&self, i: usize) -> f64 {
        self.check_interval(i);
        (self.values[i] - self.values[i - 1]) / (self.knots[i] - self.knots[i - 1])
    }

    fn check_interval(&self, i: usize) {
        assert!(
            (1..=self.intervals()).contains(&i),
            "interval index {i} outside 1..={}",
            self.intervals()
        );
    }
}

/// `(q x_i - x_(i-1)) (x_i - q x_(i-1)) / (x_i - x_(i-1))` for interval `i`.
///
/// Reduces to `h_i` at `q = 1`; may vanish or change sign otherwise.
pub fn h_hat(knots: &[f64], i: usize, q: QParam) -> f64 {
    let (a, b) = (knots[i - 1], knots[i]);
    let qv = q.get();
    (qv * b - a) * (b - qv * a) / (b - a)
}

/// The moment system `A mu = b`, with `A` stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    sub: Vec<f64>,
    main: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
    q: Option<QParam>,
}

impl TridiagonalSystem {
    /// `sub[i]` is entry `(i+1, i)`, `sup[i]` is entry `(i, i+1)`.
    pub fn new(sub: Vec<f64>, main: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = main.len();
        if n == 0 || rhs.len() != n || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::InvalidData(format!(
                "inconsistent tridiagonal dimensions: sub {}, main {}, super {}, rhs {}",
                sub.len(),
                main.len(),
                sup.len(),
                rhs.len()
            )));
        }
        Ok(Self {
            sub,
            main,
            sup,
            rhs,
            q: None,
        })
    }

    /// Tags the system with the q it was assembled for; reported on failure.
    pub fn with_q(mut self, q: QParam) -> Self {
        self.q = Some(q);
        self
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn main(&self) -> &[f64] {
        &self.main
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn q(&self) -> Option<QParam> {
        self.q
    }

    /// Number of unknowns.
    pub fn order(&self) -> usize {
        self.main.len()
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut v = self.main[i] * x[i];
                if i > 0 {
                    v += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// `A x - b`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.apply(x)
            .into_iter()
            .zip(&self.rhs)
            .map(|(ax, b)| ax - b)
            .collect()
    }

    fn to_dense(&self) -> DenseMatrix {
        let n = self.order();
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            a.set(i, i, self.main[i]);
            if i + 1 < n {
                a.set(i, i + 1, self.sup[i]);
                a.set(i + 1, i, self.sub[i]);
            }
        }
        a
    }
}

/// Moments `mu_0 .. mu_n`: formal second q-derivatives of the spline at the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments(Vec<f64>);

impl Moments {
    pub fn new(mu: Vec<f64>) -> Self {
        Self(mu)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Builds the `(n+1) x (n+1)` moment system for the clamped cubic q-spline.
///
/// Off-diagonal entries are the q-shifted squares
/// `(u - q v)^2_q = (u - q v)(u - q^2 v)` divided by the interval width; the
/// right-hand side is `[3]_q!` times differences of divided differences,
/// with the boundary q-derivatives in the first and last rows.
pub fn assemble_system(data: &KnotDataSet, q: QParam) -> TridiagonalSystem {
    let exact = MomentSystemDd::assemble(data, q);
    let round = |v: &[DoubleF64]| v.iter().map(|d| d.to_f64()).collect();
    TridiagonalSystem {
        sub: round(&exact.sub),
        main: round(&exact.main),
        sup: round(&exact.sup),
        rhs: round(&exact.rhs),
        q: Some(q),
    }
}

/// The moment system with entries carried in double-double precision, used
/// to refine moments beyond what the rounded entries determine.
struct MomentSystemDd {
    sub: Vec<DoubleF64>,
    main: Vec<DoubleF64>,
    sup: Vec<DoubleF64>,
    rhs: Vec<DoubleF64>,
}

impl MomentSystemDd {
    fn assemble(data: &KnotDataSet, q: QParam) -> Self {
        let x = data.knots();
        let f = data.values();
        let n = data.intervals();
        let qv = q.get();
        let qd = DoubleF64::from(qv);
        let b2 = dd::q_bracket(2, qv);
        let f3 = b2.mul(dd::q_bracket(3, qv));
        let d = |v: f64| DoubleF64::from(v);
        // (u - q v)^2_q / h = (u - q v)(u - q^2 v) / h
        let shifted = |u: f64, v: f64, h: DoubleF64| {
            let c = qd.mul(d(v));
            d(u).sub(c).mul(d(u).sub(c.mul(qd))).div(h)
        };

        let mut main = vec![DoubleF64::ZERO; n + 1];
        let mut sub = vec![DoubleF64::ZERO; n];
        let mut sup = vec![DoubleF64::ZERO; n];
        let mut slope = vec![DoubleF64::ZERO; n + 1];

        for i in 1..=n {
            let (lo, hi) = (x[i - 1], x[i]);
            let h = d(hi).sub(d(lo));
            // [2]_q h_hat_i with h_hat_i = (q x_i - x_(i-1))(x_i - q x_(i-1)) / h_i
            let hh = b2.mul(qd.mul(d(hi)).sub(d(lo)).mul(d(hi).sub(qd.mul(d(lo)))).div(h));
            main[i - 1] = main[i - 1].add(hh);
            main[i] = main[i].add(hh);
            sup[i - 1] = shifted(hi, lo, h);
            sub[i - 1] = shifted(lo, hi, h);
            slope[i] = d(f[i]).sub(d(f[i - 1])).div(h);
        }

        let mut rhs = vec![DoubleF64::ZERO; n + 1];
        rhs[0] = f3.mul(slope[1].sub(d(data.d_left())));
        for i in 1..n {
            rhs[i] = f3.mul(slope[i + 1].sub(slope[i]));
        }
        rhs[n] = f3.mul(d(data.d_right()).sub(slope[n]));
        Self {
            sub,
            main,
            sup,
            rhs,
        }
    }

    /// `b - A mu`, accumulated in double-double precision and rounded.
    fn residual(&self, mu: &[f64]) -> Vec<f64> {
        let n = self.main.len();
        (0..n)
            .map(|i| {
                let mut r = self.rhs[i].sub(self.main[i].mul(DoubleF64::from(mu[i])));
                if i > 0 {
                    r = r.sub(self.sub[i - 1].mul(DoubleF64::from(mu[i - 1])));
                }
                if i + 1 < n {
                    r = r.sub(self.sup[i].mul(DoubleF64::from(mu[i + 1])));
                }
                r.to_f64()
            })
            .collect()
    }
}

/// Rounds of iterative refinement applied to the moments in [`fit`].
const MOMENT_REFINEMENT_STEPS: usize = 3;

/// Iterative refinement of `mu` against the double-double moment system.
///
/// Strongly deformed systems (q far from 1) can be ill-conditioned enough
/// that rounding the entries alone shifts the moments visibly; corrections
/// solved with the rounded system recover the lost digits. A step that does
/// not shrink the correction ends the refinement.
fn refine_moments(exact: &MomentSystemDd, rounded: &TridiagonalSystem, mu: &mut [f64]) {
    let mut last = f64::INFINITY;
    for _ in 0..MOMENT_REFINEMENT_STEPS {
        let r = exact.residual(mu);
        let correction = linalg::thomas(&rounded.sub, &rounded.main, &rounded.sup, &r)
            .or_else(|_| linalg::dense_solve(&rounded.to_dense(), &r).map(|s| s.x));
        let Ok(dx) = correction else { return };
        let size = dx.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !(size < last) {
            return;
        }
        last = size;
        for (m, d) in mu.iter_mut().zip(&dx) {
            *m += d;
        }
        if size == 0.0 {
            return;
        }
    }
}

/// Solves the moment system.
///
/// Runs tridiagonal elimination first; if a pivot collapses (below `1e-12`
/// of its row's largest entry) or the residual bound is missed, re-solves
/// with dense row-pivoted elimination. Fails with
/// [`Error::SingularSystem`] when that breaks down too.
pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Moments> {
    let q = sys.q.map(QParam::get);
    let b_norm = sys.rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let bound = MOMENT_RESIDUAL_RTOL * (1.0 + b_norm);
    let worst_row = |mu: &[f64]| -> (usize, f64) {
        sys.residual(mu)
            .iter()
            .map(|r| if r.is_finite() { r.abs() } else { f64::INFINITY })
            .enumerate()
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best })
    };

    if let Ok(mu) = linalg::thomas(&sys.sub, &sys.main, &sys.sup, &sys.rhs) {
        if worst_row(&mu).1 <= bound {
            return Ok(Moments(mu));
        }
    }

    let dense = linalg::dense_solve(&sys.to_dense(), &sys.rhs)
        .map_err(|b| Error::SingularSystem { q, row: b.row })?;
    let (row, worst) = worst_row(&dense.x);
    if worst <= bound {
        Ok(Moments(dense.x))
    } else {
        Err(Error::SingularSystem { q, row })
    }
}

/// The integration constants `(A_i, B_i)` of interval `i`.
pub fn piece_constants(data: &KnotDataSet, q: QParam, moments: &Moments, i: usize) -> (f64, f64) {
    let (a, b) = piece_constants_dd(data, q, moments, i);
    (a.to_f64(), b.to_f64())
}

/// `A_i`, `B_i` carried in double-double precision; they feed the monomial
/// expansion, where large terms cancel.
fn piece_constants_dd(
    data: &KnotDataSet,
    q: QParam,
    moments: &Moments,
    i: usize,
) -> (DoubleF64, DoubleF64) {
    let x = data.knots();
    let f = data.values();
    let mu = moments.as_slice();
    let qv = q.get();
    let (lo, hi) = (x[i - 1], x[i]);
    let h = DoubleF64::from(hi).sub(DoubleF64::from(lo));
    let f3h = dd::q_bracket(2, qv).mul(dd::q_bracket(3, qv)).mul(h);
    let cube_lo_hi = dd::q_shifted_power(lo, hi, 3, qv); // (x_(i-1) - x_i)^3_q
    let cube_hi_lo = dd::q_shifted_power(hi, lo, 3, qv); // (x_i - x_(i-1))^3_q
    let (mu_lo, mu_hi) = (DoubleF64::from(mu[i - 1]), DoubleF64::from(mu[i]));

    let b = DoubleF64::from(f[i - 1]).add(mu_lo.mul(cube_lo_hi).div(f3h));
    let slope = DoubleF64::from(f[i]).sub(DoubleF64::from(f[i - 1])).div(h);
    let a = slope
        .sub(mu_hi.mul(cube_hi_lo).div(f3h.mul(h)))
        .sub(mu_lo.mul(cube_lo_hi).div(f3h.mul(h)));
    (a, b)
}

/// One cubic piece bound to its interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SplinePiece {
    pub x_lo: f64,
    pub x_hi: f64,
    pub poly: Polynomial,
}

impl SplinePiece {
    /// Formal `order`-th q-derivative of the piece polynomial at `x`.
    pub fn formal_dq(&self, q: QParam, x: f64, order: u32) -> f64 {
        self.formal_dq_poly(q, order).eval(x)
    }

    pub(crate) fn formal_dq_poly(&self, q: QParam, order: u32) -> Polynomial {
        (0..order).fold(self.poly.clone(), |p, _| p.q_derivative(q))
    }
}

/// Monomial-basis pieces from solved moments.
pub fn build_pieces(data: &KnotDataSet, q: QParam, moments: &Moments) -> Vec<SplinePiece> {
    let x = data.knots();
    let mu = moments.as_slice();
    let qv = q.get();
    let f3 = dd::q_bracket(2, qv).mul(dd::q_bracket(3, qv));
    (1..=data.intervals())
        .map(|i| {
            let (lo, hi) = (x[i - 1], x[i]);
            let f3h = f3.mul(DoubleF64::from(hi).sub(DoubleF64::from(lo)));
            let (a, b) = piece_constants_dd(data, q, moments, i);
            let w_right = DoubleF64::from(mu[i]).div(f3h);
            let w_left = DoubleF64::from(mu[i - 1]).div(f3h);
            let right = dd::q_power_expand(lo, 3, qv);
            let left = dd::q_power_expand(hi, 3, qv);
            let mut coeffs: Vec<f64> = right
                .iter()
                .zip(&left)
                .map(|(r, l)| r.mul(w_right).sub(l.mul(w_left)))
                .zip([b.sub(a.mul(DoubleF64::from(lo))), a, DoubleF64::ZERO, DoubleF64::ZERO])
                .map(|(c, linear)| c.add(linear).to_f64())
                .collect();
            coeffs.truncate(4);
            SplinePiece {
                x_lo: lo,
                x_hi: hi,
                poly: Polynomial::new(coeffs),
            }
        })
        .collect()
}

/// A fitted clamped cubic q-spline. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct QSplineModel {
    q: QParam,
    data: KnotDataSet,
    moments: Moments,
    pieces: Vec<SplinePiece>,
}

/// Assembles and solves the moment system, then builds the pieces.
pub fn fit(data: &KnotDataSet, q: QParam) -> Result<QSplineModel> {
    let exact = MomentSystemDd::assemble(data, q);
    let system = assemble_system(data, q);
    let mut moments = solve_tridiagonal(&system)?;
    refine_moments(&exact, &system, &mut moments.0);
    let pieces = build_pieces(data, q, &moments);
    Ok(QSplineModel {
        q,
        data: data.clone(),
        moments,
        pieces,
    })
}

impl QSplineModel {
    /// Rebuilds a model from stored parts (e.g. a deserialized document).
    ///
    /// Only structure is checked: piece count, interval tiling, degree and
    /// moment count. Whether the parts actually form a q-spline is the job
    /// of [`crate::oracle::verify_model`].
    pub fn from_parts(
        q: QParam,
        data: KnotDataSet,
        moments: Moments,
        pieces: Vec<SplinePiece>,
    ) -> Result<Self> {
        let n = data.intervals();
        if moments.as_slice().len() != n + 1 {
            return Err(Error::InvalidData(format!(
                "expected {} moments, got {}",
                n + 1,
                moments.as_slice().len()
            )));
        }
        if pieces.len() != n {
            return Err(Error::InvalidData(format!(
                "expected {n} pieces, got {}",
                pieces.len()
            )));
        }
        for (k, piece) in pieces.iter().enumerate() {
            let (lo, hi) = (data.knots()[k], data.knots()[k + 1]);
            if piece.x_lo != lo || piece.x_hi != hi {
                return Err(Error::InvalidData(format!(
                    "piece {} spans [{}, {}] but interval is [{lo}, {hi}]",
                    k + 1,
                    piece.x_lo,
                    piece.x_hi
                )));
            }
            if piece.poly.degree().unwrap_or(0) > 3 {
                return Err(Error::InvalidData(format!(
                    "piece {} has degree above three",
                    k + 1
                )));
            }
        }
        Ok(Self {
            q,
            data,
            moments,
            pieces,
        })
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn data(&self) -> &KnotDataSet {
        &self.data
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }

    pub fn pieces(&self) -> &[SplinePiece] {
        &self.pieces
    }

    /// `[x_0, x_n]`.
    pub fn domain(&self) -> (f64, f64) {
        let k = self.data.knots();
        (k[0], k[k.len() - 1])
    }

    /// Interval number (`1..=n`) whose piece governs `x`.
    ///
    /// The first interval is closed, later ones are `(x_(i-1), x_i]`. Points
    /// outside `[x_0, x_n]` are an error unless `extrapolate` is set, in
    /// which case they go to the nearest end piece.
    pub fn locate_segment(&self, x: f64, extrapolate: bool) -> Result<usize> {
        let (lo, hi) = self.domain();
        let n = self.data.intervals();
        if x.is_nan() {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        if x < lo || x > hi {
            return if extrapolate {
                Ok(if x < lo { 1 } else { n })
            } else {
                Err(Error::OutOfDomain { x, lo, hi })
            };
        }
        // number of interior knots strictly below x
        let below = self.data.knots()[1..n].partition_point(|&k| k < x);
        Ok(below + 1)
    }

    /// `S(x; q)` inside the domain.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.evaluate_with(x, false)
    }

    pub fn evaluate_with(&self, x: f64, extrapolate: bool) -> Result<f64> {
        let i = self.locate_segment(x, extrapolate)?;
        Ok(self.pieces[i - 1].poly.eval(x))
    }

    /// Formal `order`-th q-derivative of the governing piece at `x`.
    pub fn evaluate_formal_dq(&self, x: f64, order: u32) -> Result<f64> {
        let i = self.locate_segment(x, false)?;
        Ok(self.pieces[i - 1].formal_dq(self.q, x, order))
    }
}
