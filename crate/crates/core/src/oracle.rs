//! Independent cross-check of the moment-based construction.
//!
//! [`assemble_dense`] writes every spline condition (interpolation at both
//! ends of each interval, formal `D_q` and `D_q^2` continuity at interior
//! knots, clamped first q-derivatives at the ends) as one row of a dense
//! `4n x 4n` system over the monomial coefficients of all pieces. It uses
//! nothing but `D_q x^k = [k]_q x^(k-1)`; moments, `h_hat`, and the
//! integration constants never appear. [`verify_model`] measures how well a
//! model satisfies the same conditions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::dd::{self, DoubleF64};
use crate::linalg::{self, DenseMatrix};
use crate::poly::Polynomial;
use crate::qcalc::QParam;
use crate::spline::{assemble_system, KnotDataSet, QSplineModel};

/// Relative residual bound accepted from [`dense_solve`].
pub const DENSE_RESIDUAL_RTOL: f64 = 1e-8;

/// Default tolerance for [`verify_model`].
pub const DEFAULT_VERIFY_TOL: f64 = 1e-8;

/// Dense constraint system; unknown `4 (i - 1) + k` is the `x^k`
/// coefficient of piece `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseConstraintSystem {
    matrix: DenseMatrix,
    /// Rounding errors of the entries of `matrix`.
    matrix_lo: DenseMatrix,
    rhs: Vec<f64>,
    q: QParam,
}

impl DenseConstraintSystem {
    pub fn order(&self) -> usize {
        self.matrix.n
    }

    pub fn intervals(&self) -> usize {
        self.matrix.n / 4
    }

    pub fn row(&self, r: usize) -> &[f64] {
        self.matrix.row(r)
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// `M c - rhs` for a stacked coefficient vector `c`.
    pub fn residual(&self, coeffs: &[f64]) -> Vec<f64> {
        self.matrix
            .mul_vec(coeffs)
            .into_iter()
            .zip(&self.rhs)
            .map(|(a, b)| a - b)
            .collect()
    }
}

/// Row weights of `D_q^order x^k` at `x` for `k = 0..4`, i.e.
/// `[k]_q [k-1]_q ... x^(k - order)`, in double-double precision.
fn dq_row(x: f64, order: u32, q: QParam) -> [DoubleF64; 4] {
    let xd = DoubleF64::from(x);
    let bracket = |m: u32| dd::q_bracket(m, q.get());
    let mut w = [DoubleF64::ZERO; 4];
    for (k, slot) in w.iter_mut().enumerate() {
        let k = k as u32;
        if k < order {
            continue;
        }
        let mut v = (0..order).fold(DoubleF64::ONE, |acc, j| acc.mul(bracket(k - j)));
        for _ in 0..k - order {
            v = v.mul(xd);
        }
        *slot = v;
    }
    w
}

pub fn assemble_dense(data: &KnotDataSet, q: QParam) -> DenseConstraintSystem {
    let n = data.intervals();
    let x = data.knots();
    let f = data.values();
    let mut m = DenseMatrix::zeros(4 * n);
    let mut m_lo = DenseMatrix::zeros(4 * n);
    let mut rhs = vec![0.0; 4 * n];
    let mut row = 0;

    let mut put = |r: usize, piece: usize, w: [DoubleF64; 4], negate: bool| {
        for (k, v) in w.iter().enumerate() {
            let v = if negate { v.neg() } else { *v };
            m.set(r, 4 * (piece - 1) + k, v.hi);
            m_lo.set(r, 4 * (piece - 1) + k, v.lo);
        }
    };

    for i in 1..=n {
        put(row, i, dq_row(x[i - 1], 0, q), false);
        rhs[row] = f[i - 1];
        row += 1;
        put(row, i, dq_row(x[i], 0, q), false);
        rhs[row] = f[i];
        row += 1;
    }
    for order in [1, 2] {
        for i in 1..n {
            put(row, i, dq_row(x[i], order, q), false);
            put(row, i + 1, dq_row(x[i], order, q), true);
            row += 1;
        }
    }
    put(row, 1, dq_row(x[0], 1, q), false);
    rhs[row] = data.d_left();
    row += 1;
    put(row, n, dq_row(x[n], 1, q), false);
    rhs[row] = data.d_right();
    row += 1;
    debug_assert_eq!(row, 4 * n);

    DenseConstraintSystem {
        matrix: m,
        matrix_lo: m_lo,
        rhs,
        q,
    }
}

/// Pieces recovered by the dense oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSolution {
    pub pieces: Vec<Polynomial>,
    /// Smallest pivot magnitude met during elimination; a conditioning hint.
    pub min_pivot: f64,
}

/// Rounds of iterative refinement applied by [`dense_solve`].
const REFINEMENT_STEPS: usize = 4;

/// Solves the constraint system by row-pivoted Gaussian elimination.
///
/// Monomial coefficients of pieces on narrow intervals away from the origin
/// are large and nearly cancel, so the plain solve is followed by a few
/// rounds of iterative refinement against double-double residuals of the
/// unrounded constraint rows.
pub fn dense_solve(sys: &DenseConstraintSystem) -> Result<DenseSolution> {
    let q = Some(sys.q.get());
    let lu = linalg::LuFactors::factor(&sys.matrix)
        .map_err(|b| Error::SingularSystem { q, row: b.row })?;
    let mut x = lu.solve(&sys.rhs);
    for _ in 0..REFINEMENT_STEPS {
        let r = linalg::residual_compensated(&sys.matrix, Some(&sys.matrix_lo), &x, &sys.rhs);
        let dx = lu.solve(&r);
        if dx.iter().all(|d| *d == 0.0) {
            break;
        }
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
    }

    let b_norm = sys.rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let residual = sys.residual(&x);
    if let Some(row) = residual
        .iter()
        .position(|r| !(r.abs() <= DENSE_RESIDUAL_RTOL * (1.0 + b_norm)))
    {
        return Err(Error::SingularSystem { q, row });
    }
    Ok(DenseSolution {
        pieces: x.chunks(4).map(|c| Polynomial::new(c.to_vec())).collect(),
        min_pivot: lu.min_pivot,
    })
}

/// The spline condition a residual belongs to. Intervals are numbered
/// `1..=n`, knots `0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Condition {
    /// `S_piece(x_knot) = f_knot`.
    Interpolation { piece: usize, knot: usize },
    /// `D_q S_knot(x_knot) = D_q S_(knot+1)(x_knot)`.
    FirstDerivativeContinuity { knot: usize },
    /// `D_q^2 S_knot(x_knot) = D_q^2 S_(knot+1)(x_knot)`.
    SecondDerivativeContinuity { knot: usize },
    /// `D_q S_1(x_0) = D_q f(x_0)`.
    ClampedLeft,
    /// `D_q S_n(x_n) = D_q f(x_n)`.
    ClampedRight,
    /// `D_q^2 S_piece(x_knot) = mu_knot`.
    MomentConsistency { piece: usize, knot: usize },
    /// Row of the tridiagonal moment system `A mu = b`.
    MomentSystem { row: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub residual: f64,
    /// Sum of magnitudes of the terms entering the residual.
    pub scale: f64,
    pub passed: bool,
}

/// Residuals of every spline condition, each judged against
/// `|residual| <= tol * (1 + scale)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub q: f64,
    pub tol: f64,
    pub passed: bool,
    pub max_residual: f64,
    pub checks: Vec<ConditionCheck>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn verify_model(model: &QSplineModel, tol: f64) -> VerificationReport {
    let q = model.q();
    let data = model.data();
    let x = data.knots();
    let f = data.values();
    let mu = model.moments().as_slice();
    let pieces = model.pieces();
    let n = data.intervals();

    let derivs: Vec<[Polynomial; 3]> = pieces
        .iter()
        .map(|p| {
            let d1 = p.formal_dq_poly(q, 1);
            let d2 = d1.q_derivative(q);
            [p.poly.clone(), d1, d2]
        })
        .collect();

    let mut checks = Vec::with_capacity(8 * n + 2);
    let mut push = |condition, residual: f64, scale: f64| {
        let passed = residual.abs() <= tol * (1.0 + scale);
        checks.push(ConditionCheck {
            condition,
            residual,
            scale,
            passed,
        });
    };

    for i in 1..=n {
        let p = &derivs[i - 1][0];
        for knot in [i - 1, i] {
            push(
                Condition::Interpolation { piece: i, knot },
                p.eval(x[knot]) - f[knot],
                p.abs_eval(x[knot]) + f[knot].abs(),
            );
        }
    }
    for (order, make) in [
        (1, (|knot| Condition::FirstDerivativeContinuity { knot }) as fn(usize) -> Condition),
        (2, |knot| Condition::SecondDerivativeContinuity { knot }),
    ] {
        for knot in 1..n {
            let left = &derivs[knot - 1][order];
            let right = &derivs[knot][order];
            push(
                make(knot),
                left.eval(x[knot]) - right.eval(x[knot]),
                left.abs_eval(x[knot]) + right.abs_eval(x[knot]),
            );
        }
    }
    let first = &derivs[0][1];
    push(
        Condition::ClampedLeft,
        first.eval(x[0]) - data.d_left(),
        first.abs_eval(x[0]) + data.d_left().abs(),
    );
    let last = &derivs[n - 1][1];
    push(
        Condition::ClampedRight,
        last.eval(x[n]) - data.d_right(),
        last.abs_eval(x[n]) + data.d_right().abs(),
    );
    for i in 1..=n {
        let d2 = &derivs[i - 1][2];
        for knot in [i - 1, i] {
            push(
                Condition::MomentConsistency { piece: i, knot },
                d2.eval(x[knot]) - mu[knot],
                d2.abs_eval(x[knot]) + mu[knot].abs(),
            );
        }
    }

    let system = assemble_system(data, q);
    let ax = system.apply(mu);
    for (row, (lhs, b)) in ax.iter().zip(system.rhs()).enumerate() {
        let mut scale = system.main()[row].abs() * mu[row].abs() + b.abs();
        if row > 0 {
            scale += system.sub()[row - 1].abs() * mu[row - 1].abs();
        }
        if row < n {
            scale += system.sup()[row].abs() * mu[row + 1].abs();
        }
        push(Condition::MomentSystem { row }, lhs - b, scale);
    }

    let passed = checks.iter().all(|c| c.passed);
    let max_residual = checks
        .iter()
        .map(|c| c.residual.abs())
        .fold(0.0, f64::max);
    VerificationReport {
        q: q.get(),
        tol,
        passed,
        max_residual,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::q_bracket;
    use crate::spline::{fit, Moments, SplinePiece};

    fn q(v: f64) -> QParam {
        QParam::new(v).unwrap()
    }

    fn x4_data(qv: f64) -> KnotDataSet {
        let d = q_bracket(4, q(qv));
        KnotDataSet::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], -d, d).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn dense_dimensions() {
        assert_eq!(assemble_dense(&x4_data(2.0), q(2.0)).order(), 8);
        let one = KnotDataSet::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0, 1.0).unwrap();
        let sys = assemble_dense(&one, q(0.8));
        assert_eq!(sys.order(), 4);
        assert_eq!(sys.intervals(), 1);
    }

    #[test]
    fn dense_line() {
        for qv in [0.3, 1.0, 2.2] {
            let d = KnotDataSet::from_fn(vec![0.5, 1.5], |x| 3.0 * x - 1.0, 3.0, 3.0).unwrap();
            let sol = dense_solve(&assemble_dense(&d, q(qv))).unwrap();
            assert!(close(&sol.pieces[0].padded(4), &[-1.0, 3.0, 0.0, 0.0], 1e-12));
        }
    }

    #[test]
    fn dense_x4_example() {
        let s2 = dense_solve(&assemble_dense(&x4_data(2.0), q(2.0))).unwrap();
        assert!(close(&s2.pieces[0].padded(4), &[0.0, 0.0, -2.0, -3.0], 1e-12));
        assert!(close(&s2.pieces[1].padded(4), &[0.0, 0.0, -2.0, 3.0], 1e-12));
        assert!(s2.min_pivot > 0.0);

        let s1 = dense_solve(&assemble_dense(&x4_data(1.0), q(1.0))).unwrap();
        assert!(close(&s1.pieces[0].padded(4), &[0.0, 0.0, -1.0, -2.0], 1e-12));
        assert!(close(&s1.pieces[1].padded(4), &[0.0, 0.0, -1.0, 2.0], 1e-12));
    }

    #[test]
    fn dense_reproduces_cubic() {
        let p = Polynomial::monomial(3);
        let d = KnotDataSet::from_polynomial(&p, vec![-1.0, 0.5, 2.0], q(1.4)).unwrap();
        let sol = dense_solve(&assemble_dense(&d, q(1.4))).unwrap();
        for piece in &sol.pieces {
            assert!(close(&piece.padded(4), &[0.0, 0.0, 0.0, 1.0], 1e-10));
        }
    }

    #[test]
    fn dense_singular_configuration() {
        let d = KnotDataSet::new(vec![1.0, 2.0], vec![0.0, 1.0], 0.0, 0.0).unwrap();
        assert!(matches!(
            dense_solve(&assemble_dense(&d, q(0.5))),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn verify_fitted_model_passes() {
        let m = fit(&x4_data(2.0), q(2.0)).unwrap();
        let report = verify_model(&m, 1e-8);
        assert!(report.passed, "{report:?}");
        // 2n interpolation + 2(n-1) continuity + 2 clamped + 2n moment + (n+1) system
        assert_eq!(report.checks.len(), 4 + 2 + 2 + 4 + 3);
    }

    #[test]
    fn verify_detects_perturbed_piece() {
        let m = fit(&x4_data(2.0), q(2.0)).unwrap();
        let mut pieces = m.pieces().to_vec();
        let mut c = pieces[1].poly.padded(4);
        c[0] += 1e-3;
        pieces[1] = SplinePiece {
            poly: Polynomial::new(c),
            ..pieces[1].clone()
        };
        let bad = QSplineModel::from_parts(m.q(), m.data().clone(), m.moments().clone(), pieces)
            .unwrap();
        let report = verify_model(&bad, 1e-8);
        assert!(!report.passed);
        assert!(report.failures().any(|c| matches!(
            c.condition,
            Condition::Interpolation { piece: 2, .. }
        )));
    }

    #[test]
    fn verify_line_is_exact() {
        let d = KnotDataSet::from_fn(vec![-1.0, 0.0, 2.0], |x| 0.5 * x + 2.0, 0.5, 0.5).unwrap();
        let m = fit(&d, q(0.6)).unwrap();
        let report = verify_model(&m, 1e-8);
        assert!(report.passed);
        assert!(report.max_residual < 1e-14);
    }

    #[test]
    fn verify_detects_wrong_moments() {
        let m = fit(&x4_data(1.0), q(1.0)).unwrap();
        let bad = QSplineModel::from_parts(
            m.q(),
            m.data().clone(),
            Moments::new(vec![10.0, -2.5, 10.0]),
            m.pieces().to_vec(),
        )
        .unwrap();
        let report = verify_model(&bad, 1e-8);
        assert!(report
            .failures()
            .any(|c| matches!(c.condition, Condition::MomentSystem { .. })));
    }
}
