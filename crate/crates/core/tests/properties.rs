//! Property-based checks of the q-calculus primitives, the spline
//! construction and the serialization/sweep plumbing.

use proptest::prelude::*;
use qspline::cli::document::ModelDocument;
use qspline::cli::sweep::run_sweep;
use qspline::oracle::{verify_model, DEFAULT_VERIFY_TOL};
use qspline::qcalc::{jackson_integral, q_bracket, q_power_expand, q_shifted_power};
use qspline::{fit, Error, KnotDataSet, Polynomial, QParam};

const QS: [f64; 5] = [0.3, 0.7, 1.0, 1.3, 2.0];

fn q_param() -> impl Strategy<Value = QParam> {
    prop::sample::select(QS.to_vec()).prop_map(|q| QParam::new(q).unwrap())
}

/// Strictly increasing knots in [-3, 3] with neighbours at least 0.05 apart.
fn knots(max_intervals: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0_f64, 2..=max_intervals + 1).prop_filter_map(
        "knots too close",
        |mut xs| {
            xs.sort_by(f64::total_cmp);
            xs.windows(2).all(|w| w[1] - w[0] >= 0.05).then_some(xs)
        },
    )
}

fn dataset() -> impl Strategy<Value = KnotDataSet> {
    knots(10).prop_flat_map(|xs| {
        let n = xs.len();
        (
            Just(xs),
            prop::collection::vec(-5.0..5.0_f64, n),
            -5.0..5.0_f64,
            -5.0..5.0_f64,
        )
            .prop_map(|(xs, fs, dl, dr)| KnotDataSet::new(xs, fs, dl, dr).unwrap())
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn shifted_power_derivative_rule(c in -2.0..2.0_f64, n in 1u32..=8, q in q_param()) {
        let lhs = q_power_expand(c, n, q).q_derivative(q);
        let rhs = q_power_expand(c, n - 1, q).scale(q_bracket(n, q));
        let scale = 1.0 + rhs.max_abs_coeff();
        for k in 0..n as usize {
            prop_assert!((lhs.coeff(k) - rhs.coeff(k)).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn antiderivative_round_trip(coeffs in prop::collection::vec(-10.0..10.0_f64, 0..8), q in q_param()) {
        let p = Polynomial::new(coeffs);
        let back = p.q_antiderivative(q).q_derivative(q);
        for k in 0..p.coeffs().len() {
            prop_assert!(close(back.coeff(k), p.coeff(k), 1e-15));
        }
    }

    #[test]
    fn expanded_shifted_power_matches_product(c in -2.0..2.0_f64, n in 0u32..=6, x in -3.0..3.0_f64, q in q_param()) {
        let expanded = q_power_expand(c, n, q);
        let direct = q_shifted_power(x, c, n, q);
        let scale = (1.0 + x.abs()) .max(1.0 + c.abs() * q.get().max(1.0).powi(n as i32));
        prop_assert!((expanded.eval(x) - direct).abs() <= 1e-12 * scale.powi(n as i32));
    }

    #[test]
    fn shifted_power_vanishes_at_roots(c in -2.0..2.0_f64, n in 1u32..=6, q in q_param()) {
        let p = q_power_expand(c, n, q);
        for k in 0..n as i32 {
            let root = c * q.get().powi(k);
            prop_assert!(p.eval(root).abs() <= 1e-10 * (1.0 + root.abs()).powi(n as i32));
        }
    }

    #[test]
    fn jackson_matches_antiderivative(n in 0i32..=5, x in 0.1..2.0_f64, q in prop::sample::select(vec![0.3, 0.6, 0.9])) {
        let q = QParam::new(q).unwrap();
        let tol = 1e-12;
        let series = jackson_integral(|t| t.powi(n), x, q, tol).unwrap();
        let exact = Polynomial::monomial(n as usize).q_antiderivative(q).eval(x);
        prop_assert!((series - exact).abs() <= 10.0 * tol * (1.0 + exact.abs()));
    }

    #[test]
    fn fit_is_deterministic(data in dataset(), q in q_param()) {
        match (fit(&data, q), fit(&data, q)) {
            (Ok(a), Ok(b)) => {
                let bits = |m: &qspline::QSplineModel| -> Vec<u64> {
                    m.pieces().iter().flat_map(|p| p.poly.padded(4)).map(f64::to_bits).collect()
                };
                prop_assert_eq!(bits(&a), bits(&b));
                prop_assert_eq!(a, b);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "fits disagree on success"),
        }
    }

    #[test]
    fn reversal_symmetry_gives_palindromic_moments(
        half in prop::collection::vec(0.05..1.0_f64, 1..=5),
        with_center in any::<bool>(),
        values in prop::collection::vec(-5.0..5.0_f64, 6),
        d in -5.0..5.0_f64,
        q in q_param(),
    ) {
        // symmetric grid from positive increments
        let mut right: Vec<f64> = half.iter().scan(0.0, |s, h| { *s += h; Some(*s) }).collect();
        if !with_center {
            right.iter_mut().for_each(|x| *x -= half[0] / 2.0);
        }
        let mut xs: Vec<f64> = right.iter().rev().map(|x| -x).collect();
        if with_center {
            xs.push(0.0);
        }
        xs.extend(&right);
        let m = xs.len();
        let fs: Vec<f64> = (0..m).map(|i| values[i.min(m - 1 - i)]).collect();
        let data = KnotDataSet::new(xs, fs, d, -d).unwrap();
        match fit(&data, q) {
            Ok(model) => {
                let mu = model.moments().as_slice();
                let scale = 1.0 + mu.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
                for i in 0..m {
                    prop_assert!((mu[i] - mu[m - 1 - i]).abs() <= 1e-9 * scale,
                        "mu = {:?}", mu);
                }
            }
            Err(Error::SingularSystem { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn document_json_round_trip_is_bit_exact(data in dataset(), q in q_param()) {
        if let Ok(model) = fit(&data, q) {
            let doc = ModelDocument::from_model(&model);
            let parsed = ModelDocument::from_json(&doc.to_json()).unwrap();
            prop_assert_eq!(&parsed, &doc);
            prop_assert_eq!(parsed.to_model().unwrap(), model);
        }
    }

    #[test]
    fn fitted_models_verify(data in dataset(), q in q_param()) {
        if let Ok(model) = fit(&data, q) {
            let report = verify_model(&model, DEFAULT_VERIFY_TOL);
            prop_assert!(report.passed, "{:?}", report.failures().next());
        }
    }

    #[test]
    fn sweep_rows_follow_q_order(
        qs in prop::collection::vec(0.2..2.5_f64, 1..6),
        seed in any::<u64>(),
    ) {
        let poly = Polynomial::new(vec![0.5, -1.0, 0.0, 0.0, 1.0]);
        let knots = [-1.0, -0.2, 0.4, 1.0];
        let params: Vec<QParam> = qs.iter().map(|&q| QParam::new(q).unwrap()).collect();
        let mut shuffled: Vec<usize> = (0..params.len()).collect();
        // deterministic permutation from the seed
        shuffled.sort_by_key(|&i| (i as u64 ^ seed).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let permuted: Vec<QParam> = shuffled.iter().map(|&i| params[i]).collect();

        let rows = run_sweep(&poly, &knots, &params, 101).unwrap();
        let permuted_rows = run_sweep(&poly, &knots, &permuted, 101).unwrap();
        for (k, &i) in shuffled.iter().enumerate() {
            prop_assert_eq!(permuted_rows[k], rows[i]);
        }
    }
}
