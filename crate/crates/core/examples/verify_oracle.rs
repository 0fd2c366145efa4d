//! Cross-checks a fit against the dense 4n x 4n constraint system, which
//! solves for all monomial coefficients directly, then prints the
//! per-condition verification report.
//!
//! ```text
//! cargo run --example verify_oracle
//! ```

use qspline::oracle::{assemble_dense, dense_solve, verify_model, DEFAULT_VERIFY_TOL};
use qspline::{fit, KnotDataSet, QParam};

fn main() -> qspline::Result<()> {
    let knots = vec![-2.0, -0.7, 0.4, 1.1, 2.5];
    let data = KnotDataSet::from_fn(knots, |x: f64| (1.3 * x).sin(), 0.8, -1.1)?;
    let q = QParam::new(1.3)?;

    let model = fit(&data, q)?;
    let system = assemble_dense(&data, q);
    let oracle = dense_solve(&system)?;
    println!("dense system of order {}, smallest pivot {:.3e}", system.order(), oracle.min_pivot);
    for (i, (piece, direct)) in model.pieces().iter().zip(&oracle.pieces).enumerate() {
        let gap = piece
            .poly
            .padded(4)
            .iter()
            .zip(direct.padded(4))
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        println!("  piece {}: {}   (oracle gap {gap:.1e})", i + 1, piece.poly);
    }

    let report = verify_model(&model, DEFAULT_VERIFY_TOL);
    println!(
        "verification: passed = {}, {} checks, max residual {:.2e}",
        report.passed,
        report.checks.len(),
        report.max_residual
    );
    for check in report.checks.iter().take(6) {
        println!("  {:?}: residual {:.2e}", check.condition, check.residual);
    }
    Ok(())
}
