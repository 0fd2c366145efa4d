//! Interpolation error of x^4 on [-1, 1] as q varies, measured on a dense
//! grid. Fits run in parallel; rows keep the order of the q list.
//!
//! ```text
//! cargo run --example q_sweep
//! ```

use qspline::cli::sweep::{run_sweep, SweepStatus};
use qspline::{Polynomial, QParam};

fn main() -> qspline::Result<()> {
    let f = Polynomial::monomial(4);
    let knots = [-1.0, 0.0, 1.0];
    let qs: Vec<QParam> = (1..=12)
        .map(|k| QParam::new(0.25 * k as f64))
        .collect::<qspline::Result<_>>()?;

    println!("{:>6}  {:>10}  {:>10}", "q", "sup error", "rms error");
    for row in run_sweep(&f, &knots, &qs, 2001)? {
        match row.status {
            SweepStatus::Fitted => println!(
                "{:>6}  {:>10.6}  {:>10.6}",
                row.q,
                row.sup_error.unwrap_or(f64::NAN),
                row.l2_error.unwrap_or(f64::NAN)
            ),
            SweepStatus::Singular => println!("{:>6}  singular", row.q),
        }
    }
    Ok(())
}
