//! Clamped cubic q-spline of f(x) = x^4 on the knots -1, 0, 1 for a few q.
//!
//! The boundary q-derivatives are the exact formal ones, `D_q x^4 = [4]_q x^3`.
//!
//! ```text
//! cargo run --example x4_spline
//! ```

use qspline::{fit, KnotDataSet, Polynomial, QParam};

fn main() -> qspline::Result<()> {
    let f = Polynomial::monomial(4);
    for q in [0.5, 1.0, 1.5, 2.0] {
        let q = QParam::new(q)?;
        let data = KnotDataSet::from_polynomial(&f, vec![-1.0, 0.0, 1.0], q)?;
        let model = fit(&data, q)?;
        println!(
            "q = {}: D_q f(+-1) = {:+}, moments {:?}",
            q.get(),
            data.d_right(),
            model.moments().as_slice()
        );
        for (i, piece) in model.pieces().iter().enumerate() {
            println!("  S_{}(x) = {}   on [{}, {}]", i + 1, piece.poly, piece.x_lo, piece.x_hi);
        }
        println!("  S(0.5) = {:.6}, f(0.5) = {:.6}", model.evaluate(0.5)?, f.eval(0.5));
    }
    Ok(())
}
