//! Writes plot-ready CSV of x^4 and its q-spline interpolants for several q
//! to standard output (`x,f,q0.5,q1,q1.5`).
//!
//! ```text
//! cargo run --example figure_curves > curves.csv
//! ```

use qspline::cli::sweep::grid;
use qspline::{fit, KnotDataSet, Polynomial, QParam, QSplineModel};

fn main() -> qspline::Result<()> {
    let f = Polynomial::monomial(4);
    let knots = vec![-1.0, 0.0, 1.0];
    let qs = [0.5, 1.0, 1.5];
    let models = qs
        .iter()
        .map(|&q| {
            let q = QParam::new(q)?;
            fit(&KnotDataSet::from_polynomial(&f, knots.clone(), q)?, q)
        })
        .collect::<qspline::Result<Vec<QSplineModel>>>()?;

    let header: Vec<String> = qs.iter().map(|q| format!("q{q}")).collect();
    println!("x,f,{}", header.join(","));
    for x in grid(-1.0, 1.0, 201) {
        let values = models
            .iter()
            .map(|m| m.evaluate(x).map(|s| s.to_string()))
            .collect::<qspline::Result<Vec<_>>>()?;
        println!("{x},{},{}", f.eval(x), values.join(","));
    }
    Ok(())
}
