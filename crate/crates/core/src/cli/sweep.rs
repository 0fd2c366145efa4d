//! q-sweeps: sample a polynomial, clamp with its exact formal q-derivative,
//! fit, and measure the error on a dense grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::qcalc::QParam;
use crate::spline::{fit, KnotDataSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    Fitted,
    Singular,
}

/// Errors are `None` when the fit was singular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub q: f64,
    pub sup_error: Option<f64>,
    pub l2_error: Option<f64>,
    pub status: SweepStatus,
}

/// `count` equally spaced points from `lo` to `hi`, both ends hit exactly.
pub fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = count - 1;
            (0..count)
                .map(|k| {
                    if k == last {
                        hi
                    } else {
                        lo + (hi - lo) * (k as f64 / last as f64)
                    }
                })
                .collect()
        }
    }
}

/// One row per entry of `qs`, in input order. Fits run in parallel.
///
/// Singular fits become [`SweepStatus::Singular`] rows; invalid knots are an
/// error for the whole sweep.
pub fn run_sweep(
    poly: &Polynomial,
    knots: &[f64],
    qs: &[QParam],
    grid_points: usize,
) -> Result<Vec<SweepRow>> {
    if grid_points < 2 {
        return Err(Error::InvalidData(
            "sweep grid needs at least two points".to_string(),
        ));
    }
    // validate once so per-q failures can only be numerical
    KnotDataSet::from_polynomial(poly, knots.to_vec(), QParam::CLASSICAL)?;
    let xs = grid(knots[0], knots[knots.len() - 1], grid_points);

    qs.par_iter()
        .map(|&q| {
            let data = KnotDataSet::from_polynomial(poly, knots.to_vec(), q)?;
            match fit(&data, q) {
                Ok(model) => {
                    let mut sup: f64 = 0.0;
                    let mut sq = 0.0;
                    for &x in &xs {
                        let e = (model.evaluate(x)? - poly.eval(x)).abs();
                        sup = sup.max(e);
                        sq += e * e;
                    }
                    Ok(SweepRow {
                        q: q.get(),
                        sup_error: Some(sup),
                        l2_error: Some((sq / xs.len() as f64).sqrt()),
                        status: SweepStatus::Fitted,
                    })
                }
                Err(Error::SingularSystem { .. }) => Ok(SweepRow {
                    q: q.get(),
                    sup_error: None,
                    l2_error: None,
                    status: SweepStatus::Singular,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}
