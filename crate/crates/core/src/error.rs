use thiserror::Error;

/// Errors raised by the q-calculus primitives and the spline construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid q parameter {0}: q must be finite and strictly positive")]
    InvalidQ(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Jackson series did not converge after {terms} terms (last term {last_term:e})")]
    Convergence { terms: usize, last_term: f64 },

    #[error("invalid knot data: {0}")]
    InvalidData(String),

    #[error("singular moment system{} at row {row}", fmt_q(.q))]
    SingularSystem { q: Option<f64>, row: usize },

    #[error("x = {x} lies outside the spline domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
}

fn fmt_q(q: &Option<f64>) -> String {
    match q {
        Some(q) => format!(" for q = {q}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
