//! Small linear solvers: guarded tridiagonal elimination and dense Gaussian
//! elimination with partial pivoting.

use crate::dd::two_sum;

/// Relative pivot threshold used by both solvers.
pub(crate) const PIVOT_RTOL: f64 = 1e-12;

/// Why a solve broke down. `row` is the elimination step that failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Breakdown {
    pub row: usize,
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Result of a dense solve.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DenseSolution {
    pub x: Vec<f64>,
    /// Smallest absolute pivot met during elimination.
    pub min_pivot: f64,
}

/// LU factors with row permutation, `P A = L U`, stored in one matrix.
#[derive(Debug, Clone)]
pub(crate) struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    pub min_pivot: f64,
}

impl LuFactors {
    /// Gaussian elimination with partial (row) pivoting.
    ///
    /// A pivot whose magnitude falls below `PIVOT_RTOL` times the largest
    /// entry of the original matrix is a breakdown.
    pub fn factor(a: &DenseMatrix) -> Result<Self, Breakdown> {
        let n = a.n;
        let scale = a.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let threshold = PIVOT_RTOL * scale;
        let mut m = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = if n == 0 { 0.0 } else { f64::INFINITY };

        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|r| (r, m[r * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_abs > threshold) {
                return Err(Breakdown { row: k });
            }
            min_pivot = min_pivot.min(pivot_abs);
            if p != k {
                for c in 0..n {
                    m.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = m[k * n + k];
            for r in k + 1..n {
                let factor = m[r * n + k] / pivot;
                m[r * n + k] = factor;
                if factor == 0.0 {
                    continue;
                }
                for c in k + 1..n {
                    m[r * n + c] -= factor * m[k * n + c];
                }
            }
        }
        Ok(Self {
            n,
            lu: m,
            perm,
            min_pivot,
        })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n, "rhs length must match matrix order");
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let s: f64 = (0..r).map(|c| self.lu[r * n + c] * y[c]).sum();
            y[r] -= s;
        }
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| self.lu[r * n + c] * y[c]).sum();
            y[r] = (y[r] - s) / self.lu[r * n + r];
        }
        y
    }
}

pub(crate) fn dense_solve(a: &DenseMatrix, b: &[f64]) -> Result<DenseSolution, Breakdown> {
    let lu = LuFactors::factor(a)?;
    Ok(DenseSolution {
        x: lu.solve(b),
        min_pivot: lu.min_pivot,
    })
}

/// `b - (A + A_lo) x`, each row accumulated in twice-working precision
/// (error-free products and sums). `a_lo` holds the rounding errors of the
/// entries of `a`, when known.
pub(crate) fn residual_compensated(
    a: &DenseMatrix,
    a_lo: Option<&DenseMatrix>,
    x: &[f64],
    b: &[f64],
) -> Vec<f64> {
    (0..a.n)
        .map(|r| {
            let mut sum = b[r];
            let mut err = 0.0;
            for (j, (&aij, &xj)) in a.row(r).iter().zip(x).enumerate() {
                let p = -aij * xj;
                let pe = (-aij).mul_add(xj, -p);
                let (s, e) = two_sum(sum, p);
                err += e + pe;
                if let Some(lo) = a_lo {
                    err -= lo.row(r)[j] * xj;
                }
                sum = s;
            }
            sum + err
        })
        .collect()
}

/// Tridiagonal forward elimination and back substitution (Thomas algorithm)
/// without pivoting.
///
/// `sub[i]` sits at (i+1, i) and `sup[i]` at (i, i+1). Fails when a pivot
/// drops below `PIVOT_RTOL` times the largest magnitude in its original row.
pub(crate) fn thomas(
    sub: &[f64],
    main: &[f64],
    sup: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>, Breakdown> {
    let n = main.len();
    let row_max = |i: usize| {
        let mut m = main[i].abs();
        if i > 0 {
            m = m.max(sub[i - 1].abs());
        }
        if i + 1 < n {
            m = m.max(sup[i].abs());
        }
        m
    };

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 0..n {
        let (pivot, carried) = if i == 0 {
            (main[0], rhs[0])
        } else {
            (
                main[i] - sub[i - 1] * c[i - 1],
                rhs[i] - sub[i - 1] * d[i - 1],
            )
        };
        if !(pivot.abs() > PIVOT_RTOL * row_max(i)) {
            return Err(Breakdown { row: i });
        }
        if i + 1 < n {
            c[i] = sup[i] / pivot;
        }
        d[i] = carried / pivot;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}
