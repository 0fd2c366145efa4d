//! Test-only helpers: an independently coded textbook clamped cubic spline
//! and random instance generation.

#![allow(dead_code)]

use rand::Rng;

/// Gaussian elimination with partial pivoting on a small dense system.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            for c in k..n {
                a[r][c] -= f * a[k][c];
            }
            b[r] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * x[c]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

/// Classical clamped cubic spline in second-derivative form, returned as
/// ascending monomial coefficients `[c0, c1, c2, c3]` per interval.
pub fn textbook_clamped_spline(x: &[f64], f: &[f64], d0: f64, dn: f64) -> Vec<[f64; 4]> {
    let n = x.len() - 1;
    let h: Vec<f64> = (0..n).map(|i| x[i + 1] - x[i]).collect();
    let slope: Vec<f64> = (0..n).map(|i| (f[i + 1] - f[i]) / h[i]).collect();
    let mut a = vec![vec![0.0; n + 1]; n + 1];
    let mut b = vec![0.0; n + 1];
    a[0][0] = 2.0 * h[0];
    a[0][1] = h[0];
    b[0] = 6.0 * (slope[0] - d0);
    for i in 1..n {
        a[i][i - 1] = h[i - 1];
        a[i][i] = 2.0 * (h[i - 1] + h[i]);
        a[i][i + 1] = h[i];
        b[i] = 6.0 * (slope[i] - slope[i - 1]);
    }
    a[n][n - 1] = h[n - 1];
    a[n][n] = 2.0 * h[n - 1];
    b[n] = 6.0 * (dn - slope[n - 1]);
    let m = gauss_solve(a, b);

    (0..n)
        .map(|i| {
            let (lo, hi, hh) = (x[i], x[i + 1], h[i]);
            let (ml, mr) = (m[i] / (6.0 * hh), m[i + 1] / (6.0 * hh));
            // ml (hi - x)^3 + mr (x - lo)^3
            let mut c = [
                ml * hi.powi(3) - mr * lo.powi(3),
                -3.0 * ml * hi * hi + 3.0 * mr * lo * lo,
                3.0 * ml * hi - 3.0 * mr * lo,
                -ml + mr,
            ];
            // cl (hi - x) + cr (x - lo)
            let cl = f[i] / hh - m[i] * hh / 6.0;
            let cr = f[i + 1] / hh - m[i + 1] * hh / 6.0;
            c[0] += cl * hi - cr * lo;
            c[1] += -cl + cr;
            c
        })
        .collect()
}

/// `n + 1` strictly increasing knots in `[lo, hi]` with gaps of at least `min_gap`.
pub fn random_knots<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64, min_gap: f64) -> Vec<f64> {
    loop {
        let mut k: Vec<f64> = (0..=n).map(|_| rng.gen_range(lo..=hi)).collect();
        k.sort_by(f64::total_cmp);
        if k.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            return k;
        }
    }
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
