//! Continued-fraction rational reconstruction of floating-point entries.

use crate::endo::EndoMap;
use crate::scalar::Scalar;

pub const MAX_DENOMINATOR: i64 = 64;

/// Closest rational `p/q` with `1 ≤ q ≤ max_den`, found from the convergents
/// and best semiconvergents of the continued fraction of `x`.
pub fn limit_denominator(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || max_den < 1 || x.abs() > 1e15 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut rest = x;
    loop {
        let a = rest.floor();
        let ai = a as i64;
        let q2 = q0 + ai * q1;
        if q2 > max_den {
            break;
        }
        let p2 = p0 + ai * p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            return Some((p1, q1));
        }
        rest = 1.0 / frac;
        if !rest.is_finite() || rest.abs() > 1e15 {
            return Some((p1, q1));
        }
    }
    let k = (max_den - q0) / q1;
    let (bp, bq) = (p0 + k * p1, q0 + k * q1);
    let err = |p: i64, q: i64| (x - p as f64 / q as f64).abs();
    if err(bp, bq) < err(p1, q1) {
        Some((bp, bq))
    } else {
        Some((p1, q1))
    }
}

/// Rational approximation and its absolute error.
pub fn approximate(x: f64, max_den: i64) -> Option<(Scalar, f64)> {
    let (p, q) = limit_denominator(x, max_den)?;
    Some((Scalar::from_frac(p, q), (x - p as f64 / q as f64).abs()))
}

/// Rounds a row-major float matrix entrywise.
pub fn round_matrix(entries: &[f64], n: usize, max_den: i64) -> Option<EndoMap> {
    assert_eq!(entries.len(), n * n);
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let row: Option<Vec<Scalar>> = entries[r * n..(r + 1) * n].iter().map(|&x| approximate(x, max_den).map(|a| a.0)).collect();
        rows.push(row?);
    }
    EndoMap::new(crate::linalg::Matrix::from_rows(rows)).ok()
}
