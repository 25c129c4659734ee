//! Reductions of a sweep to the counting functions under study.

use crate::arith::{is_perfect_square, squarefree_decompose};
use crate::error::{Error, Result};

use super::{SweepResult, ThresholdFunction};

/// Fraction of records with `b^2 <= f(p)`; `None` for an empty sweep.
pub fn threshold_ratio(s: &SweepResult, f: ThresholdFunction) -> Option<f64> {
    if s.records.is_empty() {
        return None;
    }
    let hits = s
        .records
        .iter()
        .filter(|r| ((r.b as f64) * (r.b as f64)) <= f.eval(r.p as f64))
        .count();
    Some(hits as f64 / s.records.len() as f64)
}

/// `#{p : n | b_p}`.
pub fn divisibility_count(s: &SweepResult, n: u64) -> u64 {
    assert!(n >= 1);
    s.records.iter().filter(|r| r.b % n == 0).count() as u64
}

pub fn density(s: &SweepResult, n: u64) -> f64 {
    if s.records.is_empty() {
        return 0.0;
    }
    divisibility_count(s, n) as f64 / s.records.len() as f64
}

/// `(n, density(n))` for `n = 2..=n_max`.
pub fn density_profile(s: &SweepResult, n_max: u64) -> Vec<(u64, f64)> {
    (2..=n_max).map(|n| (n, density(s, n))).collect()
}

/// Least-squares slope of `log density` against `log n` over the `ns` with
/// a nonzero count; `None` with fewer than two such points.
pub fn density_slope(s: &SweepResult, ns: &[u64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .map(|&n| (n, density(s, n)))
        .filter(|&(_, d)| d > 0.0)
        .map(|(n, d)| ((n as f64).ln(), d.ln()))
        .collect();
    least_squares_slope(&pts)
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `#{p : m (4p - a_p^2) is a square}` for squarefree `m`.
pub fn square_count(s: &SweepResult, m: u64) -> Result<u64> {
    if m == 0 || squarefree_decompose(m)?.0 != 1 {
        return Err(Error::NotSquarefree(m));
    }
    Ok(s.records
        .iter()
        .filter(|r| {
            let n4 = (4 * r.p as i64 - r.a * r.a) as u128;
            u64::try_from(n4 * m as u128).ok().and_then(is_perfect_square).is_some()
        })
        .count() as u64)
}

/// Squarefree `m <= bound`.
pub fn squarefree_upto(bound: u64) -> Vec<u64> {
    (1..=bound).filter(|&m| squarefree_decompose(m).map(|(r, _)| r == 1).unwrap_or(false)).collect()
}

pub fn extremal_count(s: &SweepResult) -> u64 {
    s.records.iter().filter(|r| r.extremal).count() as u64
}

/// `x^(1/4) / log x`, the conjectured shape of the extremal count.
pub fn extremal_reference(x: u64) -> f64 {
    let x = x as f64;
    x.powf(0.25) / x.ln()
}

/// `min |delta_p| (log log p)^4 / (log p)^2` over records with `p >= 17`.
pub fn schoof_statistic(s: &SweepResult) -> Option<f64> {
    s.records
        .iter()
        .filter(|r| r.p >= 17)
        .map(|r| {
            let lp = (r.p as f64).ln();
            r.delta.unsigned_abs() as f64 * lp.ln().powi(4) / (lp * lp)
        })
        .min_by(|a, b| a.total_cmp(b))
}
