//! Frobenius traces: exhaustive counting for small `p`, baby-step/giant-step
//! order finding with twist alternation above that.

use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, isqrt};
use crate::curve::{AffinePoint, CurveFp, CurveQ, NAIVE_COUNT_BUDGET};
use crate::error::{Error, Result};

/// Below this `p` the Hasse interval can hold several multiples of every
/// point order on both a curve and its twist.
pub const BSGS_MIN_PRIME: u64 = 457;
/// Default crossover between [`trace_naive`] and [`trace_bsgs`].
pub const DEFAULT_NAIVE_THRESHOLD: u64 = 3000;
/// Random points drawn (on the curve and its twist together) before giving up.
pub const BSGS_POINT_CAP: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceMethod {
    Naive,
    Bsgs,
}

impl fmt::Display for TraceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceMethod::Naive => "naive",
            TraceMethod::Bsgs => "bsgs",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    pub p: u64,
    pub a: i64,
    pub method: TraceMethod,
}

impl TraceResult {
    pub fn order(&self) -> u64 {
        (self.p as i64 + 1 - self.a) as u64
    }
}

/// `floor(2 sqrt(p))`, the largest possible `|a_p|`.
pub fn hasse_width(p: u64) -> u64 {
    isqrt(4 * p)
}

pub fn trace_naive(e: &CurveFp) -> Result<TraceResult> {
    let p = e.p();
    let n = e.naive_count()?;
    let a = p as i64 + 1 - n as i64;
    debug_assert!(a * a < 4 * p as i64);
    Ok(TraceResult { p, a, method: TraceMethod::Naive })
}

/// Stable seed for the point sampler, so sweeps are reproducible.
pub fn seed_for(label: &str, p: u64) -> u64 {
    // FNV-1a over the label bytes followed by p
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.bytes().chain(p.to_le_bytes()) {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Order of `pt`, given that it lies in `[lo, lo + width]`-multiples:
/// first a BSGS search for some `N` in the window with `[N]pt = O`, then
/// stripping prime factors of `N`.
fn point_order(e: &CurveFp, pt: &AffinePoint, lo: u64, width: u64) -> Option<u64> {
    let steps = isqrt(width) + 1;
    let mut baby: HashMap<AffinePoint, u64> = HashMap::with_capacity(steps as usize);
    let mut cur = AffinePoint::Infinity;
    for j in 0..steps {
        baby.entry(e.neg(&cur)).or_insert(j);
        cur = e.add(&cur, pt);
    }
    let giant = cur; // [steps] pt
    let mut r = e.scalar_mul(lo as i128, pt);
    let mut found = None;
    let mut i = 0;
    while i * steps <= width {
        if let Some(&j) = baby.get(&r) {
            let m = i * steps + j;
            if m <= width {
                found = Some(lo + m);
                break;
            }
        }
        r = e.add(&r, &giant);
        i += 1;
    }
    let n = found?;
    let mut order = n;
    for &(q, _) in factorize(n).ok()?.factors() {
        while order % q == 0 && e.scalar_mul((order / q) as i128, pt).is_infinity() {
            order /= q;
        }
    }
    Some(order)
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / crate::arith::gcd(a, b)).checked_mul(b)
}

/// Group orders `N` in the Hasse window compatible with `l_e | N` and
/// `l_t | 2p + 2 - N`; stops after two.
fn candidates(p: u64, lo: u64, hi: u64, l_e: u64, l_t: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = lo.div_ceil(l_e) * l_e;
    while n <= hi {
        if (2 * p + 2 - n) % l_t == 0 {
            out.push(n);
            if out.len() > 1 {
                break;
            }
        }
        n += l_e;
    }
    out
}

/// `a_p` via baby-step/giant-step on random points of `E` and its twist.
pub fn trace_bsgs(e: &CurveFp, seed: u64) -> Result<TraceResult> {
    let p = e.p();
    if p <= BSGS_MIN_PRIME {
        return Err(Error::PrimeTooSmall(p));
    }
    let twist = e.quadratic_twist(e.least_non_residue())?;
    let w = hasse_width(p);
    let (lo, hi) = (p + 1 - w, p + 1 + w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut l_e, mut l_t) = (1u64, 1u64);
    for i in 0..BSGS_POINT_CAP {
        let on_twist = i % 2 == 1;
        let curve = if on_twist { &twist } else { e };
        let pt = curve.random_point(&mut rng);
        let Some(ord) = point_order(curve, &pt, lo, hi - lo) else {
            continue;
        };
        if on_twist {
            l_t = lcm(l_t, ord).unwrap_or(l_t);
        } else {
            l_e = lcm(l_e, ord).unwrap_or(l_e);
        }
        if let [n] = candidates(p, lo, hi, l_e, l_t)[..] {
            let a = p as i64 + 1 - n as i64;
            return Ok(TraceResult { p, a, method: TraceMethod::Bsgs });
        }
    }
    Err(Error::Ambiguous(p))
}

/// Reduces `E` mod `p` and picks the counting method by size.
pub fn ap(e: &CurveQ, p: u64, naive_threshold: u64) -> Result<TraceResult> {
    let ep = e.reduce(p)?;
    if p <= naive_threshold.max(BSGS_MIN_PRIME) {
        return trace_naive(&ep);
    }
    match trace_bsgs(&ep, seed_for(&e.label, p)) {
        Err(Error::Ambiguous(_)) if p <= NAIVE_COUNT_BUDGET => {
            log::warn!("bsgs ambiguous for {} at p={p}, counting exhaustively", e.label);
            trace_naive(&ep)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;
    use crate::curve::builtin_registry;

    #[test]
    fn naive_examples() {
        let t = |p, a, b| trace_naive(&CurveFp::from_coeffs(p, a, b).unwrap()).unwrap().a;
        assert_eq!(t(5, 1, 0), 2);
        assert_eq!(t(5, 0, 1), 0);
        assert_eq!(t(7, 6, 4), -2);
    }

    #[test]
    fn dispatcher_examples() {
        let reg = builtin_registry();
        let e = reg.lookup("11a1").unwrap();
        assert!(matches!(ap(e, 11, DEFAULT_NAIVE_THRESHOLD), Err(Error::BadReduction(11))));
        assert_eq!(ap(e, 7, DEFAULT_NAIVE_THRESHOLD).unwrap().a, -2);
        let r13 = ap(e, 13, DEFAULT_NAIVE_THRESHOLD).unwrap();
        assert_eq!((r13.a, r13.method), (4, TraceMethod::Naive));
        // y^2 = x^3 + 11x + 11 over F_13, counted from scratch
        let mut n = 1;
        for x in 0u64..13 {
            for y in 0u64..13 {
                if (y * y) % 13 == (x * x * x + 11 * x + 11) % 13 {
                    n += 1;
                }
            }
        }
        assert_eq!(14 - n, 4);
        assert_eq!(ap(e, 3001, 3000).unwrap().method, TraceMethod::Bsgs);
        // a small threshold never sends p <= 457 to bsgs
        assert_eq!(ap(e, 101, 10).unwrap().method, TraceMethod::Naive);
    }

    #[test]
    fn bsgs_matches_naive_window() {
        let reg = builtin_registry();
        for e in reg.curves() {
            for p in primes_in(BSGS_MIN_PRIME + 1, 3000).unwrap() {
                let Ok(ep) = e.reduce(p) else { continue };
                let slow = trace_naive(&ep).unwrap().a;
                let fast = trace_bsgs(&ep, seed_for(&e.label, p)).unwrap().a;
                assert_eq!(slow, fast, "{} p={p}", e.label);
            }
        }
    }

    #[test]
    fn bsgs_large_primes_kill_points() {
        use rand::SeedableRng;
        let e = builtin_registry().lookup("389a1").unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [1_000_003u64, 10_000_019, 1_000_000_007] {
            let ep = e.reduce(p).unwrap();
            let t = trace_bsgs(&ep, seed_for(&e.label, p)).unwrap();
            assert!((t.a as i128).pow(2) < 4 * p as i128);
            for _ in 0..5 {
                let pt = ep.random_point(&mut rng);
                assert!(ep.scalar_mul(t.order() as i128, &pt).is_infinity());
            }
        }
    }

    #[test]
    fn bsgs_rejects_small_primes() {
        let ep = CurveFp::from_coeffs(457, 1, 1).unwrap();
        assert!(matches!(trace_bsgs(&ep, 0), Err(Error::PrimeTooSmall(457))));
    }

    #[test]
    fn seeds_differ_by_label_and_prime() {
        assert_ne!(seed_for("11a1", 5), seed_for("11a1", 7));
        assert_ne!(seed_for("11a1", 5), seed_for("37a1", 5));
        assert_eq!(seed_for("11a1", 5), seed_for("11a1", 5));
    }
}
