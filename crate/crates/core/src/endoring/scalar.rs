//! Deciding `l^k | b_p` by testing whether Frobenius acts as an integer
//! scalar on `E[l^k]`.
//!
//! With `[c](x, y) = (x - psi_{c-1} psi_{c+1} / psi_c^2, psi_{2c} / (2 psi_c^4))`
//! both coordinates of `pi(P) = [c]P` clear to polynomial identities in
//! `F_p[x]/(g_q)`, so no inversions (and no zero divisors) are involved:
//!
//! ```text
//! x:  (x^p - x) psi_c^2 + psi_{c-1} psi_{c+1} = 0
//! y:  f^((p-1)/2) psi_c^4 - g_{2c} = 0
//! ```
//!
//! after dividing the y identity by `y`, with `f = x^3 + Ax + B` and the
//! factors `F = 4f` coming from even-index `psi` written out. Roots of `g_q` with `psi_c = 0` fail the x identity because
//! `psi_{c-1}` and `psi_{c+1}` have no common root with `psi_c`.

use crate::arith::{Poly, PolyModRing};
use crate::error::{Error, Result};

use super::divpoly::DivPolyCache;

/// `c` reduced to `(-q/2, q/2]`.
fn centered(c: i64, q: u64) -> i64 {
    let q = q as i64;
    let r = c.rem_euclid(q);
    if r > q / 2 {
        r - q
    } else {
        r
    }
}

/// True iff Frobenius acts on `E[q]` as multiplication by `c`.
///
/// Returns `false` at once unless `c^2 = p` and `2c = a (mod q)`.
/// Errors only when a needed division polynomial is over budget.
pub fn scalar_frobenius_test(cache: &mut DivPolyCache, a: i64, q: u64, c: i64) -> Result<bool> {
    let curve = *cache.curve();
    let p = curve.p();
    let qi = q as i128;
    if q < 2 || p % q == 0 {
        return Ok(false);
    }
    let c = centered(c, q);
    if (c as i128 * c as i128 - p as i128).rem_euclid(qi) != 0
        || (2 * c as i128 - a as i128).rem_euclid(qi) != 0
    {
        return Ok(false);
    }
    if q == 2 {
        // pi is the identity on E[2] iff the 2-torsion is rational
        return Ok(curve.two_torsion_rank() == 3);
    }
    if q > cache.budget() {
        return Err(Error::IndexTooLarge { index: q, budget: cache.budget() });
    }
    let field = curve.field();
    let modulus = cache.get(q)?.monic(&field);
    let ring = PolyModRing::new(field, modulus)?;
    let n = c.unsigned_abs();
    let g_c = ring.reduce(cache.get(n)?);
    let g_prev = ring.reduce(cache.get(n - 1)?);
    let g_next = ring.reduce(cache.get(n + 1)?);
    let f4 = ring.reduce(cache.f4());
    let c_even = n % 2 == 0;

    // x identity
    let x = Poly::x();
    let xp = ring.x_pow(p);
    let mut psi_c_sq = ring.square(&g_c);
    let mut cross = ring.mul(&g_prev, &g_next);
    if c_even {
        psi_c_sq = ring.mul(&psi_c_sq, &f4);
    } else {
        cross = ring.mul(&cross, &f4);
    }
    let lhs = ring.add(&ring.mul(&ring.sub(&xp, &ring.reduce(&x)), &psi_c_sq), &cross);
    if !lhs.is_zero() {
        return Ok(false);
    }

    // y identity: y^p = y f^((p-1)/2) against y g_{2c} / (g_c^4 [F^2 if c even])
    let f = ring.reduce(&cache.f4().scale(field.inv(4), &field));
    let yf = ring.pow(&f, (p - 1) / 2);
    let mut psi_c4 = ring.square(&ring.square(&g_c));
    if c_even {
        psi_c4 = ring.mul(&psi_c4, &ring.square(&f4));
    }
    let mut g_2c = ring.reduce(cache.get(2 * n)?);
    if c < 0 {
        g_2c = g_2c.neg(&field);
    }
    Ok(ring.sub(&ring.mul(&yf, &psi_c4), &g_2c).is_zero())
}

/// Candidate scalars for `E[q]`: solutions of `2c = a`, `c^2 = p (mod q)`.
pub fn scalar_candidates(a: i64, p: u64, q: u64) -> Vec<i64> {
    let qi = q as i64;
    let roots: Vec<i64> = if q % 2 == 1 {
        // 2 is invertible
        let inv2 = (qi + 1) / 2;
        vec![(a.rem_euclid(qi) * inv2).rem_euclid(qi)]
    } else {
        let half = qi / 2;
        if a.rem_euclid(2) != 0 {
            return Vec::new();
        }
        let c0 = (a / 2).rem_euclid(half);
        vec![c0, c0 + half]
    };
    roots
        .into_iter()
        .filter(|&c| (c as i128 * c as i128 - p as i128).rem_euclid(q as i128) == 0)
        .collect()
}

/// Inclusive bounds on `v_l(b_p)`: equal when the tests settled it, or
/// `(k - 1, max)` when `l^k` exceeded the division-polynomial budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationBounds {
    pub lower: u32,
    pub upper: u32,
}

impl ValuationBounds {
    pub fn exact(&self) -> Option<u32> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

/// `v_l(r_p)` capped, for `l = 2`, by the requirement that the order
/// discriminant be `0` or `1 (mod 4)`.
pub fn admissible_valuation(a: i64, p: u64, ell: u64) -> u32 {
    let n4 = (4 * p as i128 - a as i128 * a as i128) as u64;
    let mut v = 0;
    let mut rest = n4;
    while rest % (ell * ell) == 0 {
        rest /= ell * ell;
        if ell == 2 && !matches!((-(rest as i128)).rem_euclid(4), 0 | 1) {
            break;
        }
        v += 1;
    }
    v
}

pub fn valuation_bounds(cache: &mut DivPolyCache, a: i64, ell: u64) -> Result<ValuationBounds> {
    let p = cache.curve().p();
    let max = admissible_valuation(a, p, ell);
    let mut q = 1u64;
    for k in 1..=max {
        q *= ell;
        if q > cache.budget() && q != 2 {
            return Ok(ValuationBounds { lower: k - 1, upper: max });
        }
        let mut passed = false;
        for c in scalar_candidates(a, p, q) {
            if scalar_frobenius_test(cache, a, q, c)? {
                passed = true;
                break;
            }
        }
        if !passed {
            return Ok(ValuationBounds { lower: k - 1, upper: k - 1 });
        }
    }
    Ok(ValuationBounds { lower: max, upper: max })
}

/// `v_l(b_p)` from the scalar tests alone.
pub fn ell_index_valuation(cache: &mut DivPolyCache, a: i64, ell: u64) -> Result<u32> {
    let bounds = valuation_bounds(cache, a, ell)?;
    match bounds.exact() {
        Some(v) => Ok(v),
        None => Err(Error::EllTooLarge {
            ell,
            index: ell.pow(bounds.lower + 1),
            budget: cache.budget(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{builtin_registry, AffinePoint, CurveFp};
    use crate::endoring::divpoly::DEFAULT_DIVPOLY_BUDGET;
    use crate::trace::trace_naive;

    fn cache_for(label: &str, p: u64) -> (DivPolyCache, i64) {
        let e = builtin_registry().lookup(label).unwrap().reduce(p).unwrap();
        let a = trace_naive(&e).unwrap().a;
        (DivPolyCache::new(e, DEFAULT_DIVPOLY_BUDGET), a)
    }

    #[test]
    fn examples_11a1() {
        let (mut c7, a7) = cache_for("11a1", 7);
        assert_eq!(a7, -2);
        // x^3 + 6x + 4 over F_7 has the single root 3
        let e7 = *c7.curve();
        assert_eq!((0..7).filter(|&x| e7.rhs(x) == 0).collect::<Vec<_>>(), vec![3]);
        assert!(!scalar_frobenius_test(&mut c7, a7, 2, 1).unwrap());
        assert_eq!(ell_index_valuation(&mut c7, a7, 2).unwrap(), 0);

        let (mut c13, a13) = cache_for("11a1", 13);
        assert_eq!(a13, 4);
        assert!(!scalar_frobenius_test(&mut c13, a13, 3, 2).unwrap());
        assert_eq!(ell_index_valuation(&mut c13, a13, 3).unwrap(), 0);
    }

    #[test]
    fn necessary_conditions_short_circuit() {
        let (mut c13, a13) = cache_for("11a1", 13);
        // 2c = a fails
        assert!(!scalar_frobenius_test(&mut c13, a13, 3, 1).unwrap());
        // l does not divide r_13 = 6
        for c in -3..=3 {
            assert!(!scalar_frobenius_test(&mut c13, a13, 5, c).unwrap());
        }
        assert_eq!(ell_index_valuation(&mut c13, a13, 5).unwrap(), 0);
    }

    #[test]
    fn candidates() {
        assert_eq!(scalar_candidates(4, 13, 3), vec![2]);
        // 2c = -2 (mod 4) and c^2 = 7 = 3 (mod 4) has no solution
        assert!(scalar_candidates(-2, 7, 4).is_empty());
        assert_eq!(scalar_candidates(2, 17, 4), vec![1, 3]);
    }

    #[test]
    fn admissible_valuations() {
        // 4*7 - 4 = 24 = 2^2 * 6, and -6 = 2 (mod 4)
        assert_eq!(admissible_valuation(-2, 7, 2), 0);
        // 4*13 - 16 = 36: -9 = 3 (mod 4)
        assert_eq!(admissible_valuation(4, 13, 2), 0);
        assert_eq!(admissible_valuation(4, 13, 3), 1);
    }

    fn rational_3_torsion(e: &CurveFp) -> u64 {
        let f = e.field();
        let mut count = 1;
        for x in 0..e.p() {
            let rhs = e.rhs(x);
            let ys: Vec<u64> = match rhs {
                0 => vec![0],
                _ if f.is_square(rhs) => {
                    let y = f.sqrt(rhs).unwrap();
                    vec![y, f.neg(y)]
                }
                _ => vec![],
            };
            for y in ys {
                if e.scalar_mul(3, &AffinePoint::Point { x, y }).is_infinity() {
                    count += 1;
                }
            }
        }
        count
    }

    /// Frobenius is `+1` on `E[3]` iff all nine 3-torsion points are
    /// rational, and `-1` iff they are all rational on the quadratic twist.
    #[test]
    fn full_rational_torsion_means_scalar_one() {
        let mut seen = [0usize; 2];
        for p in crate::arith::primes_in(5, 400).unwrap() {
            for (a, b) in [(1i64, 1i64), (2, 3), (-1, 0), (3, 5), (-4, 7), (0, 2)] {
                let Ok(e) = CurveFp::from_coeffs(p, a, b) else { continue };
                let t = trace_naive(&e).unwrap().a;
                let twist = e.quadratic_twist(e.least_non_residue()).unwrap();
                let mut cache = DivPolyCache::new(e, 81);
                let plus = scalar_frobenius_test(&mut cache, t, 3, 1).unwrap();
                let minus = scalar_frobenius_test(&mut cache, t, 3, -1).unwrap();
                assert_eq!(plus, rational_3_torsion(&e) == 9, "p={p} a={a} b={b}");
                assert_eq!(minus, rational_3_torsion(&twist) == 9, "p={p} a={a} b={b}");
                seen[0] += plus as usize;
                seen[1] += minus as usize;
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0, "oracle never exercised a passing case: {seen:?}");
    }
}
