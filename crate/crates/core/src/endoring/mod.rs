//! `b_p`, `delta_p`, `r_p`, `m_p` for a single reduction.
//!
//! `v_l(b_p)` is decided prime by prime with the scalar-Frobenius test on
//! `E[l^k]`. When `l^k` is beyond the division-polynomial budget the open
//! candidates are narrowed by, in order: `j = 0, 1728`, the class-number-one
//! j-invariants, and horizontal isogeny cycles against class-group orders.
//! Anything still open is reported as [`Error::Unresolved`].

pub mod classgroup;
pub mod divpoly;
mod matrix;
pub mod modpoly;
pub mod scalar;
pub mod volcano;

use serde::{Deserialize, Serialize};

pub use divpoly::{DivPolyCache, DivisionPolynomial, DEFAULT_DIVPOLY_BUDGET};
pub use matrix::{duke_toth_matrix, FrobMatrix};
pub use modpoly::{ModularPolynomials, ReducedModPoly};
pub use scalar::{ell_index_valuation, scalar_frobenius_test, valuation_bounds, ValuationBounds};
pub use volcano::volcano_level;

use crate::arith::{factorize, fundamental_discriminant, isqrt, squarefree_decompose, PrimeField};
use crate::curve::{CurveFp, CurveQ, CM_J_INVARIANTS};
use crate::error::{Error, Result};
use crate::trace::{self, TraceResult, DEFAULT_NAIVE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoRecord {
    pub p: u64,
    pub a: i64,
    pub ordinary: bool,
    pub b: u64,
    pub delta: i64,
    pub r: u64,
    pub m: u64,
    pub extremal: bool,
}

impl EndoRecord {
    /// Fills in the derived fields from `p`, `a` and `b`, checking every invariant.
    pub fn from_parts(p: u64, a: i64, b: u64) -> Result<Self> {
        let n4 = 4 * p as i64 - a * a;
        if n4 <= 0 || b == 0 {
            return Err(Error::InvariantViolation { p, what: "Hasse bound".into() });
        }
        let (r, m) = squarefree_decompose(n4 as u64)?;
        let b2 = (b * b) as i64;
        if n4 % b2 != 0 {
            return Err(Error::InvariantViolation { p, what: "b^2 | 4p - a^2".into() });
        }
        let rec = EndoRecord {
            p,
            a,
            ordinary: a != 0,
            b,
            delta: -(n4 / b2),
            r,
            m,
            extremal: a.unsigned_abs() == isqrt(4 * p),
        };
        rec.validate()?;
        Ok(rec)
    }

    /// `0` if `delta = 0 (mod 4)`, `1` if `delta = 1 (mod 4)`.
    pub fn delta_parity(&self) -> u8 {
        self.delta.rem_euclid(4) as u8
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvariantViolation { p: self.p, what: what.into() });
        let (p, a, b) = (self.p as i128, self.a as i128, self.b as i128);
        let n4 = 4 * p - a * a;
        if n4 <= 0 {
            return fail("Hasse bound");
        }
        if b * b * self.delta as i128 != a * a - 4 * p {
            return fail("b^2 delta = a^2 - 4p");
        }
        if self.delta >= 0 || !matches!(self.delta.rem_euclid(4), 0 | 1) {
            return fail("delta < 0 and delta = 0, 1 (mod 4)");
        }
        if (self.r as i128).pow(2) * self.m as i128 != n4 {
            return fail("4p - a^2 = r^2 m");
        }
        if squarefree_decompose(self.m)?.0 != 1 {
            return fail("m squarefree");
        }
        if self.b == 0 || self.r % self.b != 0 {
            return fail("b | r");
        }
        if self.m as i128 * b * b > 4 * p {
            return fail("m <= 4p / b^2");
        }
        if self.ordinary != (self.a != 0) {
            return fail("ordinary iff a != 0");
        }
        if self.extremal != (self.a.unsigned_abs() == isqrt(4 * self.p)) {
            return fail("extremal iff |a| = floor(2 sqrt p)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Largest division-polynomial index used by the scalar tests.
    pub divpoly_budget: u64,
    /// Primes up to this bound are counted exhaustively.
    pub naive_threshold: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { divpoly_budget: DEFAULT_DIVPOLY_BUDGET, naive_threshold: DEFAULT_NAIVE_THRESHOLD }
    }
}

/// Computes records; holds the configuration and the modular polynomials
/// used by the fallbacks.
#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
    modpolys: ModularPolynomials,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(EngineConfig::default(), ModularPolynomials::builtin())
    }
}

impl Engine {
    pub fn new(config: EngineConfig, modpolys: ModularPolynomials) -> Self {
        Engine { config, modpolys }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn modpolys(&self) -> &ModularPolynomials {
        &self.modpolys
    }

    pub fn trace(&self, e: &CurveQ, p: u64) -> Result<TraceResult> {
        trace::ap(e, p, self.config.naive_threshold)
    }

    pub fn endo_data(&self, e: &CurveQ, p: u64) -> Result<EndoRecord> {
        let t = self.trace(e, p)?;
        let ep = e.reduce(p)?;
        self.endo_from_trace(&ep, t.a)
    }

    /// Record for a reduced curve whose trace is already known.
    pub fn endo_from_trace(&self, e: &CurveFp, a: i64) -> Result<EndoRecord> {
        let p = e.p();
        let n4 = (4 * p as i64 - a * a) as u64;
        let (r, _) = squarefree_decompose(n4)?;
        let mut cache = DivPolyCache::new(*e, self.config.divpoly_budget);
        let mut b_known = 1u64;
        let mut open: Vec<(u64, ValuationBounds)> = Vec::new();
        for &(ell, _) in factorize(r)?.factors() {
            let bounds = valuation_bounds(&mut cache, a, ell)?;
            match bounds.exact() {
                Some(v) => b_known *= ell.pow(v),
                None => open.push((ell, bounds)),
            }
        }
        let b = if open.is_empty() {
            b_known
        } else {
            self.resolve_open(e, a, b_known, &open)?
        };
        EndoRecord::from_parts(p, a, b)
    }

    fn resolve_open(
        &self,
        e: &CurveFp,
        a: i64,
        b_known: u64,
        open: &[(u64, ValuationBounds)],
    ) -> Result<u64> {
        let p = e.p();
        let n4 = 4 * p as i128 - a as i128 * a as i128;
        let mut bs = vec![b_known];
        for &(ell, bounds) in open {
            bs = bs
                .iter()
                .flat_map(|&b| (bounds.lower..=bounds.upper).map(move |v| b * ell.pow(v)))
                .collect();
        }
        let delta_of = |b: u64| -(n4 / (b as i128 * b as i128));
        let deltas: Vec<i128> = bs.iter().map(|&b| delta_of(b)).collect();
        let pick = |d: i128| bs.iter().copied().find(|&b| delta_of(b) == d);
        let unresolved = Error::Unresolved { p, a, ell: open[0].0 };
        if bs.len() == 1 {
            return Ok(bs[0]);
        }

        let j = e.j_invariant();
        if a != 0 {
            if j == 0 {
                return pick(-3).ok_or(unresolved);
            }
            if j == 1728 % p {
                return pick(-4).ok_or(unresolved);
            }
        }

        let field = e.field();
        let cm: Vec<i128> = CM_J_INVARIANTS
            .iter()
            .filter(|&&(d, jd)| field.from_i128(jd) == j && deltas.contains(&(d as i128)))
            .map(|&(d, _)| d as i128)
            .collect();
        if let [d] = cm[..] {
            return pick(d).ok_or(unresolved);
        }
        // an order of class number one pins j, so a mismatch rules it out
        let alive: Vec<i128> = deltas
            .iter()
            .copied()
            .filter(|&d| {
                CM_J_INVARIANTS
                    .iter()
                    .find(|&&(dd, _)| dd as i128 == d)
                    .map_or(true, |&(_, jd)| field.from_i128(jd) == j)
            })
            .collect();
        if let [d] = alive[..] {
            return pick(d).ok_or(unresolved);
        }

        if a != 0 {
            let (_, m) = squarefree_decompose(n4 as u64)?;
            let fund = fundamental_discriminant(m)? as i128;
            let f_pi = isqrt((n4 / -fund) as u64);
            let alive = classgroup::filter_by_cycles(e, fund, f_pi, &alive, &self.modpolys);
            if let [d] = alive[..] {
                log::debug!("p={p}: delta {d} fixed by isogeny cycles");
                return pick(d).ok_or(unresolved);
            }
        }
        Err(unresolved)
    }

    /// Volcano height of `e` for `ell`, independent of the scalar tests.
    pub fn volcano_level(&self, e: &CurveFp, ell: u64) -> Result<u32> {
        volcano::volcano_level(e, ell, &self.modpolys)
    }
}

/// `j_D mod p` for every class-number-one discriminant `D`.
pub fn cm_j_mod(field: &PrimeField) -> Vec<(i64, u64)> {
    CM_J_INVARIANTS.iter().map(|&(d, j)| (d, field.from_i128(j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::builtin_registry;
    use modpoly::BUILTIN_PHI;

    fn engine() -> Engine {
        Engine::default()
    }

    #[test]
    fn record_11a1_7() {
        let e = builtin_registry().lookup("11a1").unwrap().clone();
        let rec = engine().endo_data(&e, 7).unwrap();
        assert_eq!((rec.a, rec.r, rec.m, rec.b, rec.delta), (-2, 2, 6, 1, -24));
        assert!(rec.ordinary && !rec.extremal);
    }

    #[test]
    fn record_11a1_13() {
        let e = builtin_registry().lookup("11a1").unwrap().clone();
        let rec = engine().endo_data(&e, 13).unwrap();
        assert_eq!((rec.a, rec.r, rec.m, rec.b, rec.delta), (4, 6, 1, 1, -36));
        // delta = -4 would need j = 1728 = 12 (mod 13)
        let ep = e.reduce(13).unwrap();
        assert_eq!(ep.j_invariant(), 10);
        assert_ne!(1728 % 13, 10);
    }

    #[test]
    fn supersingular_example() {
        let e = CurveFp::from_coeffs(5, 0, 1).unwrap();
        let rec = engine().endo_from_trace(&e, 0).unwrap();
        assert_eq!((rec.b, rec.delta), (1, -20));
        assert!(!rec.ordinary);
    }

    #[test]
    fn bad_reduction_propagates() {
        let e = builtin_registry().lookup("11a1").unwrap().clone();
        assert!(matches!(engine().endo_data(&e, 11), Err(Error::BadReduction(11))));
    }

    #[test]
    fn validate_catches_violations() {
        let good = EndoRecord::from_parts(13, 4, 1).unwrap();
        assert!(good.validate().is_ok());
        let mut bad = good;
        bad.delta = -35;
        assert!(bad.validate().is_err());
        let mut bad = good;
        bad.extremal = true;
        assert!(bad.validate().is_err());
        let mut bad = good;
        bad.m = 4;
        bad.r = 3;
        assert!(bad.validate().is_err());
        // b = 3 gives delta = -4, a valid discriminant
        assert_eq!(EndoRecord::from_parts(13, 4, 3).unwrap().delta, -4);
        // b = 2 gives -9, which is 3 mod 4
        assert!(EndoRecord::from_parts(13, 4, 2).is_err());
    }

    #[test]
    fn tiny_budget_falls_back_and_agrees() {
        // With budget 2 every odd l goes through the fallbacks; they must
        // agree with the full scalar tests wherever they resolve.
        let reg = builtin_registry();
        let full = engine();
        let tiny = Engine::new(
            EngineConfig { divpoly_budget: 2, ..EngineConfig::default() },
            ModularPolynomials::builtin(),
        );
        let mut resolved = 0;
        let mut fell_back = 0;
        for e in reg.curves() {
            for p in crate::arith::primes_in(5, 3000).unwrap() {
                let Ok(expect) = full.endo_data(e, p) else { continue };
                if expect.r == 1 {
                    continue;
                }
                match tiny.endo_data(e, p) {
                    Ok(rec) => {
                        assert_eq!(rec, expect, "{} p={p}", e.label);
                        resolved += 1;
                        if expect.r > 2 {
                            fell_back += 1;
                        }
                    }
                    Err(Error::Unresolved { .. }) => {}
                    Err(other) => panic!("{other}"),
                }
            }
        }
        assert!(resolved > 100 && fell_back > 50, "resolved={resolved} fell_back={fell_back}");
    }

    #[test]
    fn large_square_factors_of_the_discriminant() {
        // 4p - a^2 has a square prime factor far above the budget:
        // 501223: 103^2 * 163, j is not j(-163) so b is not 103
        // 946877: 191^2 * 67, same with j(-67)
        // 507803: 83^2 * 232, first split prime of Q(sqrt(-58)) not dividing
        // the conductor is 31
        let reg = builtin_registry();
        let e = reg.lookup("37a1").unwrap();
        for (p, b, delta) in [(501223u64, 1u64, -1729267i64), (946877, 1, -2444227), (507803, 1, -1598248)] {
            let rec = engine().endo_data(e, p).unwrap();
            assert_eq!((rec.b, rec.delta), (b, delta), "p={p}");
        }

        let upto_29: String =
            BUILTIN_PHI.lines().filter(|l| !l.starts_with("31 ")).map(|l| format!("{l}\n")).collect();
        let short = Engine::new(EngineConfig::default(), ModularPolynomials::parse(&upto_29).unwrap());
        assert!(matches!(short.endo_data(e, 507803), Err(Error::Unresolved { ell: 83, .. })));
    }
}
