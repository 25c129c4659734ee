//! The oracle suite: independent computations that must agree with the
//! main pipeline.

use std::fmt;

use crate::arith::{gcd, primes_in};
use crate::curve::{AffinePoint, CurveFp, CurveQ};
use crate::endoring::{duke_toth_matrix, EndoRecord, Engine, ModularPolynomials};
use crate::error::{Error, Result};
use crate::trace::{seed_for, trace_bsgs, trace_naive, BSGS_MIN_PRIME};

/// Outcome of one property over all the cases it was checked on.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub checked: u64,
    pub skipped: u64,
    pub failures: Vec<String>,
}

impl PropertyReport {
    fn new(name: &str) -> Self {
        PropertyReport { name: name.to_string(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        } else if self.failures.len() == 20 {
            self.failures.push("...".into());
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} checked={} skipped={} failures={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.skipped,
            self.failures.len()
        )
    }
}

/// A record together with the reduced curve it came from.
#[derive(Debug, Clone)]
pub struct Sample {
    pub label: String,
    pub curve: CurveFp,
    pub record: EndoRecord,
}

/// Records for every good prime in `[5, max_p]` on each curve.
pub fn collect_samples(engine: &Engine, curves: &[CurveQ], max_p: u64) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for e in curves {
        for p in primes_in(5, max_p)? {
            let curve = match e.reduce(p) {
                Ok(c) => c,
                Err(Error::BadReduction(_)) => continue,
                Err(other) => return Err(other),
            };
            let record = engine.endo_data(e, p)?;
            out.push(Sample { label: e.label.clone(), curve, record });
        }
    }
    Ok(out)
}

pub fn check_identities(samples: &[Sample]) -> PropertyReport {
    let mut rep = PropertyReport::new("identities");
    for s in samples {
        rep.checked += 1;
        if let Err(e) = s.record.validate() {
            rep.fail(format!("{}: {e}", s.label));
        }
    }
    rep
}

pub fn check_trace_agreement(curves: &[CurveQ], max_p: u64) -> Result<PropertyReport> {
    let mut rep = PropertyReport::new("trace bsgs = naive");
    for e in curves {
        for p in primes_in(BSGS_MIN_PRIME + 1, max_p)? {
            let Ok(ep) = e.reduce(p) else { continue };
            rep.checked += 1;
            let slow = trace_naive(&ep)?.a;
            match trace_bsgs(&ep, seed_for(&e.label, p)) {
                Ok(t) if t.a == slow => {}
                Ok(t) => rep.fail(format!("{} p={p}: bsgs {} naive {slow}", e.label, t.a)),
                Err(err) => rep.fail(format!("{} p={p}: {err}", e.label)),
            }
        }
    }
    Ok(rep)
}

/// Scalar-test valuations against volcano heights for `l` in `{2, 3, 5, 7}`.
pub fn check_volcano(engine: &Engine, samples: &[Sample]) -> PropertyReport {
    let mut rep = PropertyReport::new("scalar test = volcano height");
    for s in samples {
        let rec = &s.record;
        if !rec.ordinary {
            continue;
        }
        for ell in [2u64, 3, 5, 7] {
            if rec.r % ell != 0 {
                continue;
            }
            let mut v = 0;
            let mut b = rec.b;
            while b % ell == 0 {
                b /= ell;
                v += 1;
            }
            match engine.volcano_level(&s.curve, ell) {
                Ok(h) => {
                    rep.checked += 1;
                    if h != v {
                        rep.fail(format!("{} p={} l={ell}: scalar {v} volcano {h}", s.label, rec.p));
                    }
                }
                Err(Error::JInvariantCollision { .. }) => rep.skipped += 1,
                Err(err) => rep.fail(format!("{} p={} l={ell}: {err}", s.label, rec.p)),
            }
        }
    }
    rep
}

pub fn check_duke_toth(samples: &[Sample]) -> PropertyReport {
    let mut rep = PropertyReport::new("Duke-Toth scalar iff n | b");
    for s in samples {
        let rec = &s.record;
        for n in 2..=12u64 {
            if gcd(n, rec.p) != 1 {
                continue;
            }
            rep.checked += 1;
            let m = duke_toth_matrix(rec, n);
            let ok = m.trace() == rec.a.rem_euclid(n as i64) as u64
                && m.det() == rec.p % n
                && m.is_scalar() == (rec.b % n == 0);
            if !ok {
                rep.fail(format!("{} p={} n={n}: {:?}", s.label, rec.p, m.entries));
            }
        }
    }
    rep
}

pub fn check_supersingular(samples: &[Sample]) -> PropertyReport {
    let mut rep = PropertyReport::new("supersingular delta in {-p, -4p}");
    for s in samples {
        let rec = &s.record;
        if rec.a != 0 {
            continue;
        }
        rep.checked += 1;
        let p = rec.p as i64;
        let ok = (rec.delta == -p || rec.delta == -4 * p) && (p % 4 != 1 || rec.delta == -4 * p);
        if !ok {
            rep.fail(format!("{} p={p}: delta {}", s.label, rec.delta));
        }
    }
    rep
}

/// Codomain of the separable isogeny with kernel `<gen>`, by Velu's formulas.
pub fn velu_codomain(e: &CurveFp, gen: &AffinePoint) -> Result<CurveFp> {
    let f = e.field();
    let mut v = 0u64;
    let mut w = 0u64;
    let mut seen: Vec<u64> = Vec::new();
    let mut q = *gen;
    while let AffinePoint::Point { x, y } = q {
        if !seen.contains(&x) {
            seen.push(x);
            let gx = f.add(f.mul(3, f.square(x)), e.a());
            let vq = if y == 0 { gx } else { f.add(gx, gx) };
            let uq = f.mul(4, f.square(y));
            v = f.add(v, vq);
            w = f.add(w, f.add(uq, f.mul(x, vq)));
        }
        q = e.add(&q, gen);
    }
    CurveFp::new(f, f.sub(e.a(), f.mul(5, v)), f.sub(e.b(), f.mul(7, w)))
}

fn point_of_order(e: &CurveFp, ell: u64) -> Option<AffinePoint> {
    let n = e.naive_count().ok()?;
    if n % ell != 0 {
        return None;
    }
    let f = e.field();
    for x in 0..e.p() {
        let rhs = e.rhs(x);
        let y = match rhs {
            0 => 0,
            _ => match f.sqrt(rhs) {
                Ok(y) => y,
                Err(_) => continue,
            },
        };
        let pt = e.scalar_mul((n / ell) as i128, &AffinePoint::Point { x, y });
        if !pt.is_infinity() {
            return Some(pt);
        }
    }
    None
}

/// Checks `Phi_l(j(E), j(E')) = 0` on explicit `l`-isogenies found over
/// small prime fields, for every `l` in the table.
pub fn check_modular_polynomials(db: &ModularPolynomials, per_level: usize) -> PropertyReport {
    let mut rep = PropertyReport::new("modular polynomials vanish on isogenous pairs");
    let primes = primes_in(101, 2000).unwrap_or_default();
    for ell in db.levels() {
        let mut found = 0;
        'search: for &p in &primes {
            for (a, b) in [(1i64, 1i64), (2, 3), (-3, 5), (5, -7), (7, 2), (-1, 4), (3, 3), (11, 13)] {
                let Ok(e) = CurveFp::from_coeffs(p, a, b) else { continue };
                let Some(gen) = point_of_order(&e, ell) else { continue };
                let Ok(phi) = db.reduce(ell, e.field()) else {
                    rep.fail(format!("l={ell}: missing"));
                    break 'search;
                };
                let Ok(isog) = velu_codomain(&e, &gen) else { continue };
                rep.checked += 1;
                let (j1, j2) = (e.j_invariant(), isog.j_invariant());
                if phi.eval(j1, j2) != 0 {
                    rep.fail(format!("l={ell} p={p} a={a} b={b}: Phi({j1}, {j2}) != 0"));
                }
                found += 1;
                if found >= per_level {
                    break 'search;
                }
                continue 'search;
            }
        }
        if found < per_level {
            rep.fail(format!("l={ell}: only {found} isogenies found"));
        }
    }
    rep
}

/// Every property of the suite, on the given curves up to `max_p`.
pub fn run_all(engine: &Engine, curves: &[CurveQ], max_p: u64) -> Result<Vec<PropertyReport>> {
    let samples = collect_samples(engine, curves, max_p)?;
    Ok(vec![
        check_modular_polynomials(engine.modpolys(), 4),
        check_trace_agreement(curves, max_p)?,
        check_identities(&samples),
        check_volcano(engine, &samples),
        check_duke_toth(&samples),
        check_supersingular(&samples),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::builtin_registry;

    #[test]
    fn velu_two_isogeny_by_hand() {
        // y^2 = x^3 - x over F_101 with kernel <(0, 0)>:
        // v = 3*0 + a = -1, w = 0 + 0 * v = 0, so A' = -1 + 5 = 4, B' = 0
        let e = CurveFp::from_coeffs(101, -1, 0).unwrap();
        let e2 = velu_codomain(&e, &AffinePoint::Point { x: 0, y: 0 }).unwrap();
        assert_eq!((e2.a(), e2.b()), (4, 0));
    }

    #[test]
    fn velu_preserves_point_count() {
        for p in [103u64, 211, 307] {
            for ell in [2u64, 3, 5] {
                for (a, b) in [(1i64, 1i64), (2, 3), (-3, 5), (7, 2)] {
                    let e = CurveFp::from_coeffs(p, a, b).unwrap();
                    if let Some(gen) = point_of_order(&e, ell) {
                        let e2 = velu_codomain(&e, &gen).unwrap();
                        assert_eq!(e.naive_count().unwrap(), e2.naive_count().unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn shipped_table_validates_and_corruption_is_caught() {
        let db = ModularPolynomials::builtin();
        let rep = check_modular_polynomials(&db, 3);
        assert!(rep.passed(), "{rep} {:?}", rep.failures);
        let text = crate::endoring::modpoly::BUILTIN_PHI.replace("3 1 1 -770845966336000000", "3 1 1 -770845966336000001");
        let bad = ModularPolynomials::parse(&text).unwrap();
        assert_ne!(bad, db);
        assert!(!check_modular_polynomials(&bad, 3).passed());
    }

    #[test]
    fn suite_passes_small() {
        let reg = builtin_registry();
        for rep in run_all(&Engine::default(), reg.curves(), 1500).unwrap() {
            if rep.name.starts_with("supersingular") && rep.checked == 0 {
                continue;
            }
            assert!(rep.passed(), "{rep}: {:?}", rep.failures);
        }
    }
}
