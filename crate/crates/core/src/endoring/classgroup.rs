//! Positive definite binary quadratic forms and the class-group fallback.
//!
//! When the scalar tests cannot settle `v_l(b_p)` (because `l^k` is over
//! budget) the remaining candidate discriminants are compared against a
//! horizontal isogeny cycle: for a small prime `l'` that splits and does not
//! divide the conductor of `Z[pi]`, the `l'`-isogeny graph through `j(E)` is
//! a single cycle whose length is the order of a prime ideal above `l'` in
//! the class group of `End(E)`.

use crate::arith::{jacobi, sqrt_mod};
use crate::curve::CurveFp;
use crate::error::{Error, Result};

use super::modpoly::ModularPolynomials;

/// `a x^2 + b xy + c y^2` with `b^2 - 4ac < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a x + b y = g >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl Form {
    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(disc: i128) -> Form {
        let b = disc.rem_euclid(2);
        Form { a: 1, b, c: (b * b - disc) / 4 }
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        -a < b && b <= a && a <= c && !(a == c && b < 0)
    }

    pub fn reduce(mut self) -> Form {
        loop {
            // normalize b into (-a, a]
            if !(-self.a < self.b && self.b <= self.a) {
                let two_a = 2 * self.a;
                let k = (self.a - self.b).div_euclid(two_a);
                let b = self.b + k * two_a;
                self.c = (b * b - self.discriminant()) / (4 * self.a);
                self.b = b;
            }
            if self.a > self.c {
                (self.a, self.c) = (self.c, self.a);
                self.b = -self.b;
                continue;
            }
            if self.a == self.c && self.b < 0 {
                self.b = -self.b;
            }
            return self;
        }
    }

    /// Gauss composition followed by reduction.
    pub fn compose(&self, other: &Form) -> Form {
        let disc = self.discriminant();
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let (a1, b1) = (f1.a, f1.b);
        let (a2, b2, c2) = (f2.a, f2.b, f2.c);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let (d, u, _) = ext_gcd(a2, a1);
            (d, u)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let (d1, x2, y2) = ext_gcd(s, d);
            (d1, x2, -y2)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        Form { a: a3, b: b3, c: c3 }.reduce()
    }

    /// A form of norm `q` for a prime `q` split or ramified in `disc`.
    pub fn prime_form(q: u64, disc: i128) -> Option<Form> {
        let qi = q as i128;
        let b = if q == 2 {
            match disc.rem_euclid(8) {
                0 => 0,
                1 => 1,
                4 => 2,
                _ => return None,
            }
        } else {
            let dm = disc.rem_euclid(qi) as u64;
            if jacobi(dm as i64, q) < 0 {
                return None;
            }
            let s = sqrt_mod(dm, q).ok()? as i128;
            // match the parity of disc
            if (s - disc).rem_euclid(2) == 0 {
                s
            } else {
                s + qi
            }
        };
        let num = b * b - disc;
        if num % (4 * qi) != 0 {
            return None;
        }
        Some(Form { a: qi, b, c: num / (4 * qi) }.reduce())
    }

    /// Order in the class group, or `None` past `cap`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let id = Form::identity(self.discriminant());
        let mut g = *self;
        for k in 1..=cap {
            if g == id {
                return Some(k);
            }
            g = g.compose(self);
        }
        None
    }
}

/// Kronecker symbol `(d / q)` for a prime `q`.
pub fn kronecker(d: i128, q: u64) -> i32 {
    if q == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    jacobi(d.rem_euclid(q as i128) as i64, q)
}

/// Length of the horizontal `l'`-isogeny cycle through `j(E)`, assuming
/// `Phi_l'(j, Y)` has exactly two roots at every vertex.
pub fn crater_length(e: &CurveFp, ell: u64, db: &ModularPolynomials, cap: u64) -> Result<u64> {
    let phi = db.reduce(ell, e.field())?;
    let j0 = e.j_invariant();
    let first = phi.neighbors(j0);
    if first.len() != 2 {
        return Err(Error::WalkDiverged);
    }
    let (mut prev, mut cur) = (j0, first[0]);
    let mut len = 1;
    while cur != j0 {
        if len >= cap {
            return Err(Error::WalkDiverged);
        }
        let mut nbrs = phi.neighbors(cur);
        if nbrs.len() != 2 {
            return Err(Error::WalkDiverged);
        }
        let pos = nbrs.iter().position(|&j| j == prev).ok_or(Error::WalkDiverged)?;
        nbrs.swap_remove(pos);
        (prev, cur) = (cur, nbrs[0]);
        len += 1;
    }
    Ok(len)
}

/// Keeps the candidate discriminants consistent with crater lengths for
/// small split primes, stopping once one remains.
pub fn filter_by_cycles(
    e: &CurveFp,
    fund_disc: i128,
    conductor_pi: u64,
    candidates: &[i128],
    db: &ModularPolynomials,
) -> Vec<i128> {
    let mut alive = candidates.to_vec();
    // generous bound on the class number of any order of discriminant >= -4p
    let four_p = 4 * e.p();
    let cap = crate::arith::isqrt(four_p) * (64 - four_p.leading_zeros() as u64) + 64;
    for ell in db.levels() {
        if alive.len() <= 1 {
            break;
        }
        if conductor_pi % ell == 0 || kronecker(fund_disc, ell) != 1 {
            continue;
        }
        let Ok(len) = crater_length(e, ell, db, cap) else { continue };
        alive.retain(|&d| {
            Form::prime_form(ell, d).and_then(|f| f.order(len + 1)) == Some(len)
        });
    }
    alive
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Class number by counting reduced forms.
    fn class_number(disc: i128) -> u64 {
        let mut h = 0;
        let mut a = 1i128;
        while 3 * a * a <= -disc {
            for b in -a + 1..=a {
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = Form { a, b, c };
                if c >= a && f.is_reduced() {
                    h += 1;
                }
            }
            a += 1;
        }
        h
    }

    #[test]
    fn known_class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-23, 3), (-47, 5), (-56, 4), (-71, 7), (-163, 1), (-84, 4)] {
            assert_eq!(class_number(d), h, "h({d})");
        }
    }

    #[test]
    fn composition_group_laws() {
        for disc in [-23i128, -47, -71, -56, -84, -3299, -4 * 1009, -1999 * 4] {
            let h = class_number(disc);
            let id = Form::identity(disc);
            let forms: Vec<Form> = [2u64, 3, 5, 7, 11, 13, 17]
                .iter()
                .filter_map(|&q| Form::prime_form(q, disc))
                .collect();
            for f in &forms {
                assert_eq!(f.discriminant(), disc);
                assert!(f.is_reduced());
                assert_eq!(f.compose(&id), *f);
                let inv = Form { a: f.a, b: -f.b, c: f.c }.reduce();
                assert_eq!(f.compose(&inv), id, "disc={disc} f={f:?}");
                let ord = f.order(h + 1).unwrap();
                assert_eq!(h % ord, 0, "disc={disc} ord={ord} h={h}");
                for g in &forms {
                    assert_eq!(f.compose(g), g.compose(f));
                    for k in &forms {
                        assert_eq!(f.compose(g).compose(k), f.compose(&g.compose(k)));
                    }
                }
            }
        }
    }

    #[test]
    fn order_of_prime_form() {
        // h(-23) = 3 and (2, 1, 3) generates
        let f = Form::prime_form(2, -23).unwrap();
        assert_eq!((f.a, f.b, f.c), (2, 1, 3));
        assert_eq!(f.order(10), Some(3));
        assert!(Form::prime_form(3, -23).is_some());
        assert!(Form::prime_form(5, -23).is_none());
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
    }
}
