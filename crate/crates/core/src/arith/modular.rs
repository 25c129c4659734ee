use crate::error::{Error, Result};

use super::factor::is_prime;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m`, with `0^0 = 1`.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol `(a/p)`; rejects even or composite `p`.
pub fn legendre(a: i64, p: u64) -> Result<i32> {
    if p % 2 == 0 {
        return Err(Error::EvenModulus(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(jacobi(a, p))
}

/// Square root of `a` modulo the odd prime `p`, normalised to `min(s, p - s)`.
pub fn sqrt_mod(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Ok(0);
    }
    if jacobi(a as i64, p) != 1 {
        return Err(Error::NonResidue { a, p });
    }
    let s = if p % 4 == 3 {
        mod_pow(a, (p + 1) / 4, p)
    } else {
        tonelli_shanks(a, p)
    };
    Ok(s.min(p - s))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while jacobi(z as i64, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// An odd prime field `F_p` with `p < 2^62`.
///
/// Elements are plain `u64` values kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= super::MAX_MODULUS {
            return Err(Error::OutOfRange(p));
        }
        if p % 2 == 0 {
            return Err(if p == 2 { Error::EvenModulus(p) } else { Error::NotPrime(p) });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn from_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    #[inline]
    pub fn to_signed(&self, v: u64) -> i64 {
        if v > self.p / 2 {
            v as i64 - self.p as i64
        } else {
            v as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn square(&self, a: u64) -> u64 {
        mul_mod(a, a, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        mod_pow(a, e, self.p)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p).expect("inverse of zero in a prime field")
    }

    pub fn legendre(&self, a: u64) -> i32 {
        jacobi(a as i64, self.p)
    }

    pub fn sqrt(&self, a: u64) -> Result<u64> {
        sqrt_mod(a, self.p)
    }

    pub fn is_square(&self, a: u64) -> bool {
        self.legendre(a) >= 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(5, 0, 7), 1);
        assert_eq!(mod_pow(3, 4, 5), 1);
        assert_eq!(mod_pow(0, 0, 7), 1);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(0, 5).unwrap(), 0);
        assert_eq!(legendre(-1, 13).unwrap(), 1);
        assert!(matches!(legendre(3, 8), Err(Error::EvenModulus(8))));
        assert!(matches!(legendre(3, 15), Err(Error::NotPrime(15))));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod(4, 7).unwrap(), 2);
        assert_eq!(sqrt_mod(2, 7).unwrap(), 3);
        assert!(matches!(sqrt_mod(3, 7), Err(Error::NonResidue { .. })));
        assert_eq!(sqrt_mod(0, 11).unwrap(), 0);
        // p = 1 mod 8 exercises the full Tonelli-Shanks loop
        let s = sqrt_mod(3, 73).unwrap();
        assert_eq!(s * s % 73, 3);
    }

    #[test]
    fn field_rejects_bad_moduli() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1 << 62).is_err());
        assert_eq!(PrimeField::new(13).unwrap().modulus(), 13);
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(a in 0u64..1_000_000, idx in 0usize..6) {
            let p = [7u64, 13, 97, 7681, 998_244_353, 4_611_686_018_427_387_847][idx];
            let a = a % p;
            if jacobi(a as i64, p) >= 0 {
                let s = sqrt_mod(a, p).unwrap();
                prop_assert_eq!(mul_mod(s, s, p), a);
                prop_assert!(s <= p - s || s == 0);
            }
        }

        #[test]
        fn euler_criterion_agrees(a in 1u64..10_000, idx in 0usize..4) {
            let p = [101u64, 65_537, 1_000_003, 2_147_483_647][idx];
            let e = mod_pow(a % p, (p - 1) / 2, p);
            let l = jacobi(a as i64, p);
            let expected = if a % p == 0 { 0 } else if e == 1 { 1 } else { -1 };
            prop_assert_eq!(l, expected);
        }

        #[test]
        fn inverse_is_inverse(a in 1u64..u64::MAX) {
            let p = 4_611_686_018_427_387_847u64;
            if a % p != 0 {
                let i = inv_mod(a, p).unwrap();
                prop_assert_eq!(mul_mod(a % p, i, p), 1);
            }
        }
    }
}
