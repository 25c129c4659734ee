use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::modular::{gcd, mod_pow, mul_mod};

const TRIAL_BOUND: u64 = 10_000;

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

/// Returns the root when `n` is a perfect square.
pub fn is_perfect_square(n: u64) -> Option<u64> {
    let s = isqrt(n);
    (s * s == n).then_some(s)
}

/// Prime factorization `n = prod q_i^e_i` with strictly increasing primes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    pub fn valuation(&self, q: u64) -> u32 {
        self.factors.iter().find(|&&(p, _)| p == q).map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(q, e)| q.pow(e)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// All positive divisors, in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, e) in &self.factors {
            let len = divs.len();
            let mut pw = 1;
            for _ in 0..e {
                pw *= q;
                for i in 0..len {
                    divs.push(divs[i] * pw);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    fn push(&mut self, q: u64) {
        match self.factors.iter_mut().find(|(p, _)| *p == q) {
            Some((_, e)) => *e += 1,
            None => self.factors.push((q, 1)),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (q, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{q}")?;
            } else {
                write!(f, "{q}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Complete factorization of `1 <= n < 2^62`: trial division up to `10^4`,
/// then Pollard rho (Brent) on the cofactor.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n >= super::MAX_MODULUS {
        return Err(Error::OutOfRange(n));
    }
    let mut out = Factorization::default();
    let mut m = n;
    while m % 2 == 0 {
        out.push(2);
        m /= 2;
    }
    let mut q = 3;
    while q < TRIAL_BOUND && q * q <= m {
        while m % q == 0 {
            out.push(q);
            m /= q;
        }
        q += 2;
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(k) = stack.pop() {
            if k == 1 {
                continue;
            }
            if is_prime(k) {
                out.push(k);
                continue;
            }
            if let Some(s) = is_perfect_square(k) {
                stack.push(s);
                stack.push(s);
                continue;
            }
            let d = pollard_brent(k);
            stack.push(d);
            stack.push(k / d);
        }
    }
    out.factors.sort_unstable();
    Ok(out)
}

/// A nontrivial factor of the odd composite `n`, trying `x^2 + c` for
/// `c = 1, 2, 3, ...` in order.
fn pollard_brent(n: u64) -> u64 {
    for c in 1.. {
        if let Some(d) = brent_cycle(n, c) {
            return d;
        }
    }
    unreachable!()
}

fn brent_cycle(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let m = 128;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Unique `(r, m)` with `n = r^2 m` and `m` squarefree.
pub fn squarefree_decompose(n: u64) -> Result<(u64, u64)> {
    let f = factorize(n)?;
    let (mut r, mut m) = (1u64, 1u64);
    for &(q, e) in f.factors() {
        r *= q.pow(e / 2);
        if e % 2 == 1 {
            m *= q;
        }
    }
    Ok((r, m))
}

/// Discriminant of the maximal order of `Q(sqrt(-m))` for squarefree `m`.
pub fn fundamental_discriminant(m: u64) -> Result<i64> {
    if m == 0 {
        return Err(Error::NotSquarefree(0));
    }
    if factorize(m)?.factors().iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquarefree(m));
    }
    let neg = -(m as i64);
    Ok(if neg.rem_euclid(4) == 1 { neg } else { 4 * neg })
}
