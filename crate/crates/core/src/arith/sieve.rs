use crate::error::{Error, Result};

use super::factor::isqrt;

/// Default cap on `hi - lo` for [`primes_in`].
pub const DEFAULT_SEGMENT_BUDGET: u64 = 1 << 32;

const CHUNK: u64 = 1 << 17;

/// All primes in `[lo, hi]`, ascending, by a segmented sieve of Eratosthenes.
pub fn primes_in(lo: u64, hi: u64) -> Result<Vec<u64>> {
    primes_in_with_budget(lo, hi, DEFAULT_SEGMENT_BUDGET)
}

pub fn primes_in_with_budget(lo: u64, hi: u64, budget: u64) -> Result<Vec<u64>> {
    if hi >= super::MAX_MODULUS {
        return Err(Error::OutOfRange(hi));
    }
    if lo > hi {
        return Ok(Vec::new());
    }
    if hi - lo > budget {
        return Err(Error::SegmentTooLarge { lo, hi, budget });
    }
    Ok(PrimeSegments::new(lo, hi).flatten().collect())
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Iterator over consecutive sieve chunks of `[lo, hi]`, each yielding the
/// primes of one chunk. Memory stays bounded by the chunk size plus the
/// base primes up to `sqrt(hi)`.
pub struct PrimeSegments {
    base: Vec<u64>,
    next: u64,
    hi: u64,
    done: bool,
    mark: Vec<bool>,
}

impl PrimeSegments {
    pub fn new(lo: u64, hi: u64) -> Self {
        PrimeSegments {
            base: small_primes(isqrt(hi)),
            next: lo.max(2),
            hi,
            done: lo.max(2) > hi,
            mark: vec![false; CHUNK as usize],
        }
    }
}

impl Iterator for PrimeSegments {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let start = self.next;
        let end = start.saturating_add(CHUNK - 1).min(self.hi);
        let len = (end - start + 1) as usize;
        let mark = &mut self.mark[..len];
        mark.iter_mut().for_each(|m| *m = false);
        for &q in &self.base {
            if q * q > end {
                break;
            }
            let first = (q * q).max(start.div_ceil(q) * q);
            let mut k = first;
            while k <= end {
                mark[(k - start) as usize] = true;
                k += q;
            }
        }
        let primes = mark
            .iter()
            .enumerate()
            .filter(|(_, &m)| !m)
            .map(|(i, _)| start + i as u64)
            .collect();
        if end == self.hi {
            self.done = true;
        } else {
            self.next = end + 1;
        }
        Some(primes)
    }
}
