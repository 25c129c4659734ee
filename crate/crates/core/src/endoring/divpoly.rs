//! Division polynomials in `x` alone.
//!
//! For `E: y^2 = x^3 + Ax + B` write `psi_n = g_n` for odd `n` and
//! `psi_n = 2y g_n` for even `n`. With `F = 4(x^3 + Ax + B) = (2y)^2` the
//! usual recurrences become
//!
//! ```text
//! g_{2m+1} = F^2 g_{m+2} g_m^3 - g_{m-1} g_{m+1}^3      (m even)
//! g_{2m+1} = g_{m+2} g_m^3 - F^2 g_{m-1} g_{m+1}^3      (m odd)
//! g_{2m}   = g_m (g_{m+2} g_{m-1}^2 - g_{m-2} g_{m+1}^2)
//! ```

use std::collections::HashMap;

use crate::arith::{Poly, PrimeField};
use crate::curve::CurveFp;
use crate::error::{Error, Result};

/// Largest index computed unless configured otherwise.
pub const DEFAULT_DIVPOLY_BUDGET: u64 = 81;

/// `g_n` for a fixed curve, with `y` eliminated and the `2y` factor of even
/// indices stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionPolynomial {
    pub index: u64,
    pub psi: Poly,
}

impl DivisionPolynomial {
    pub fn degree(&self) -> usize {
        self.psi.degree().unwrap_or(0)
    }
}

/// Memo of `g_n` for one curve. Entries are shared by all tests at that prime.
#[derive(Debug, Clone)]
pub struct DivPolyCache {
    curve: CurveFp,
    budget: u64,
    memo: HashMap<u64, Poly>,
    f4: Poly,
    f4_sq: Poly,
}

impl DivPolyCache {
    pub fn new(curve: CurveFp, budget: u64) -> Self {
        let field = curve.field();
        let (a, b) = (curve.a(), curve.b());
        let f4 = Poly::new(vec![field.mul(4, b), field.mul(4, a), 0, 4]);
        let f4_sq = f4.square(&field);
        let mut memo = HashMap::new();
        memo.insert(0, Poly::zero());
        memo.insert(1, Poly::one());
        memo.insert(2, Poly::one());
        let a2 = field.square(a);
        // 3x^4 + 6Ax^2 + 12Bx - A^2
        memo.insert(
            3,
            Poly::new(vec![field.neg(a2), field.mul(12, b), field.mul(6, a), 0, 3]),
        );
        // 2(x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
        let c0 = field.neg(field.add(field.mul(8, field.square(b)), field.mul(a2, a)));
        let g4 = Poly::new(vec![
            c0,
            field.neg(field.mul(4, field.mul(a, b))),
            field.neg(field.mul(5, a2)),
            field.mul(20, b),
            field.mul(5, a),
            0,
            1,
        ]);
        memo.insert(4, g4.scale(2, &field));
        DivPolyCache { curve, budget, memo, f4, f4_sq }
    }

    pub fn curve(&self) -> &CurveFp {
        &self.curve
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// `4(x^3 + Ax + B)`.
    pub fn f4(&self) -> &Poly {
        &self.f4
    }

    pub fn get(&mut self, n: u64) -> Result<&Poly> {
        if n > self.budget {
            return Err(Error::IndexTooLarge { index: n, budget: self.budget });
        }
        self.fill(n);
        Ok(&self.memo[&n])
    }

    pub fn division_poly(&mut self, n: u64) -> Result<DivisionPolynomial> {
        if n == 0 {
            return Err(Error::OutOfRange(0));
        }
        let psi = self.get(n)?.clone();
        Ok(DivisionPolynomial { index: n, psi })
    }

    fn fill(&mut self, n: u64) {
        if self.memo.contains_key(&n) {
            return;
        }
        let m = n / 2;
        for k in m.saturating_sub(2)..=m + 2 {
            self.fill(k);
        }
        let field: PrimeField = self.curve.field();
        let f = &field;
        let g = |k: u64| &self.memo[&k];
        let value = if n % 2 == 1 {
            let lhs = g(m + 2).mul(&g(m).square(f).mul(g(m), f), f);
            let rhs = g(m - 1).mul(&g(m + 1).square(f).mul(g(m + 1), f), f);
            if m % 2 == 0 {
                self.f4_sq.mul(&lhs, f).sub(&rhs, f)
            } else {
                lhs.sub(&self.f4_sq.mul(&rhs, f), f)
            }
        } else {
            let t1 = g(m + 2).mul(&g(m - 1).square(f), f);
            let t2 = g(m - 2).mul(&g(m + 1).square(f), f);
            g(m).mul(&t1.sub(&t2, f), f)
        };
        self.memo.insert(n, value);
    }
}

/// Degree of `g_n` when `p` does not divide `n`.
pub fn expected_degree(n: u64) -> usize {
    if n % 2 == 1 {
        ((n * n - 1) / 2) as usize
    } else {
        ((n * n - 4) / 2) as usize
    }
}
