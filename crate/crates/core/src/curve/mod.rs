//! Elliptic curves over `Q` (long Weierstrass models) and their short
//! Weierstrass reductions over `F_p`, `p >= 5`.

mod fp;
mod registry;

pub use fp::{AffinePoint, CurveFp, NAIVE_COUNT_BUDGET};
pub use registry::{builtin_registry, parse_registry, Registry, BUILTIN_REGISTRY};

use serde::{Deserialize, Serialize};

use crate::arith::PrimeField;
use crate::error::{Error, Result};

/// The thirteen rational j-invariants of curves with complex multiplication
/// by an order of class number one (discriminants -3, -4, -7, -8, -11, -12,
/// -16, -19, -27, -28, -43, -67, -163).
pub const CM_J_INVARIANTS: [(i64, i128); 13] = [
    (-3, 0),
    (-4, 1728),
    (-7, -3375),
    (-8, 8000),
    (-11, -32768),
    (-12, 54000),
    (-16, 287496),
    (-19, -884736),
    (-27, -12288000),
    (-28, 16581375),
    (-43, -884736000),
    (-67, -147197952000),
    (-163, -262537412640768000),
];

/// An integral Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
///
/// Models are assumed globally minimal, so for `p >= 5` good reduction is
/// equivalent to `p` not dividing the discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveQ {
    pub label: String,
    pub a: [i64; 5],
    pub c4: i128,
    pub c6: i128,
    pub disc: i128,
}

impl CurveQ {
    pub fn new(label: impl Into<String>, a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(i128::from);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = b2 * b2 - 24 * b4;
        let c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
        let disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
        if disc == 0 {
            return Err(Error::Singular);
        }
        debug_assert_eq!(c4 * c4 * c4 - c6 * c6, 1728 * disc);
        Ok(CurveQ { label: label.into(), a, c4, c6, disc })
    }

    /// True when `p` divides the discriminant of the model.
    pub fn has_bad_reduction(&self, p: u64) -> bool {
        self.disc % p as i128 == 0
    }

    /// Short Weierstrass model `y^2 = x^3 - 27 c4 x - 54 c6` reduced mod `p`.
    pub fn reduce(&self, p: u64) -> Result<CurveFp> {
        if p < 5 {
            return Err(Error::PrimeTooSmall(p));
        }
        let field = PrimeField::new(p)?;
        if self.has_bad_reduction(p) {
            return Err(Error::BadReduction(p));
        }
        let a = field.from_i128(-27 * (self.c4 % p as i128));
        let b = field.from_i128(-54 * (self.c6 % p as i128));
        CurveFp::new(field, a, b)
    }

    /// The j-invariant as a reduced fraction `(num, den)` with `den > 0`,
    /// or `None` if the numerator overflows.
    pub fn j_invariant(&self) -> Option<(i128, i128)> {
        let num = self.c4.checked_mul(self.c4)?.checked_mul(self.c4)?;
        let g = gcd_i128(num, self.disc);
        let (mut n, mut d) = (num / g, self.disc / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Some((n, d))
    }

    /// True iff `j(E)` is one of the thirteen class-number-one CM invariants.
    pub fn is_cm(&self) -> bool {
        match self.j_invariant() {
            Some((n, 1)) => CM_J_INVARIANTS.iter().any(|&(_, j)| j == n),
            _ => false,
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}
