use rand::Rng;

use crate::arith::PrimeField;
use crate::error::{Error, Result};

/// Largest `p` accepted by [`CurveFp::naive_count`].
pub const NAIVE_COUNT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AffinePoint {
    Infinity,
    Point { x: u64, y: u64 },
}

impl AffinePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, AffinePoint::Infinity)
    }
}

/// `y^2 = x^3 + a x + b` over `F_p`, nonsingular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveFp {
    field: PrimeField,
    a: u64,
    b: u64,
}

impl CurveFp {
    pub fn new(field: PrimeField, a: u64, b: u64) -> Result<Self> {
        let p = field.modulus();
        if p < 5 {
            return Err(Error::PrimeTooSmall(p));
        }
        let (a, b) = (a % p, b % p);
        let four_a3 = field.mul(4, field.pow(a, 3));
        if field.add(four_a3, field.mul(27, field.square(b))) == 0 {
            return Err(Error::Singular);
        }
        Ok(CurveFp { field, a, b })
    }

    pub fn from_coeffs(p: u64, a: i64, b: i64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        CurveFp::new(field, field.from_i64(a), field.from_i64(b))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `x^3 + a x + b`.
    pub fn rhs(&self, x: u64) -> u64 {
        let f = &self.field;
        f.add(f.mul(f.add(f.square(x), self.a), x), self.b)
    }

    pub fn j_invariant(&self) -> u64 {
        let f = &self.field;
        let four_a3 = f.mul(4, f.pow(self.a, 3));
        let den = f.add(four_a3, f.mul(27, f.square(self.b)));
        f.mul(f.mul(1728 % f.modulus(), four_a3), f.inv(den))
    }

    pub fn contains(&self, pt: &AffinePoint) -> bool {
        match *pt {
            AffinePoint::Infinity => true,
            AffinePoint::Point { x, y } => {
                x < self.p() && y < self.p() && self.field.square(y) == self.rhs(x)
            }
        }
    }

    pub fn neg(&self, pt: &AffinePoint) -> AffinePoint {
        match *pt {
            AffinePoint::Infinity => AffinePoint::Infinity,
            AffinePoint::Point { x, y } => AffinePoint::Point { x, y: self.field.neg(y) },
        }
    }

    pub fn add(&self, p1: &AffinePoint, p2: &AffinePoint) -> AffinePoint {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (*p1, *p2) {
            (AffinePoint::Infinity, q) | (q, AffinePoint::Infinity) => return q,
            (AffinePoint::Point { x: x1, y: y1 }, AffinePoint::Point { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if f.add(y1, y2) == 0 {
                return AffinePoint::Infinity;
            }
            let num = f.add(f.mul(3, f.square(x1)), self.a);
            f.mul(num, f.inv(f.add(y1, y1)))
        } else {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        };
        let x3 = f.sub(f.sub(f.square(lambda), x1), x2);
        let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
        AffinePoint::Point { x: x3, y: y3 }
    }

    pub fn double(&self, pt: &AffinePoint) -> AffinePoint {
        self.add(pt, pt)
    }

    pub fn scalar_mul(&self, k: i128, pt: &AffinePoint) -> AffinePoint {
        let mut base = if k < 0 { self.neg(pt) } else { *pt };
        let mut n = k.unsigned_abs();
        let mut acc = AffinePoint::Infinity;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// Uniformly random affine point (rejection on `x`).
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> AffinePoint {
        let p = self.p();
        loop {
            let x = rng.gen_range(0..p);
            let r = self.rhs(x);
            if r == 0 {
                return AffinePoint::Point { x, y: 0 };
            }
            if let Ok(y) = self.field.sqrt(r) {
                let y = if rng.gen::<bool>() { y } else { self.field.neg(y) };
                return AffinePoint::Point { x, y };
            }
        }
    }

    /// `#E(F_p)` by summing Legendre symbols from a table of squares.
    pub fn naive_count(&self) -> Result<u64> {
        let p = self.p();
        if p > NAIVE_COUNT_BUDGET {
            return Err(Error::BudgetExceeded { p, budget: NAIVE_COUNT_BUDGET });
        }
        let mut is_square = vec![false; p as usize];
        for y in 1..=(p - 1) / 2 {
            is_square[(y * y % p) as usize] = true;
        }
        let mut count = 1 + p as i64;
        for x in 0..p {
            let r = self.rhs(x);
            if r != 0 {
                count += if is_square[r as usize] { 1 } else { -1 };
            }
        }
        Ok(count as u64)
    }

    /// Twist `y^2 = x^3 + d^2 a x + d^3 b` by a non-residue `d`.
    pub fn quadratic_twist(&self, d: u64) -> Result<CurveFp> {
        let f = &self.field;
        let d = d % self.p();
        if f.legendre(d) != -1 {
            return Err(Error::NotNonResidue { d, p: self.p() });
        }
        let d2 = f.square(d);
        CurveFp::new(self.field, f.mul(d2, self.a), f.mul(f.mul(d2, d), self.b))
    }

    /// Smallest quadratic non-residue mod `p`.
    pub fn least_non_residue(&self) -> u64 {
        (2..self.p()).find(|&d| self.field.legendre(d) == -1).expect("odd prime has non-residues")
    }

    /// Number of roots of `x^3 + a x + b` in `F_p` (0, 1 or 3).
    pub fn two_torsion_rank(&self) -> usize {
        use crate::arith::Poly;
        let cubic = Poly::new(vec![self.b, self.a, 0, 1]);
        cubic.roots(&self.field).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_count(e: &CurveFp) -> u64 {
        let p = e.p();
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                if e.contains(&AffinePoint::Point { x, y }) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn naive_count_small_examples() {
        assert_eq!(CurveFp::from_coeffs(5, 1, 0).unwrap().naive_count().unwrap(), 4);
        assert_eq!(CurveFp::from_coeffs(5, 0, 1).unwrap().naive_count().unwrap(), 6);
        assert_eq!(CurveFp::from_coeffs(7, 6, 4).unwrap().naive_count().unwrap(), 10);
        // y^2 = x^3 + x + 1 over F_5 has 9 points, over F_7 has 5
        assert_eq!(CurveFp::from_coeffs(5, 1, 1).unwrap().naive_count().unwrap(), 9);
        assert_eq!(CurveFp::from_coeffs(7, 1, 1).unwrap().naive_count().unwrap(), 5);
    }

    #[test]
    fn naive_count_matches_double_loop() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            for a in 0..p.min(8) {
                for b in 0..p.min(8) {
                    if let Ok(e) = CurveFp::from_coeffs(p, a as i64, b as i64) {
                        assert_eq!(e.naive_count().unwrap(), brute_count(&e), "p={p} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn doubling_example() {
        let e = CurveFp::from_coeffs(7, 1, 4).unwrap();
        let p = AffinePoint::Point { x: 0, y: 2 };
        assert_eq!(e.double(&p), AffinePoint::Point { x: 4, y: 4 });
        assert!(e.contains(&AffinePoint::Point { x: 4, y: 4 }));
        assert_eq!(e.scalar_mul(0, &p), AffinePoint::Infinity);
        assert_eq!(e.scalar_mul(1, &p), p);
        assert_eq!(e.add(&AffinePoint::Infinity, &p), p);
    }

    #[test]
    fn twist_example() {
        let e = CurveFp::from_coeffs(5, 1, 0).unwrap();
        let t = e.quadratic_twist(2).unwrap();
        assert_eq!((t.a(), t.b()), (4, 0));
        assert_eq!(t.naive_count().unwrap(), 8);
    }

    #[test]
    fn j_families() {
        assert_eq!(CurveFp::from_coeffs(101, 1, 0).unwrap().j_invariant(), 1728 % 101);
        assert_eq!(CurveFp::from_coeffs(101, 0, 1).unwrap().j_invariant(), 0);
    }

    #[test]
    fn hasse_bound_small_primes() {
        for p in crate::arith::primes_in(5, 500).unwrap() {
            for (a, b) in [(1i64, 1i64), (-1, 3), (2, -7)] {
                if let Ok(e) = CurveFp::from_coeffs(p, a, b) {
                    let t = p as i64 + 1 - e.naive_count().unwrap() as i64;
                    assert!(t * t < 4 * p as i64);
                }
            }
        }
    }

    #[test]
    fn twist_counts_sum() {
        for p in [7u64, 11, 101, 1009] {
            let e = CurveFp::from_coeffs(p, 3, 5).unwrap();
            let t = e.quadratic_twist(e.least_non_residue()).unwrap();
            assert_eq!(e.naive_count().unwrap() + t.naive_count().unwrap(), 2 * p + 2);
            assert_eq!(e.j_invariant(), t.j_invariant());
        }
        let e = CurveFp::from_coeffs(7, 3, 5).unwrap();
        assert!(e.quadratic_twist(2).is_err());
    }

    #[test]
    fn group_law_order_kills_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [101u64, 1009, 10007] {
            let e = CurveFp::from_coeffs(p, 2, 3).unwrap();
            let n = e.naive_count().unwrap() as i128;
            for _ in 0..20 {
                let pt = e.random_point(&mut rng);
                assert!(e.contains(&pt));
                assert!(e.scalar_mul(n, &pt).is_infinity());
                let q = e.random_point(&mut rng);
                let r = e.random_point(&mut rng);
                let lhs = e.add(&e.add(&pt, &q), &r);
                let rhs = e.add(&pt, &e.add(&q, &r));
                assert_eq!(lhs, rhs);
                assert_eq!(e.add(&pt, &q), e.add(&q, &pt));
                assert!(e.add(&pt, &e.neg(&pt)).is_infinity());
                assert_eq!(e.scalar_mul(-3, &pt), e.neg(&e.scalar_mul(3, &pt)));
            }
        }
    }

    #[test]
    fn singular_and_small() {
        assert!(matches!(CurveFp::from_coeffs(7, 0, 0), Err(Error::Singular)));
        assert!(CurveFp::from_coeffs(3, 1, 1).is_err());
        let e = CurveFp::from_coeffs(1_000_003, 1, 1).unwrap();
        assert!(matches!(e.naive_count(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn two_torsion() {
        // x^3 - x = x(x-1)(x+1)
        assert_eq!(CurveFp::from_coeffs(101, -1, 0).unwrap().two_torsion_rank(), 3);
        let e = CurveFp::from_coeffs(101, 1, 1).unwrap();
        let brute = (0..101).filter(|&x| e.rhs(x) == 0).count();
        assert_eq!(e.two_torsion_rank(), brute);
    }
}
