//! Integer, modular and polynomial arithmetic over word-sized prime fields.

mod factor;
mod modular;
mod poly;
mod sieve;

pub use factor::{
    factorize, fundamental_discriminant, is_perfect_square, is_prime, isqrt, squarefree_decompose,
    Factorization,
};
pub use modular::{gcd, inv_mod, jacobi, legendre, mod_pow, mul_mod, sqrt_mod, PrimeField};
pub use poly::{Poly, PolyModRing};
pub use sieve::{primes_in, primes_in_with_budget, PrimeSegments, DEFAULT_SEGMENT_BUDGET};

/// Largest modulus (exclusive) supported by the word-sized arithmetic.
pub const MAX_MODULUS: u64 = 1 << 62;
