//! Frobenius traces and endomorphism rings of reductions of elliptic curves.
//!
//! For a curve `E/Q` and a prime `p` of good reduction the crate computes
//! the trace `a_p`, the index `b_p = [End(E_p) : Z[pi]]`, the discriminant
//! `delta_p` of `End(E_p)` (so that `a_p^2 - 4p = b_p^2 delta_p`), and the
//! squarefree split `4p - a_p^2 = r_p^2 m_p`. The [`sweep`] module runs these
//! computations over every prime up to a bound and reduces the results to
//! the counting statistics used to study how close `|delta_p|` is to
//! `4p - a_p^2`.
//!
//! Module map:
//! - [`arith`]: modular arithmetic, factorization, sieving, polynomials over `F_p`.
//! - [`curve`]: curves over `Q` and `F_p`, point arithmetic, twists, registry.
//! - [`trace`]: exhaustive and baby-step/giant-step trace computation.
//! - [`endoring`]: division polynomials, the scalar-Frobenius test, volcano
//!   walks, class-group relations and the Duke–Tóth matrix.
//! - [`sweep`]: parallel checkpointed sweeps, statistics and reports.
//! - [`verify`]: the oracle suite behind the `verify` subcommand.

pub mod arith;
pub mod curve;
pub mod endoring;
mod error;
pub mod sweep;
pub mod trace;
pub mod verify;

pub use arith::{Factorization, PolyModRing, Poly, PrimeField};
pub use curve::{AffinePoint, CurveFp, CurveQ};
pub use endoring::{EndoRecord, Engine, EngineConfig, FrobMatrix, ModularPolynomials};
pub use error::{Error, Result};
pub use sweep::{SweepConfig, SweepResult, ThresholdFunction};
pub use trace::{TraceMethod, TraceResult};
