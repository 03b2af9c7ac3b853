//! Existence machinery for primitive normal elements `α` of `F_{q^m}` whose
//! quadratic image `f(α)` is also primitive.
//!
//! * [`numtheory`]: integer factorization, ω, W, φ, θ.
//! * [`gf`]: arithmetic in `F_p ⊂ F_q ⊂ F_{q^m}`.
//! * [`fqpoly`]: `F_q[x]`, the factorization of `x^m - 1` and the module action.
//! * [`chars`]: characters, brute-force character sums and freeness indicators.
//! * [`sieve`]: the sufficient conditions and the table reproductions.
//! * [`search`]: exact counts, witnesses and exhaustive pair resolution.

pub mod chars;
pub mod error;
pub mod fqpoly;
pub mod gf;
pub mod numtheory;
pub mod report;
pub mod search;
pub mod sieve;

pub use error::{Error, Result};
