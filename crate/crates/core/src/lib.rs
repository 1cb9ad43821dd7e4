//! Reducibility of `X^p - 1` over `F_l[X; M]` with `M = <2, 3>`, index surveys
//! over primes, and rigorous enclosures of Artin-type density constants.
//!
//! Module map:
//!
//! * [`polyarith`]: dense polynomials over a prime field.
//! * [`cyclotomic`]: `Phi_p mod l`, cyclotomic cosets, factor traces and a
//!   randomized equal-degree factorization oracle.
//! * [`matsuda`]: reversal, traces, membership in `E(l)` with witnesses and
//!   brute-force referees.
//! * [`densities`]: Artin's constant, restricted products, Hooley's `A(a)`
//!   and Golomb's `A(a, r)` as intervals with directed rounding.
//! * [`survey`]: segmented sieve and per-prime classification.
//! * [`cli`]: command dispatcher used by the `cycloscope` binary.

pub mod arith;
pub mod cli;
pub mod config;
pub mod cyclotomic;
pub mod densities;
pub mod error;
pub mod matsuda;
pub mod polyarith;
pub mod survey;

pub use config::Caps;
pub use error::{Error, Result};
