//! Minimal-surface integral boxes.
//!
//! For a volume `n` and a dimension `k`, find the non-decreasing edge
//! lengths `d_1 <= ... <= d_k` with `d_1 * ... * d_k = n` whose box has the
//! smallest surface. This crate holds the allocation-light algorithmic part:
//!
//! * [`sieve`]: smallest-prime-factor table and the elementary arithmetic
//!   built on it (factorization, divisors, `Omega`, Moebius).
//! * [`solver`]: exact enumeration of ordered factor tuples, tie detection
//!   and the single-prime transfer move that never increases the surface.
//! * [`asymptotics`]: the closed-form constants and main terms that the
//!   mean values of the edge lengths are compared against.
//! * [`localized`]: exact integer predicates for dyadic windows and shells.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel sweeps, reports
//! and the command-line front end live in the `minbox` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymptotics;
mod error;
pub mod localized;
pub mod sieve;
pub mod solver;

pub use error::{Error, Result};
pub use sieve::{LeastPrime, PrimeFactorization, SieveTable};
pub use solver::{FactorTuple, OptimalProfile, Solver, Step};

/// Largest volume accepted by the solver. Keeps every surface numerator and
/// every intermediate product comfortably inside 64 bits.
pub const MAX_VOLUME: u64 = 1 << 40;
