//! Integer predicates for dyadic windows, dyadic shells and the prime
//! threshold `x^{alpha}`.
//!
//! Everything here is decided in exact integer arithmetic. A real window
//! `(v, 2v]` is turned into the integer range `[floor(v) + 1, floor(2v)]`,
//! and a comparison such as `rho > x^{2/(2 gamma + 1)}` is raised to the
//! power `2 gamma + 1` first.

use num_bigint::BigUint;

use crate::{Error, Result};

/// `base^exp` in 128 bits, `None` on overflow.
fn pow_u128(base: u64, exp: u32) -> Option<u128> {
    u128::from(base).checked_pow(exp)
}

/// `floor(x^{1/k})`.
pub fn integer_root(x: u64, k: u32) -> u64 {
    assert!(k >= 1, "root index must be positive");
    if k == 1 || x <= 1 {
        return x;
    }
    let mut r = libm::pow(x as f64, 1.0 / f64::from(k)) as u64;
    // The float guess can be off by one or two in either direction.
    while r > 0 && pow_u128(r, k).is_none_or(|p| p > u128::from(x)) {
        r -= 1;
    }
    while pow_u128(r + 1, k).is_some_and(|p| p <= u128::from(x)) {
        r += 1;
    }
    r
}

/// Integer range `lo..=hi` standing for the real window `(v, 2v]`.
/// Empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicWindow {
    pub lo: u64,
    pub hi: u64,
}

impl DyadicWindow {
    /// The window `(v, 2v]` for a real base `v >= 0`.
    pub fn from_base(v: f64) -> Result<Self> {
        if !(0.0..=1e18).contains(&v) {
            return Err(Error::Domain("window base must be finite and non-negative"));
        }
        Ok(DyadicWindow { lo: libm::floor(v) as u64 + 1, hi: libm::floor(2.0 * v) as u64 })
    }

    /// The window `(x^{1/k} / 2, x^{1/k}]`, resolved exactly:
    /// `d` belongs iff `d^k <= x < (2d)^k`.
    pub fn half_root(x: u64, k: u32) -> Self {
        let hi = integer_root(x, k);
        let mut lo = hi / 2;
        while pow_u128(2 * lo, k).is_some_and(|p| p <= u128::from(x)) {
            lo += 1;
        }
        DyadicWindow { lo: lo.max(1), hi }
    }

    pub fn contains(&self, d: u64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

fn count_rec(rest: u64, divs: &[u64], windows: &[DyadicWindow], stop_at_first: bool) -> u64 {
    let Some((w, tail)) = windows.split_first() else { return 1 };
    let start = divs.partition_point(|&d| d < w.lo);
    let mut total = 0;
    for &d in &divs[start..] {
        if d > w.hi || d > rest {
            break;
        }
        if rest % d != 0 {
            continue;
        }
        total += count_rec(rest / d, divs, tail, stop_at_first);
        if stop_at_first && total > 0 {
            break;
        }
    }
    total
}

/// Number of tuples `(d_1, ..., d_m)` with `d_j` in `windows[j]` and
/// `d_1 * ... * d_m | n`. `divs` must be the sorted divisors of `n`.
pub fn localized_count(n: u64, divs: &[u64], windows: &[DyadicWindow]) -> u64 {
    count_rec(n, divs, windows, false)
}

/// Whether at least one such tuple exists.
pub fn has_localized_divisors(n: u64, divs: &[u64], windows: &[DyadicWindow]) -> bool {
    count_rec(n, divs, windows, true) > 0
}

/// The unique `l >= 0` with `x^{1/k} / 2^{l+1} < rho_1 <= x^{1/k} / 2^l`,
/// or `None` when `rho_1^k > x` (no shell with `l >= 0`).
pub fn shell_index(rho_1: u64, x: u64, k: u32) -> Option<u32> {
    if rho_1 == 0 || pow_u128(rho_1, k).is_none_or(|p| p > u128::from(x)) {
        return None;
    }
    // (rho * 2^l)^k <= x < (rho * 2^{l+1})^k
    let mut ell = 0u32;
    loop {
        let next = u128::from(rho_1) << (ell + 1);
        match next.checked_pow(k) {
            Some(p) if p <= u128::from(x) => ell += 1,
            _ => return Some(ell),
        }
    }
}

/// `x^{1/k} / 2^{l+1} < rho_j <= 2^{(l+1)(k-1)} x^{1/k}`, decided exactly.
pub fn sandwich_holds(rho_j: u64, ell: u32, x: u64, k: u32) -> bool {
    // lower: x < (rho_j 2^{l+1})^k
    let lower = (u128::from(rho_j).checked_shl(ell + 1))
        .filter(|v| v >> (ell + 1) == u128::from(rho_j))
        .and_then(|v| v.checked_pow(k))
        .is_none_or(|p| u128::from(x) < p);
    // upper: rho_j^k <= 2^{(l+1)(k-1)k} x
    let shift = (ell + 1) * (k - 1) * k;
    let upper = match pow_u128(rho_j, k) {
        None => BigUint::from(rho_j).pow(k) <= BigUint::from(x) << shift as usize,
        Some(lhs) => {
            let x = u128::from(x);
            // a right-hand side that overflows 128 bits exceeds every lhs
            x.leading_zeros() < shift || lhs <= x << shift
        }
    };
    lower && upper
}

/// `rho > x^{alpha}` with `alpha = 2 / (2 gamma + 1)`, i.e.
/// `rho^{2 gamma + 1} > x^2`.
pub fn exceeds_alpha_threshold(rho: u64, x: u64, gamma: u32) -> bool {
    let x2 = u128::from(x) * u128::from(x);
    pow_u128(rho, 2 * gamma + 1).is_none_or(|p| p > x2)
}
