//! Smallest-prime-factor sieve and the arithmetic built on it.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};

/// Default cap on the number of sieve entries (4 bytes each, so 1 GiB).
pub const DEFAULT_MAX_LIMIT: u64 = 1 << 28;

/// Smallest prime factor `P^-(n)`, with `P^-(1) = +infinity`.
///
/// `Infinity` orders after every finite value, so comparisons such as
/// `v_j * P^-(v_h) < v_h` need no special casing by callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeastPrime {
    Finite(u64),
    Infinity,
}

impl LeastPrime {
    pub fn finite(self) -> Option<u64> {
        match self {
            LeastPrime::Finite(p) => Some(p),
            LeastPrime::Infinity => None,
        }
    }

    /// Compares `factor * self` against `bound` without overflow. `factor` is
    /// a positive integer, so an infinite `self` always compares greater.
    pub fn scaled_cmp(self, factor: u64, bound: u64) -> Ordering {
        match self {
            LeastPrime::Infinity => Ordering::Greater,
            LeastPrime::Finite(p) => (factor as u128 * p as u128).cmp(&(bound as u128)),
        }
    }
}

impl PartialEq<u64> for LeastPrime {
    fn eq(&self, other: &u64) -> bool {
        *self == LeastPrime::Finite(*other)
    }
}

impl PartialOrd<u64> for LeastPrime {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&LeastPrime::Finite(*other)))
    }
}

/// Prime factorization of `n` as `(prime, exponent)` pairs, primes increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    /// Total number of prime factors counted with multiplicity.
    pub fn omega_total(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// All divisors, strictly increasing.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.divisor_count() as usize);
        self.divisors_into(&mut out);
        out
    }

    /// Writes the sorted divisors into `out`, replacing its contents.
    pub fn divisors_into(&self, out: &mut Vec<u64>) {
        out.clear();
        out.push(1);
        for &(p, e) in &self.factors {
            let base = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..base {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
    }
}

/// Smallest-prime-factor table for `2..=limit`. Immutable once built.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SieveTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_cap(limit, DEFAULT_MAX_LIMIT)
    }

    pub fn build_with_cap(limit: u64, max_limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain("sieve limit must be at least 2"));
        }
        let max_limit = max_limit.min(u64::from(u32::MAX) - 1);
        if limit > max_limit {
            return Err(Error::Resource { limit, max_limit });
        }
        let len = limit as usize + 1;
        let mut spf = alloc::vec![0u32; len];
        for i in 2..len {
            if spf[i] != 0 {
                continue;
            }
            spf[i] = i as u32;
            let Some(start) = i.checked_mul(i) else { continue };
            let mut m = start;
            while m < len {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
                m += i;
            }
        }
        Ok(SieveTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Raw table; entries 0 and 1 are 0.
    pub fn as_slice(&self) -> &[u32] {
        &self.spf
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            Err(Error::OutOfRange { n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(n >= 2 && u64::from(self.spf[n as usize]) == n)
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Result<LeastPrime> {
        self.check(n)?;
        Ok(self.spf_unchecked(n))
    }

    #[inline]
    pub(crate) fn spf_unchecked(&self, n: u64) -> LeastPrime {
        if n == 1 {
            LeastPrime::Infinity
        } else {
            LeastPrime::Finite(u64::from(self.spf[n as usize]))
        }
    }

    pub fn factorize(&self, n: u64) -> Result<PrimeFactorization> {
        self.check(n)?;
        let mut factors = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = u64::from(self.spf[m as usize]);
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(PrimeFactorization { n, factors })
    }

    pub fn divisors(&self, n: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        self.divisors_into(n, &mut out)?;
        Ok(out)
    }

    /// Sorted divisors of `n` written into `out`; avoids the intermediate
    /// factorization allocation on hot paths.
    pub fn divisors_into(&self, n: u64, out: &mut Vec<u64>) -> Result<()> {
        self.check(n)?;
        out.clear();
        out.push(1);
        let mut m = n;
        while m > 1 {
            let p = u64::from(self.spf[m as usize]);
            let base = out.len();
            let mut pk = 1;
            while m % p == 0 {
                m /= p;
                pk *= p;
                for i in 0..base {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        Ok(())
    }

    pub fn omega_total(&self, n: u64) -> Result<u32> {
        self.check(n)?;
        let mut m = n as usize;
        let mut count = 0;
        while m > 1 {
            m /= self.spf[m] as usize;
            count += 1;
        }
        Ok(count)
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        Ok(self.factorize(n)?.mobius())
    }
}

/// `P^-(n)` by trial division, for values that may lie beyond a sieve.
pub fn least_prime_by_trial(n: u64) -> LeastPrime {
    if n <= 1 {
        return LeastPrime::Infinity;
    }
    if n % 2 == 0 {
        return LeastPrime::Finite(2);
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return LeastPrime::Finite(d);
        }
        d += 2;
    }
    LeastPrime::Finite(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn small_sieve_by_hand() {
        let s = SieveTable::build(10).unwrap();
        assert_eq!(&s.as_slice()[2..], &[2, 3, 2, 5, 2, 7, 2, 3, 2]);
        let s = SieveTable::build(2).unwrap();
        assert_eq!(s.as_slice()[2], 2);
        let s = SieveTable::build(97).unwrap();
        assert_eq!(s.as_slice()[91], 7);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let s = SieveTable::build(20_000).unwrap();
        for n in 2..=20_000u64 {
            let expected = trial_factor(n)[0].0;
            assert_eq!(s.smallest_prime_factor(n).unwrap(), expected, "n={n}");
            assert_eq!(least_prime_by_trial(n), expected);
            assert_eq!(s.is_prime(n).unwrap(), trial_factor(n) == vec![(n, 1)]);
        }
    }

    #[test]
    fn build_errors() {
        assert_eq!(SieveTable::build(1).unwrap_err(), Error::Domain("sieve limit must be at least 2"));
        assert!(matches!(SieveTable::build(0), Err(Error::Domain(_))));
        assert_eq!(
            SieveTable::build_with_cap(1001, 1000).unwrap_err(),
            Error::Resource { limit: 1001, max_limit: 1000 }
        );
    }

    #[test]
    fn factorize_examples() {
        let s = SieveTable::build(10_000_000).unwrap();
        assert_eq!(s.factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert!(s.factorize(1).unwrap().factors.is_empty());
        let primorial = s.factorize(9_699_690).unwrap();
        assert_eq!(primorial.factors, trial_factor(9_699_690));
        assert_eq!(
            primorial.factors,
            vec![(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1)]
        );
        assert_eq!(s.factorize(0), Err(Error::OutOfRange { n: 0, limit: 10_000_000 }));
        assert_eq!(
            s.factorize(10_000_001),
            Err(Error::OutOfRange { n: 10_000_001, limit: 10_000_000 })
        );
    }

    #[test]
    fn divisors_examples() {
        let s = SieveTable::build(100).unwrap();
        assert_eq!(s.divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(s.divisors(1).unwrap(), vec![1]);
        assert_eq!(s.divisors(97).unwrap(), vec![1, 97]);
        assert!(s.divisors(101).is_err());
    }

    #[test]
    fn divisors_match_trial_division() {
        let s = SieveTable::build(10_000).unwrap();
        for n in 1..=10_000u64 {
            let expected: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(s.divisors(n).unwrap(), expected, "n={n}");
        }
    }

    #[test]
    fn least_prime_sentinel() {
        let s = SieveTable::build(100).unwrap();
        assert_eq!(s.smallest_prime_factor(1).unwrap(), LeastPrime::Infinity);
        assert!(LeastPrime::Infinity > LeastPrime::Finite(u64::MAX));
        assert!(LeastPrime::Infinity > u64::MAX);
        assert_eq!(s.smallest_prime_factor(15).unwrap(), 3);
        assert_eq!(s.smallest_prime_factor(49).unwrap(), 7);
        assert_eq!(LeastPrime::Infinity.scaled_cmp(1, u64::MAX), Ordering::Greater);
        assert_eq!(LeastPrime::Finite(2).scaled_cmp(3, 6), Ordering::Equal);
    }

    #[test]
    fn omega_and_mobius() {
        let s = SieveTable::build(2000).unwrap();
        assert_eq!(s.omega_total(1).unwrap(), 0);
        assert_eq!(s.omega_total(12).unwrap(), 3);
        assert_eq!(s.omega_total(1024).unwrap(), 10);
        assert_eq!(s.mobius(1).unwrap(), 1);
        assert_eq!(s.mobius(6).unwrap(), 1);
        assert_eq!(s.mobius(12).unwrap(), 0);
        assert_eq!(s.mobius(30).unwrap(), -1);
        for n in 1..=2000u64 {
            let f = s.factorize(n).unwrap();
            assert_eq!(s.omega_total(n).unwrap(), f.omega_total());
            let mu = s.mobius(n).unwrap();
            assert_eq!(mu * mu == 1, f.factors.iter().all(|&(_, e)| e == 1));
            if n > 1 {
                assert_eq!(s.smallest_prime_factor(n).unwrap(), f.factors[0].0);
            }
        }
    }
}
