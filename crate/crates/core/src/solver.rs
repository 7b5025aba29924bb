//! Exact minimal-surface factorizations.
//!
//! A tuple `v = (v_1, ..., v_k)` with `v_1 <= ... <= v_k` and product `n`
//! is compared through its surface numerator `n * (1/v_1 + ... + 1/v_k)`,
//! an exact integer because every `v_j` divides `n`. The box surface is
//! twice that value, so ordering by the numerator is ordering by surface.
//!
//! [`Solver`] walks every ordered factorization of `n` once, in
//! lexicographic order, and keeps the first minimizer it meets together
//! with the number of minimizers. The only pruning is `d^slots <= rest`,
//! which follows from the ordering and never discards a tuple.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::sieve::{least_prime_by_trial, LeastPrime, SieveTable};
use crate::{Error, Result, MAX_VOLUME};

/// A non-decreasing factorization of `n` into `k >= 2` positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorTuple {
    n: u64,
    factors: Vec<u64>,
    surface_num: u64,
}

impl FactorTuple {
    /// Sorts `factors` and checks that they multiply to `n`.
    pub fn new(mut factors: Vec<u64>, n: u64) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::Domain("a box needs at least two edges"));
        }
        factors.sort_unstable();
        let surface_num = surface_numerator(&factors, n)?;
        Ok(FactorTuple { n, factors, surface_num })
    }

    fn from_parts(n: u64, factors: Vec<u64>, surface_num: u64) -> Self {
        debug_assert_eq!(surface_numerator(&factors, n), Ok(surface_num));
        FactorTuple { n, factors, surface_num }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// `n * S(v)`.
    pub fn surface_num(&self) -> u64 {
        self.surface_num
    }

    pub fn surface_area(&self) -> u64 {
        2 * self.surface_num
    }

    pub fn into_factors(self) -> Vec<u64> {
        self.factors
    }
}

/// Solution of the minimal-surface problem for one `(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalProfile {
    /// Lexicographically smallest minimizer.
    pub rho: FactorTuple,
    /// Number of distinct ordered tuples attaining the minimum.
    pub tie_count: u32,
}

impl OptimalProfile {
    pub fn n(&self) -> u64 {
        self.rho.n
    }

    pub fn k(&self) -> usize {
        self.rho.k()
    }

    /// The `j`-th smallest edge, `1 <= j <= k`.
    pub fn edge(&self, j: usize) -> u64 {
        self.rho.factors[j - 1]
    }

    /// `rho_1 * ... * rho_j`, `1 <= j <= k`.
    pub fn partial_product(&self, j: usize) -> u64 {
        self.rho.factors[..j].iter().product()
    }
}

/// Result of one improvement step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Improved(FactorTuple),
    FixedPoint,
}

fn check_product(factors: &[u64], n: u64) -> Result<()> {
    let invalid = Error::InvalidTuple { n };
    if n == 0 || factors.iter().any(|&d| d == 0 || n % d != 0) {
        return Err(invalid);
    }
    let mut prod: u64 = 1;
    for &d in factors {
        prod = prod.checked_mul(d).ok_or(invalid.clone())?;
    }
    if prod != n {
        return Err(invalid);
    }
    Ok(())
}

/// `sum_j n / factors[j]`; the exact integer form of `n * S(v)`.
pub fn surface_numerator(factors: &[u64], n: u64) -> Result<u64> {
    check_product(factors, n)?;
    if n > MAX_VOLUME {
        return Err(Error::Domain("volume exceeds 2^40"));
    }
    Ok(factors.iter().map(|&d| n / d).sum())
}

/// Surface `2 * sum_h prod_{m != h} d_m` of the box with the given edges.
pub fn surface_area(factors: &[u64], n: u64) -> Result<u64> {
    check_product(factors, n)?;
    if n > MAX_VOLUME {
        return Err(Error::Domain("volume exceeds 2^40"));
    }
    let mut total: u128 = 0;
    for h in 0..factors.len() {
        let face: u128 = factors
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != h)
            .map(|(_, &d)| u128::from(d))
            .product();
        total += face;
    }
    Ok((2 * total) as u64)
}

fn check_dimension(k: usize) -> Result<()> {
    if k < 2 {
        Err(Error::Domain("dimension k must be at least 2"))
    } else {
        Ok(())
    }
}

fn check_volume(n: u64, sieve: &SieveTable) -> Result<()> {
    if n > MAX_VOLUME {
        return Err(Error::Domain("volume exceeds 2^40"));
    }
    if n == 0 || n > sieve.limit() {
        return Err(Error::OutOfRange { n, limit: sieve.limit() });
    }
    Ok(())
}

/// Depth-first walk over the non-decreasing factorizations of `n`.
///
/// `divs` are the sorted divisors of `n`; `cur[..depth]` holds the chosen
/// prefix, `rest` the product still to distribute and `partial` the surface
/// numerator of the prefix.
#[allow(clippy::too_many_arguments)]
fn walk<F: FnMut(&[u64], u64)>(
    n: u64,
    divs: &[u64],
    cur: &mut [u64],
    depth: usize,
    start: usize,
    rest: u64,
    partial: u64,
    visit: &mut F,
) {
    let slots = (cur.len() - depth) as u32;
    if slots == 1 {
        cur[depth] = rest;
        visit(cur, partial + n / rest);
        return;
    }
    for (idx, &d) in divs.iter().enumerate().skip(start) {
        match d.checked_pow(slots) {
            Some(p) if p <= rest => {}
            _ => break,
        }
        if rest % d != 0 {
            continue;
        }
        cur[depth] = d;
        walk(n, divs, cur, depth + 1, idx, rest / d, partial + n / d, visit);
    }
}

/// Every element of `E_n` for dimension `k`, in lexicographic order.
pub fn enumerate_tuples(n: u64, k: usize, sieve: &SieveTable) -> Result<Vec<FactorTuple>> {
    check_dimension(k)?;
    check_volume(n, sieve)?;
    let divs = sieve.divisors(n)?;
    let mut cur = alloc::vec![0; k];
    let mut out = Vec::new();
    walk(n, &divs, &mut cur, 0, 0, n, 0, &mut |t: &[u64], s| {
        out.push(FactorTuple::from_parts(n, t.to_vec(), s));
    });
    Ok(out)
}

/// Solves one `(n, k)` instance with a throwaway [`Solver`].
pub fn solve(n: u64, k: usize, sieve: &SieveTable) -> Result<OptimalProfile> {
    Solver::new(k)?.solve(n, sieve)
}

/// Reusable solver for a fixed dimension. Keeps its scratch buffers between
/// calls, so sweeping many `n` allocates nothing per instance on the
/// [`Solver::solve_into`] path.
#[derive(Debug, Clone)]
pub struct Solver {
    k: usize,
    divs: Vec<u64>,
    cur: Vec<u64>,
}

impl Solver {
    pub fn new(k: usize) -> Result<Self> {
        check_dimension(k)?;
        Ok(Solver { k, divs: Vec::new(), cur: alloc::vec![0; k] })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Writes the canonical optimum into `rho` (length `k`) and returns the
    /// minimal surface numerator and the tie count.
    pub fn solve_into(&mut self, n: u64, sieve: &SieveTable, rho: &mut [u64]) -> Result<(u64, u32)> {
        assert_eq!(rho.len(), self.k, "output slice must have length k");
        check_volume(n, sieve)?;
        sieve.divisors_into(n, &mut self.divs)?;
        let mut best = u64::MAX;
        let mut ties = 0u32;
        walk(n, &self.divs, &mut self.cur, 0, 0, n, 0, &mut |t: &[u64], s| {
            match s.cmp(&best) {
                Ordering::Less => {
                    best = s;
                    ties = 1;
                    rho.copy_from_slice(t);
                }
                Ordering::Equal => ties += 1,
                Ordering::Greater => {}
            }
        });
        Ok((best, ties))
    }

    pub fn solve(&mut self, n: u64, sieve: &SieveTable) -> Result<OptimalProfile> {
        let mut rho = alloc::vec![0; self.k];
        let (surface_num, tie_count) = self.solve_into(n, sieve, &mut rho)?;
        Ok(OptimalProfile { rho: FactorTuple::from_parts(n, rho, surface_num), tie_count })
    }

    /// All minimizers, in lexicographic order.
    pub fn optimal_tuples(&mut self, n: u64, sieve: &SieveTable) -> Result<Vec<FactorTuple>> {
        check_volume(n, sieve)?;
        sieve.divisors_into(n, &mut self.divs)?;
        let mut best = u64::MAX;
        let mut found: Vec<Vec<u64>> = Vec::new();
        walk(n, &self.divs, &mut self.cur, 0, 0, n, 0, &mut |t: &[u64], s| {
            match s.cmp(&best) {
                Ordering::Less => {
                    best = s;
                    found.clear();
                    found.push(t.to_vec());
                }
                Ordering::Equal => found.push(t.to_vec()),
                Ordering::Greater => {}
            }
        });
        Ok(found.into_iter().map(|f| FactorTuple::from_parts(n, f, best)).collect())
    }
}

fn least_prime(v: u64, sieve: &SieveTable) -> LeastPrime {
    if v <= sieve.limit() {
        sieve.spf_unchecked(v)
    } else {
        least_prime_by_trial(v)
    }
}

/// Moves the smallest prime of some `v_h` onto a smaller `v_j` when
/// `v_j * P^-(v_h) < v_h`. Scans `h` upwards, then `j` upwards, and applies
/// the first admissible pair. The result has strictly smaller surface.
pub fn improve_once(t: &FactorTuple, sieve: &SieveTable) -> Step {
    let v = &t.factors;
    for h in 1..v.len() {
        let p = least_prime(v[h], sieve);
        for j in 0..h {
            if p.scaled_cmp(v[j], v[h]) == Ordering::Less {
                let p = p.finite().expect("finite when the move applies");
                let mut w = v.clone();
                w[j] *= p;
                w[h] /= p;
                w.sort_unstable();
                let s = w.iter().map(|&d| t.n / d).sum();
                return Step::Improved(FactorTuple::from_parts(t.n, w, s));
            }
        }
    }
    Step::FixedPoint
}

/// Applies [`improve_once`] until nothing moves.
pub fn local_search(t: &FactorTuple, sieve: &SieveTable) -> FactorTuple {
    let mut cur = t.clone();
    while let Step::Improved(next) = improve_once(&cur, sieve) {
        cur = next;
    }
    cur
}

/// `v_j * P^-(v_h) >= v_h` for every `j < h`. Every optimal tuple passes.
pub fn check_necessary_condition(t: &FactorTuple, sieve: &SieveTable) -> bool {
    let v = &t.factors;
    (1..v.len()).all(|h| {
        let p = least_prime(v[h], sieve);
        // v is sorted, so v[0] is the binding j.
        p.scaled_cmp(v[0], v[h]) != Ordering::Less
    })
}
