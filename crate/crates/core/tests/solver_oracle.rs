//! Solver against an unpruned brute force over all ordered divisor tuples.

use minbox_core::solver::{self, check_necessary_condition, surface_area, surface_numerator};
use minbox_core::SieveTable;

fn trial_divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Every non-decreasing k-tuple with product n, found by trying all
/// (k-1)-tuples of divisors and completing with the cofactor.
fn brute_tuples(n: u64, k: usize) -> Vec<Vec<u64>> {
    let divs = trial_divisors(n);
    let mut out = Vec::new();
    let mut idx = vec![0usize; k - 1];
    loop {
        let prefix: Vec<u64> = idx.iter().map(|&i| divs[i]).collect();
        let prod: u64 = prefix.iter().product();
        if n % prod == 0 {
            let mut t = prefix.clone();
            t.push(n / prod);
            if t.windows(2).all(|w| w[0] <= w[1]) {
                out.push(t);
            }
        }
        let mut pos = 0;
        loop {
            if pos == k - 1 {
                out.sort();
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < divs.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn brute_optimum(n: u64, k: usize) -> (u64, Vec<u64>, u32) {
    let tuples = brute_tuples(n, k);
    let cost = |t: &Vec<u64>| t.iter().map(|&d| n / d).sum::<u64>();
    let best = tuples.iter().map(cost).min().unwrap();
    let minimizers: Vec<&Vec<u64>> = tuples.iter().filter(|t| cost(t) == best).collect();
    (best, minimizers[0].clone(), minimizers.len() as u32)
}

#[test]
fn enumeration_matches_brute_force() {
    let sieve = SieveTable::build(3000).unwrap();
    for k in 2..=4 {
        for n in 1..=3000u64 {
            let got: Vec<Vec<u64>> = solver::enumerate_tuples(n, k, &sieve)
                .unwrap()
                .into_iter()
                .map(|t| t.into_factors())
                .collect();
            assert_eq!(got, brute_tuples(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn solve_matches_brute_force() {
    let sieve = SieveTable::build(3000).unwrap();
    let mut solvers: Vec<_> = (2..=5).map(|k| solver::Solver::new(k).unwrap()).collect();
    for n in 1..=3000u64 {
        for s in solvers.iter_mut() {
            let k = s.k();
            let p = s.solve(n, &sieve).unwrap();
            let (best, first, ties) = brute_optimum(n, k);
            assert_eq!(p.rho.surface_num(), best, "n={n} k={k}");
            assert_eq!(p.rho.factors(), first.as_slice(), "n={n} k={k}");
            assert_eq!(p.tie_count, ties, "n={n} k={k}");
            assert!(check_necessary_condition(&p.rho, &sieve), "n={n} k={k}");
        }
    }
}

#[test]
fn two_dimensional_closed_form() {
    let sieve = SieveTable::build(20_000).unwrap();
    let mut s = solver::Solver::new(2).unwrap();
    for n in 1..=20_000u64 {
        let divs = trial_divisors(n);
        let lo = *divs.iter().filter(|&&d| d * d <= n).max().unwrap();
        let hi = *divs.iter().filter(|&&d| d * d >= n).min().unwrap();
        let p = s.solve(n, &sieve).unwrap();
        assert_eq!(p.rho.factors(), &[lo, hi], "n={n}");
        assert_eq!(p.tie_count, 1);
    }
}

#[test]
fn surface_identity_and_trivial_bounds() {
    let sieve = SieveTable::build(2000).unwrap();
    for k in 2..=5usize {
        for n in 1..=2000u64 {
            for t in solver::enumerate_tuples(n, k, &sieve).unwrap() {
                let f = t.factors();
                assert_eq!(surface_area(f, n).unwrap(), 2 * surface_numerator(f, n).unwrap());
                assert!(t.surface_num() <= k as u64 * n);
            }
            let p = solver::solve(n, k, &sieve).unwrap();
            for j in 1..=k {
                let gamma = (k + 1 - j) as u32;
                assert!(u128::from(p.edge(j)).pow(gamma) <= u128::from(n));
            }
            assert!(u128::from(p.edge(1)).pow(k as u32) <= u128::from(n));
        }
    }
}
