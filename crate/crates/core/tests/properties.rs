use std::sync::OnceLock;

use minbox_core::solver::{self, improve_once, local_search, FactorTuple, Step};
use minbox_core::SieveTable;
use proptest::prelude::*;

const LIMIT: u64 = 200_000;

fn sieve() -> &'static SieveTable {
    static SIEVE: OnceLock<SieveTable> = OnceLock::new();
    SIEVE.get_or_init(|| SieveTable::build(LIMIT).unwrap())
}

/// Some random element of E_n: pick divisors of what is left.
fn random_tuple(n: u64, k: usize, picks: &[u64]) -> FactorTuple {
    let mut rest = n;
    let mut f = Vec::with_capacity(k);
    for &pick in &picks[..k - 1] {
        let divs = sieve().divisors(rest).unwrap();
        let d = divs[(pick % divs.len() as u64) as usize];
        f.push(d);
        rest /= d;
    }
    f.push(rest);
    FactorTuple::new(f, n).unwrap()
}

proptest! {
    #[test]
    fn omega_is_completely_additive(a in 1u64..=1000, b in 1u64..=LIMIT / 1000) {
        let s = sieve();
        prop_assert_eq!(s.omega_total(a * b).unwrap(), s.omega_total(a).unwrap() + s.omega_total(b).unwrap());
    }

    #[test]
    fn factorization_reconstructs(n in 1u64..=LIMIT) {
        let f = sieve().factorize(n).unwrap();
        let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(prod, n);
        prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(f.factors.iter().all(|&(p, e)| e >= 1 && sieve().is_prime(p).unwrap()));
    }

    #[test]
    fn improvement_strictly_decreases_surface(
        n in 1u64..=LIMIT,
        k in 2usize..=5,
        picks in proptest::collection::vec(any::<u64>(), 5),
    ) {
        let t = random_tuple(n, k, &picks);
        if let Step::Improved(w) = improve_once(&t, sieve()) {
            prop_assert!(w.surface_num() < t.surface_num());
            prop_assert_eq!(w.n(), n);
            prop_assert_eq!(w.factors().iter().product::<u64>(), n);
            prop_assert!(w.factors().windows(2).all(|p| p[0] <= p[1]));
        }
        let end = local_search(&t, sieve());
        prop_assert!(solver::check_necessary_condition(&end, sieve()));
        prop_assert!(end.surface_num() <= t.surface_num());
        let opt = solver::solve(n, k, sieve()).unwrap();
        prop_assert!(opt.rho.surface_num() <= end.surface_num());
    }

    #[test]
    fn optimum_is_a_fixed_point(n in 1u64..=LIMIT, k in 2usize..=5) {
        let p = solver::solve(n, k, sieve()).unwrap();
        prop_assert_eq!(improve_once(&p.rho, sieve()), Step::FixedPoint);
        prop_assert!(p.tie_count >= 1);
    }
}
