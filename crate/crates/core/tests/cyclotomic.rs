use std::collections::BTreeSet;

use cycloscope::arith::is_prime;
use cycloscope::cyclotomic::{
    coset_partition, cyclotomic_poly, factor_oracle, is_irreducible, multiplicative_order, trace_multiset,
    trace_multiset_by_gcd,
};
use cycloscope::matsuda::trace;
use cycloscope::polyarith::{Poly, PrimeField};
use cycloscope::Caps;
use proptest::prelude::*;

fn primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&p| is_prime(p)).collect()
}

fn prime_pair(max_p: u64) -> impl Strategy<Value = (u64, u64)> {
    let ps = primes_below(max_p);
    let ls = vec![2u64, 3, 5, 7, 11, 13, 101, 65_537];
    (prop::sample::select(ps), prop::sample::select(ls)).prop_filter("p != l", |(p, l)| p != l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cosets_partition_units((p, l) in prime_pair(5000)) {
        let part = coset_partition(p, l).unwrap();
        let r = multiplicative_order(l as i64, p).unwrap();
        prop_assert_eq!(part.r, r);
        prop_assert_eq!(part.r * part.s, p - 1);
        let mut seen = BTreeSet::new();
        let mut last_min = 0;
        for (i, c) in part.cosets.iter().enumerate() {
            prop_assert_eq!(c.len() as u64, r);
            prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(c[0] > last_min);
            last_min = c[0];
            if i == 0 {
                prop_assert_eq!(c[0], 1);
            }
            let members: BTreeSet<u64> = c.iter().copied().collect();
            for &x in c {
                prop_assert!(members.contains(&(x * l % p)));
                prop_assert!(seen.insert(x));
            }
        }
        prop_assert_eq!(seen.len() as u64, p - 1);
    }

    #[test]
    fn trace_multiset_invariants((p, l) in prime_pair(20_000)) {
        let r = multiplicative_order(l as i64, p).unwrap();
        prop_assume!((p - 1) / r <= 400);
        let t = trace_multiset(p, l, &Caps::default()).unwrap();
        prop_assert_eq!(t.total as u64, (p - 1) / r);
        prop_assert_eq!(t.entries.values().sum::<usize>(), t.total);
        prop_assert_eq!(t.weighted_sum(), l - 1);
        prop_assert!(t.entries.keys().all(|&v| v < l));
    }
}

#[test]
fn oracle_factorizations_are_complete() {
    let caps = Caps::default();
    for l in [2u64, 3, 5, 7] {
        for p in primes_below(600).into_iter().filter(|&p| p != l) {
            let list = factor_oracle(p, l, &caps).unwrap();
            let r = multiplicative_order(l as i64, p).unwrap();
            assert_eq!(list.factors.len() as u64, (p - 1) / r);
            assert_eq!(list.product(), cyclotomic_poly(p, l).unwrap());
            let distinct: BTreeSet<Vec<u64>> = list.factors.iter().map(|f| f.coeffs().to_vec()).collect();
            assert_eq!(distinct.len(), list.factors.len());
            for f in &list.factors {
                assert!(f.is_monic());
                assert_eq!(f.degree(), Some(r as usize));
                if p < 200 {
                    assert!(is_irreducible(f).unwrap(), "{f} over F_{l}");
                }
            }
        }
    }
}

#[test]
fn oracle_is_reproducible() {
    let caps = Caps::default();
    assert_eq!(factor_oracle(1009, 3, &caps).unwrap(), factor_oracle(1009, 3, &caps).unwrap());
}

#[test]
fn oracle_examples() {
    let caps = Caps::default();
    let f2 = PrimeField::new(2).unwrap();
    let list = factor_oracle(7, 2, &caps).unwrap();
    assert_eq!(
        list.factors,
        vec![Poly::from_signed(f2, &[1, 1, 0, 1]), Poly::from_signed(f2, &[1, 0, 1, 1])]
    );
    assert_eq!(factor_oracle(5, 3, &caps).unwrap().factors, vec![cyclotomic_poly(5, 3).unwrap()]);
    // Removing X - 1 from the displayed factorization of X^11 - 1 over F_3.
    let f3 = PrimeField::new(3).unwrap();
    let g = Poly::from_signed(f3, &[1, 0, 1, -1, -1, -1, 1]);
    let h = Poly::from_signed(f3, &[-1, 0, 1, -1, 1, 1]);
    let x_minus_1 = Poly::from_signed(f3, &[-1, 1]);
    let list = factor_oracle(11, 3, &caps).unwrap();
    assert_eq!(list.factors.len(), 2);
    let quintics: Vec<Poly> = [&g, &h]
        .iter()
        .map(|w| {
            let (q, rem) = w.div_rem(&x_minus_1);
            if rem.is_zero() { q.monic() } else { w.monic() }
        })
        .collect();
    let mut from_display: Vec<Vec<u64>> = quintics
        .iter()
        .flat_map(|q| list.factors.iter().filter(move |f| q.rem(f).is_zero()).map(|f| f.coeffs().to_vec()))
        .collect();
    from_display.sort();
    from_display.dedup();
    assert_eq!(from_display.len(), 2);
    assert_eq!(factor_oracle(3001, 2, &caps).unwrap_err().exit_code(), 3);
    let wider = Caps { oracle_cap: 4000, ..caps };
    assert!(factor_oracle(3001, 2, &wider).is_ok());
}

#[test]
fn trace_examples_against_oracle() {
    let caps = Caps::default();
    for (p, l) in [(7u64, 2u64), (11, 3), (11, 5)] {
        let list = factor_oracle(p, l, &caps).unwrap();
        let mut expected: Vec<u64> = list.factors.iter().map(|f| trace(f).unwrap().value).collect();
        expected.sort();
        let t = trace_multiset(p, l, &caps).unwrap();
        let mut got: Vec<u64> = t.entries.iter().flat_map(|(&v, &m)| std::iter::repeat_n(v, m)).collect();
        got.sort();
        assert_eq!(got, expected, "p = {p}, l = {l}");
    }
    let t = trace_multiset(7, 2, &caps).unwrap();
    assert_eq!(t.count(0), 1);
    assert_eq!(t.count(1), 1);
    let t = trace_multiset(11, 5, &caps).unwrap();
    assert_eq!(t.total, 2);
    assert_eq!(t.count(0), 0);
    assert_eq!(trace_multiset(7, 7, &caps).unwrap_err().exit_code(), 2);
}

#[test]
fn gcd_route_matches_period_route() {
    let caps = Caps::default();
    for l in [2u64, 3, 5, 7, 13] {
        for p in primes_below(700).into_iter().filter(|&p| p != l) {
            assert_eq!(trace_multiset(p, l, &caps).unwrap(), trace_multiset_by_gcd(p, l, &caps).unwrap());
        }
    }
}

#[test]
fn trace_cap_is_enforced() {
    let caps = Caps { trace_cap: 1000, ..Caps::default() };
    assert_eq!(trace_multiset(1009, 2, &caps).unwrap_err().exit_code(), 3);
}

#[test]
fn irreducibility_examples() {
    let f2 = PrimeField::new(2).unwrap();
    assert!(is_irreducible(&Poly::from_signed(f2, &[1, 1, 0, 1])).unwrap());
    assert!(!is_irreducible(&Poly::from_signed(f2, &[1, 0, 1])).unwrap());
    assert!(!is_irreducible(&cyclotomic_poly(7, 2).unwrap()).unwrap());
    // Phi_p is irreducible exactly when l is a primitive root mod p.
    for p in primes_below(60).into_iter().filter(|&p| p > 2) {
        for l in [2u64, 3, 5] {
            if p == l {
                continue;
            }
            let prim = multiplicative_order(l as i64, p).unwrap() == p - 1;
            assert_eq!(is_irreducible(&cyclotomic_poly(p, l).unwrap()).unwrap(), prim, "p = {p}, l = {l}");
        }
    }
}
