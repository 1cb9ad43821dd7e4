use std::collections::BTreeMap;

use cycloscope::arith::is_prime;
use cycloscope::cyclotomic::{multiplicative_order, trace_multiset, TraceMultiset};
use cycloscope::matsuda::{
    brute_force_membership, davenport_brute, e_membership, in_m_ring, reversal, trace, zero_sum_subset, Reason,
    Verdict,
};
use cycloscope::polyarith::{Poly, PrimeField};
use cycloscope::Caps;
use proptest::prelude::*;

fn field(l: u64) -> PrimeField {
    PrimeField::new(l).unwrap()
}

fn x_p_minus_1(p: u64, l: u64) -> Poly {
    let mut c = vec![0; p as usize + 1];
    c[0] = l - 1;
    c[p as usize] = 1;
    Poly::from_coeffs(field(l), c)
}

/// Nonzero constant term, nonconstant.
fn unit_poly(l: u64) -> impl Strategy<Value = Poly> {
    (1..l, prop::collection::vec(0..l, 0..30), 1..l).prop_map(move |(c0, mid, lead)| {
        let mut c = vec![c0];
        c.extend(mid);
        c.push(lead);
        Poly::from_coeffs(field(l), c)
    })
}

fn poly_pair() -> impl Strategy<Value = (Poly, Poly)> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11]).prop_flat_map(|l| (unit_poly(l), unit_poly(l)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    #[test]
    fn reversal_identities((f, g) in poly_pair()) {
        prop_assert_eq!(reversal(&reversal(&f).unwrap()).unwrap(), f.clone());
        prop_assert_eq!(reversal(&(&f * &g)).unwrap(), &reversal(&f).unwrap() * &reversal(&g).unwrap());
        if in_m_ring(&f) {
            prop_assert_eq!(trace(&reversal(&f).unwrap()).unwrap().value, 0);
        }
        let mut h = f.coeffs().to_vec();
        if h.len() > 2 {
            h[1] = 0;
            let h = Poly::from_coeffs(f.field(), h);
            prop_assert_eq!(trace(&reversal(&h).unwrap()).unwrap().value, 0);
        }
    }

    #[test]
    fn trace_is_additive_on_monic((f, g) in poly_pair()) {
        let (f, g) = (f.monic(), g.monic());
        let field = f.field();
        let lhs = trace(&(&f * &g)).unwrap().value;
        prop_assert_eq!(lhs, field.add(trace(&f).unwrap().value, trace(&g).unwrap().value));
    }

    #[test]
    fn zero_sum_matches_exhaustive_search(
        l in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        raw in prop::collection::vec(0u64..13, 0..9),
    ) {
        let values: Vec<u64> = raw.into_iter().map(|v| v % l).collect();
        let t = TraceMultiset::from_traces(l, values.iter().copied());
        let exists = (1u32..(1 << values.len())).any(|mask| {
            values.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).sum::<u64>() % l == 0
        });
        let w = zero_sum_subset(&t).unwrap();
        prop_assert_eq!(w.is_some(), exists);
        if let Some(w) = w {
            prop_assert!(!w.chosen.is_empty());
            let sum: u64 = w.chosen.iter().map(|(&v, &m)| v * m as u64).sum();
            prop_assert_eq!(sum % l, 0);
            for (v, m) in &w.chosen {
                prop_assert!(*m >= 1 && *m <= t.count(*v));
            }
        }
        if t.total as u64 >= l {
            prop_assert!(exists);
        }
    }
}

#[test]
fn reversal_examples() {
    let f = Poly::from_signed(field(2), &[1, 0, 1, 1]);
    assert_eq!(reversal(&f).unwrap(), Poly::from_signed(field(2), &[1, 1, 0, 1]));
    let x = x_p_minus_1(7, 5);
    assert_eq!(reversal(&x).unwrap(), -&x);
    assert_eq!(reversal(&Poly::zero(field(3))).unwrap_err().exit_code(), 2);
}

#[test]
fn trace_and_ring_examples() {
    for (p, l) in [(7u64, 2u64), (11, 3), (13, 5)] {
        let phi = Poly::from_coeffs(field(l), vec![1; p as usize]);
        assert_eq!(trace(&phi).unwrap().value, l - 1);
    }
    assert_eq!(trace(&Poly::from_signed(field(2), &[1, 1, 0, 1])).unwrap().value, 0);
    assert!(trace(&Poly::one(field(5))).is_err());
    assert!(in_m_ring(&Poly::from_signed(field(2), &[1, 0, 1, 1, 1])));
    assert!(!in_m_ring(&Poly::from_signed(field(2), &[1, 1, 1])));
    assert!(in_m_ring(&Poly::one(field(2))));
}

#[test]
fn zero_sum_examples() {
    let w = zero_sum_subset(&TraceMultiset::from_traces(2, [0, 1])).unwrap().unwrap();
    assert_eq!(w.chosen, BTreeMap::from([(0, 1)]));
    assert!(zero_sum_subset(&TraceMultiset::from_traces(5, [2, 2])).unwrap().is_none());
    // s >= l always has a witness: every multiset of size l over Z/l for l <= 7.
    for l in [2u64, 3, 5, 7] {
        let mut seq = vec![0u64; l as usize];
        loop {
            let t = TraceMultiset::from_traces(l, seq.iter().copied());
            assert!(zero_sum_subset(&t).unwrap().is_some(), "{seq:?} mod {l}");
            let mut i = 0;
            while i < seq.len() && seq[i] == l - 1 {
                i += 1;
            }
            if i == seq.len() {
                break;
            }
            let v = seq[i] + 1;
            for x in seq.iter_mut().take(i + 1) {
                *x = v;
            }
        }
    }
}

#[test]
fn membership_examples() {
    let caps = Caps::default();
    let m = e_membership(7, 2, true, &caps).unwrap();
    assert_eq!(m.verdict, Verdict::Member);
    let w = m.witness.unwrap();
    assert_eq!(w.g.to_string(), "X^4 + X^3 + X^2 + 1");
    assert_eq!(w.h.to_string(), "X^3 + X^2 + 1");
    let m = e_membership(11, 3, true, &caps).unwrap();
    let w = m.witness.unwrap();
    assert_eq!(w.g.to_string(), "X^6 - X^5 - X^4 - X^3 + X^2 + 1");
    assert_eq!(w.h.to_string(), "X^5 + X^4 - X^3 + X^2 - 1");
    let m = e_membership(11, 5, false, &caps).unwrap();
    assert_eq!((m.verdict, m.reason), (Verdict::Nonmember, Reason::NoZeroSum));
    assert_eq!(e_membership(4, 2, false, &caps).unwrap_err().exit_code(), 2);
    assert_eq!(e_membership(7, 7, false, &caps).unwrap().reason, Reason::SelfPrime);
    assert_eq!(e_membership(2, 3, false, &caps).unwrap().reason, Reason::PrimitiveRoot);
    assert_eq!(e_membership(3, 2, false, &caps).unwrap().reason, Reason::PrimitiveRoot);
}

#[test]
fn witness_beyond_oracle_cap_is_omitted() {
    let caps = Caps { oracle_cap: 100, ..Caps::default() };
    let m = e_membership(127, 2, true, &caps).unwrap();
    assert_eq!(m.verdict, Verdict::Member);
    assert!(m.witness.is_none());
    assert!(m.note.is_some());
}

#[test]
fn witnesses_are_valid() {
    let caps = Caps::default();
    for l in [2u64, 3, 5, 7] {
        for p in (2..700u64).filter(|&p| is_prime(p) && p != l) {
            let m = e_membership(p, l, true, &caps).unwrap();
            if let Some(w) = &m.witness {
                assert_eq!(&w.g * &w.h, x_p_minus_1(p, l), "p = {p}, l = {l}");
                assert!(w.g.degree().unwrap() >= 2 && w.h.degree().unwrap() >= 2);
                assert!(in_m_ring(&w.g) && in_m_ring(&w.h));
            } else {
                assert!(!m.is_member());
            }
        }
    }
}

#[test]
fn membership_agrees_with_brute_force() {
    let caps = Caps::default();
    for l in [2u64, 3, 5, 7] {
        for p in (2..800u64).filter(|&p| is_prime(p) && p != l) {
            let fast = e_membership(p, l, false, &caps).unwrap().is_member();
            assert_eq!(fast, brute_force_membership(p, l, &caps).unwrap(), "p = {p}, l = {l}");
        }
    }
}

#[test]
fn brute_force_examples() {
    let caps = Caps::default();
    assert!(brute_force_membership(7, 2, &caps).unwrap());
    assert!(!brute_force_membership(3, 2, &caps).unwrap());
    assert!(!brute_force_membership(11, 5, &caps).unwrap());
    assert_eq!(brute_force_membership(3001, 2, &caps).unwrap_err().exit_code(), 3);
}

#[test]
fn index_at_least_ell_forces_membership() {
    let caps = Caps::default();
    for l in [2u64, 3, 5, 7, 11] {
        for p in (2..3000u64).filter(|&p| is_prime(p) && p != l) {
            let s = (p - 1) / multiplicative_order(l as i64, p).unwrap();
            if s >= l && s <= 400 {
                let traces = trace_multiset(p, l, &caps).unwrap();
                assert!(zero_sum_subset(&traces).unwrap().is_some(), "p = {p}, l = {l}");
            }
        }
    }
}

#[test]
fn davenport_examples() {
    assert!(davenport_brute(3, 3).unwrap());
    assert!(!davenport_brute(3, 2).unwrap());
    assert!(davenport_brute(2, 2).unwrap());
    assert!(davenport_brute(5, 5).unwrap());
    assert!(!davenport_brute(5, 4).unwrap());
    assert_eq!(davenport_brute(4, 2).unwrap_err().exit_code(), 2);
    assert_eq!(davenport_brute(101, 101).unwrap_err().exit_code(), 3);
}
