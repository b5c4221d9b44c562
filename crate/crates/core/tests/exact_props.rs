use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use genmoon::exact::{cyc_from_root, Cyclotomic, UnityExponent};

fn small_cyc() -> impl Strategy<Value = Cyclotomic> {
    let term = (1i64..=12, 0i64..12, -3i64..=3, 1i64..=3);
    prop::collection::vec(term, 0..4).prop_map(|ts| {
        Cyclotomic::from_terms(ts.into_iter().map(|(den, num, a, b)| {
            (UnityExponent::new(num, den), BigRational::new(BigInt::from(a), BigInt::from(b)))
        }))
    })
}

fn mobius(n: u64) -> i64 {
    let (mut m, mut k, mut p) = (n, 1i64, 2);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            k = -k;
        }
        p += 1;
    }
    if m > 1 {
        k = -k;
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn primitive_root_sums_are_mobius() {
    // The sum of the primitive n-th roots is the coefficient read off Φ_n, i.e. μ(n).
    for n in 1..=60u64 {
        let mut s = Cyclotomic::zero();
        for k in (0..n).filter(|&k| gcd(k, n) == 1) {
            s += &Cyclotomic::e(k as i64, n as i64);
        }
        assert_eq!(s, Cyclotomic::from_integer(mobius(n)), "n = {n}");
    }
}

#[test]
fn all_roots_sum_to_zero() {
    for n in 2..=40i64 {
        let mut s = Cyclotomic::zero();
        for k in 0..n {
            s += &Cyclotomic::e(k, n);
        }
        assert!(s.is_zero(), "n = {n}: {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in small_cyc(), b in small_cyc(), c in small_cyc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn nonzero_elements_invert(a in small_cyc()) {
        match a.inverse() {
            Some(inv) => prop_assert!((&a * &inv).is_one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn roots_multiply_by_adding_exponents(p in -48i64..48, q in 1i64..=24, r in -48i64..48, s in 1i64..=24) {
        let x = BigRational::new(p.into(), q.into());
        let y = BigRational::new(r.into(), s.into());
        prop_assert_eq!(&cyc_from_root(&x) * &cyc_from_root(&y), cyc_from_root(&(&x + &y)));
    }

    #[test]
    fn canonical_form_is_idempotent(a in small_cyc()) {
        let again = Cyclotomic::from_terms(a.terms().map(|(e, c)| (e, c.clone())));
        prop_assert_eq!(&again, &a);
        let parsed: Cyclotomic = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn galois_conjugation_is_multiplicative(a in small_cyc(), b in small_cyc(), u in prop::sample::select(vec![-1i64, 1, 13, 17, 19, 23, 29, 31])) {
        prop_assert_eq!((&a * &b).galois(u), &a.galois(u) * &b.galois(u));
    }
}
