use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use genmoon::fps::{binom_expand, embed_pair, taylor_shift, PairFrame, QSeries};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A series with a few fractional exponents, truncated at a point above all of them.
fn series() -> impl Strategy<Value = QSeries> {
    let term = (-6i64..12, 1i64..=3, -20i64..=20);
    (prop::collection::vec(term, 1..6), 4i64..10).prop_map(|(ts, cut)| {
        QSeries::from_terms(ts.into_iter().map(|(n, d, c)| (Rational64::new(n, d), q(c, 1)))).truncate(Rational64::from_integer(cut))
    })
}

fn exponent() -> impl Strategy<Value = BigRational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        prop_assert_eq!(a.mul(&b).precision(), b.mul(&a).precision());
        prop_assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
    }

    #[test]
    fn product_distributes(a in series(), b in series(), c in series()) {
        prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn binomial_series_are_inverse(n in -12i64..=12, d in 1i64..=5, order in 1u32..12) {
        let s = q(n, d);
        let prod = binom_expand(&s, order).mul(&binom_expand(&-s.clone(), order));
        prop_assert!(prod.agrees_with(&QSeries::one()));
        prop_assert_eq!(prod.precision(), Some(Rational64::from_integer(order as i64 + 1)));
    }

    #[test]
    fn integer_binomials_terminate(n in 0i64..8) {
        // (1 − x)^n is a polynomial: nothing survives past x^n.
        let s = binom_expand(&q(n, 1), 12);
        prop_assert!(s.iter().all(|(e, _)| e <= Rational64::from_integer(n)));
    }

    #[test]
    fn taylor_shift_round_trips(a in exponent(), b in exponent(), c in exponent(), order in 2i64..6) {
        let f = embed_pair(&a, &b, &c, PairFrame::ZZmW, order).unwrap();
        let g = taylor_shift(&f).unwrap();
        prop_assert_eq!(g.frame, PairFrame::WZmW);
        let back = taylor_shift(&g).unwrap();
        prop_assert!(back.agrees_with(&f), "{}\n{}", f, back);
    }

    #[test]
    fn taylor_shift_matches_direct_embedding(a in exponent(), b in exponent(), c in exponent(), order in 2i64..6) {
        let direct = embed_pair(&a, &b, &c, PairFrame::WZmW, order).unwrap();
        let shifted = taylor_shift(&embed_pair(&a, &b, &c, PairFrame::ZZmW, order).unwrap()).unwrap();
        prop_assert!(shifted.agrees_with(&direct), "{}\n{}", direct, shifted);
    }

    #[test]
    fn negative_powers_invert(a in series()) {
        prop_assume!(a.leading().is_some());
        let inv = a.pow(Rational64::from_integer(-1)).unwrap();
        prop_assert!(a.mul(&inv).agrees_with(&QSeries::one()));
    }
}

#[test]
fn shift_refuses_frames_without_finite_sums() {
    let f = embed_pair(&q(1, 2), &q(0, 1), &q(1, 3), PairFrame::ZW, 3).unwrap();
    assert!(taylor_shift(&f).is_err());
}
