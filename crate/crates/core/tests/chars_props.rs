use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use genmoon::bkm;
use genmoon::chars::{self, CheckOutcome, Moonshine, ShippedData};
use genmoon::exact::Cyclotomic;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn bq(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn verma_character_decomposes_to_itself(n in -24i64..48, d in 1i64..=12) {
        let h = r(n, d);
        let dec = chars::verma_decompose(&chars::verma_char(h, 10), 10);
        prop_assert_eq!(dec.len(), 1);
        prop_assert_eq!(dec.get(&h), Some(&bq(1)));
    }

    #[test]
    fn verma_sums_decompose(hs in prop::collection::btree_map((1i64..24, 1i64..=4), 1i64..6, 1..5)) {
        let mut ch = genmoon::fps::QSeries::zero().truncate(r(40, 1));
        let mut want = std::collections::BTreeMap::new();
        for ((n, d), m) in &hs {
            let h = r(*n, *d);
            ch = ch.add(&chars::verma_char(h, 40).scale_rational(&bq(*m)));
            *want.entry(h).or_insert_with(|| bq(0)) += bq(*m);
        }
        let got = chars::verma_decompose(&ch, 8);
        // Only exponents within 8 of their coset's minimum are reported.
        let frac = |h: &Rational64| h - h.floor();
        let low = |h: &Rational64| *want.keys().filter(|k| frac(k) == frac(h)).min().unwrap();
        let want: std::collections::BTreeMap<_, _> = want.iter().filter(|(h, _)| **h - low(h) <= r(8, 1)).map(|(h, m)| (*h, m.clone())).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn s_dual_twice_returns_the_record() {
    let db = ShippedData::load();
    for rec in &db.records {
        let (g, l) = chars::s_dual(&rec.series).unwrap();
        let (back, l2) = chars::s_dual(&g).unwrap();
        // T(−1/τ) = G(τ/L) and G(−1/τ) = B(τ/L2) give T(τ) = B(Lτ/L2).
        let a = chars::expand_eta_combination(&rec.series, 8).unwrap();
        let depth = (8 * l2 as i64 + l as i64 - 1) / l as i64;
        let b = chars::expand_eta_combination(&back, depth).unwrap().scale_exponents(r(l as i64, l2 as i64));
        assert!(a.agrees_with(&b), "{}", rec.name);
    }
}

#[test]
fn t_equivariance_all_classes() {
    // F̂_{i,j}(τ+1) = F̂_{i,i+j}(τ), composite classes included.
    let db = ShippedData::load();
    for rec in db.records.iter().filter(|r| r.order > 1) {
        let n = rec.level as i64;
        for i in 0..n {
            for j in 0..n {
                let lhs = chars::fhat(&db, rec, i, j, 2).unwrap().series.tau_shift(1);
                let rhs = chars::fhat(&db, rec, i, i + j, 2).unwrap().series;
                assert!(lhs.agrees_with(&rhs), "{} ({i},{j})", rec.name);
            }
        }
    }
}

#[test]
fn twisted_eigenspace_examples() {
    let db = ShippedData::load();
    let a = db.get("2A").unwrap();
    assert_eq!(bkm::eigenspace_mult(&db, a, 1, 1, r(1, 2)).unwrap(), Cyclotomic::from_integer(4372));
    assert_eq!(bkm::eigenspace_mult(&db, a, 1, -1, r(-1, 2)).unwrap(), Cyclotomic::from_integer(1));
    assert_eq!(bkm::eigenspace_mult(&db, a, 1, 1, r(-3, 1)).unwrap(), Cyclotomic::zero());
}

#[test]
fn root_tables_of_shipped_classes() {
    let db = ShippedData::load();
    for rec in &db.records {
        let n = rec.level as i64;
        let t = bkm::mult_table(&db, rec, 4, 2 * n).unwrap();
        assert_eq!(t.entry(0, 0), Some(&BigInt::from(2)));
        assert!(bkm::check_bkm_truncation(&t).violations.is_empty(), "{}", rec.name);
        assert_eq!(bkm::real_simple_mult(&db, rec).unwrap(), rec.fricke as i64, "{}", rec.name);
    }
    let a = db.get("2A").unwrap();
    let t = bkm::mult_table(&db, a, 1, 1).unwrap();
    assert_eq!(t.entry(1, 1), Some(&BigInt::from(4372)));
    let one = bkm::mult_table(&db, db.get("1A").unwrap(), 2, 2).unwrap();
    // N = 1: entry(m, n) = c(mn).
    assert_eq!(one.entry(2, 2), Some(&BigInt::from(20245856256u64)));
    assert_eq!(one.entry(1, 2), Some(&BigInt::from(21493760)));
}

#[test]
fn collinear_real_root_is_flagged() {
    let db = ShippedData::load();
    let mut t = bkm::mult_table(&db, db.get("1A").unwrap(), 4, 4).unwrap();
    t.entries.insert((2, -2), BigInt::from(1));
    let rep = bkm::check_bkm_truncation(&t);
    assert!(!rep.violations.is_empty());
}

#[test]
fn hypothesis_examples() {
    let db = ShippedData::load();
    for c in bkm::hypothesis_checks(&db, db.get("2B").unwrap()).unwrap() {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    let s = chars::s_transform(&db.get("2B").unwrap().series, 2).unwrap();
    assert!(s.valuation().unwrap() >= r(0, 1));
    let a = chars::s_transform(&db.get("2A").unwrap().series, 2).unwrap();
    assert_eq!(a.leading().map(|(e, c)| (e, c.clone())), Some((r(-1, 2), bq(1))));
    let f7 = chars::fhat(&db, db.get("4B").unwrap(), 7, 1, 1).unwrap().series;
    let (e, c) = f7.leading().unwrap();
    assert_eq!(e, r(-1, 8));
    assert_eq!(*c, Cyclotomic::e(1, 8));
}

#[test]
fn data_mutations_are_reported() {
    let text = ShippedData::JSON;
    let bad_level = text.replacen("\"level\": 9", "\"level\": 6", 1);
    let db = Moonshine::from_json(&bad_level).unwrap();
    let rep = chars::validate_data(&db);
    let c3 = rep.iter().find(|r| r.class == "3C").unwrap();
    assert!(c3.checks.iter().any(|(n, o)| *n == "level" && matches!(o, CheckOutcome::Fail(m) if m.starts_with("level mismatch"))));

    let bad_sum = text.replacen("\"4372\", \"96256\"", "\"4372\", \"96257\"", 1);
    let db = Moonshine::from_json(&bad_sum).unwrap();
    let rep = chars::validate_data(&db);
    let a = rep.iter().find(|r| r.class == "2A").unwrap();
    assert!(!a.passed());
    assert!(a.to_string().contains("index 3"));

    let bad_power = text.replacen("\"2\": \"2A\"", "\"2\": \"2C\"", 1);
    let rep = chars::validate_data(&Moonshine::from_json(&bad_power).unwrap());
    assert!(!rep.iter().find(|r| r.class == "4B").unwrap().passed());
    assert!(Moonshine::from_json("[{\"class\": \"1A\"}]").is_err());
}
