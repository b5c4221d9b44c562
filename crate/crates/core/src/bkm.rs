//! Root multiplicities of the Lie algebras `𝔪_g` read off `F̂`, checks of the
//! Borcherds–Kac–Moody conditions on a finite table, and the `g = 1` denominator identity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chars::{expand_eta_combination, fhat, fhat_by_cases, fhat_supported, s_transform, ClassRecord, Moonshine};
use crate::exact::{Cyclotomic, UnityExponent};
use crate::fps::CycSeries;
use crate::Error;

/// Largest `order` accepted by [`denominator_check_1a`].
pub const MAX_DENOM_ORDER: u32 = 8;

/// Components `F̂_{i,j}` for one `i` and every `j mod N`, known below `q^order`.
pub struct ComponentRow {
    pub i: i64,
    pub n: i64,
    pub series: Vec<CycSeries>,
}

impl ComponentRow {
    pub fn new(db: &Moonshine, rec: &ClassRecord, i: i64, order: i64) -> Result<Self, Error> {
        let n = rec.level as i64;
        let series = (0..n).map(|j| fhat(db, rec, i, j, order).map(|c| c.series)).collect::<Result<_, _>>()?;
        Ok(ComponentRow { i: i.rem_euclid(n), n, series })
    }

    /// `(1/N) Σ_j e(−jb/N) [q^w] F̂_{i,j}`.
    pub fn eigenspace(&self, b: i64, w: Rational64) -> Result<Cyclotomic, Error> {
        let mut acc = Cyclotomic::zero();
        for (j, s) in self.series.iter().enumerate() {
            let c = s
                .coeff(w)
                .ok_or_else(|| Error::Range(format!("weight {w} lies past the truncation point of F-hat_({}, {j})", self.i)))?;
            acc = &acc + &c.mul_root(UnityExponent::new(-(j as i64) * b, self.n));
        }
        Ok(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(self.n))))
    }
}

/// Exact eigenspace dimension of the preferred lift of `g` acting by `e(b/N)` on the weight
/// `w` part of the `g^i`-twisted module (shifted grading).
pub fn eigenspace_mult(db: &Moonshine, rec: &ClassRecord, i: i64, b: i64, w: Rational64) -> Result<Cyclotomic, Error> {
    let order = w.floor().to_integer() + 1;
    ComponentRow::new(db, rec, i, order)?.eigenspace(b, w)
}

/// A nonnegative rational integer, or a diagnostic naming the cell.
pub fn as_multiplicity(c: &Cyclotomic, a: i64, b: i64) -> Result<BigInt, Error> {
    let q = c.to_rational().ok_or_else(|| Error::Check(format!("entry ({a}, {b}) = {c} is not rational")))?;
    if !q.is_integer() {
        return Err(Error::Check(format!("entry ({a}, {b}) = {q} is not an integer")));
    }
    if q.is_negative() {
        return Err(Error::Check(format!("entry ({a}, {b}) = {q} is negative")));
    }
    Ok(q.to_integer())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootMultTable {
    pub class: String,
    pub level: i64,
    pub a_max: i64,
    pub b_max: i64,
    /// `(a, b) ↦` dimension of the `(a, b/N)` root space; `(0, 0)` is the Cartan part.
    pub entries: BTreeMap<(i64, i64), BigInt>,
}

impl RootMultTable {
    pub fn entry(&self, a: i64, b: i64) -> Option<&BigInt> {
        self.entries.get(&(a, b))
    }

    /// `−ab/N`, the norm of the degree `(a, b/N)`, up to the positive factor `2`.
    pub fn norm(&self, a: i64, b: i64) -> Rational64 {
        Rational64::new(-a * b, self.level)
    }

    pub fn rows(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> + '_ {
        self.entries.iter().map(|(&(a, b), m)| (a, b, m))
    }
}

impl fmt::Display for RootMultTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b, m) in self.rows() {
            writeln!(f, "{a}\t{b}\t{m}")?;
        }
        Ok(())
    }
}

/// `entry(a, b) = c_{a,b}(ab/N)` for `1 ≤ a ≤ a_max`, `|b| ≤ b_max`, plus `(0, 0) ↦ 2`.
pub fn mult_table(db: &Moonshine, rec: &ClassRecord, a_max: i64, b_max: i64) -> Result<RootMultTable, Error> {
    if !fhat_supported(rec) {
        return Err(Error::Unsupported(format!("class {} is not covered", rec.name)));
    }
    let n = rec.level as i64;
    let mut entries = BTreeMap::new();
    entries.insert((0, 0), BigInt::from(2));
    for a in 1..=a_max {
        let top = Rational64::new(a * b_max, n);
        let row = ComponentRow::new(db, rec, a, top.floor().to_integer() + 1)?;
        for b in -b_max..=b_max {
            let c = row.eigenspace(b, Rational64::new(a * b, n))?;
            entries.insert((a, b), as_multiplicity(&c, a, b)?);
        }
    }
    Ok(RootMultTable { class: rec.name.clone(), level: n, a_max, b_max, entries })
}

/// `c_{a,b}(w) = c_{a,b+N}(w)` and `c_{a,b}(w) = c_{a+N,b}(w)` on the table's range, with the
/// shifted index evaluated through its own `SL₂(ℤ)` representative.
pub fn period_check(db: &Moonshine, rec: &ClassRecord, a_max: i64, b_max: i64) -> Result<Vec<String>, Error> {
    let n = rec.level as i64;
    let mut bad = Vec::new();
    for a in 1..=a_max {
        let order = Rational64::new(a * b_max, n).floor().to_integer() + 1;
        let row = ComponentRow::new(db, rec, a, order)?;
        let shifted = ComponentRow { i: a, n, series: (0..n).map(|j| fhat_raw(db, rec, a + n, j + n, order)).collect::<Result<_, _>>()? };
        for b in -b_max..=b_max {
            let w = Rational64::new(a * b, n);
            if row.eigenspace(b, w)? != row.eigenspace(b + n, w)? || row.eigenspace(b, w)? != shifted.eigenspace(b, w)? {
                bad.push(format!("period violated at ({a}, {b})"));
            }
        }
    }
    Ok(bad)
}

/// `F̂` at an unreduced index pair: `T_{g^k}(γτ)` with `k = gcd(i, j)` taken in `ℤ`.
fn fhat_raw(db: &Moonshine, rec: &ClassRecord, i: i64, j: i64, order: i64) -> Result<CycSeries, Error> {
    let k = i.gcd(&j);
    let (c, d) = (i / k, j / k);
    let eg = d.extended_gcd(&c);
    let cls = db.power_class(rec, k)?;
    crate::chars::transform(&cls.series, [eg.x, -eg.y, c, d], order)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BkmReport {
    pub violations: Vec<String>,
    /// Root counts with `|α(ρ)| < 2NM` for `M = 1, 2, …`, `ρ = (2, 1)`.
    pub regular_counts: Vec<usize>,
    pub max_real_norm: Option<Rational64>,
    pub real_roots: Vec<(i64, i64)>,
}

impl BkmReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks on the computed range: finiteness, the regular-element counts, and that real
/// (positive-norm) roots have multiplicity at most one with no multiple `kα`, `k ≥ 2`, present.
pub fn check_bkm_truncation(t: &RootMultTable) -> BkmReport {
    let mut rep = BkmReport::default();
    let n = t.level;
    for m in 1..=5 {
        let bound = 2 * n * m;
        rep.regular_counts.push(
            t.rows().filter(|&(a, b, x)| (a, b) != (0, 0) && !x.is_zero() && (2 * b + a).abs() < bound).count(),
        );
    }
    if rep.regular_counts.windows(2).any(|w| w[1] < w[0]) {
        rep.violations.push(format!("regular-element counts decrease: {:?}", rep.regular_counts));
    }
    for (a, b, x) in t.rows() {
        if a * b >= 0 || x.is_zero() {
            continue;
        }
        rep.real_roots.push((a, b));
        let norm = t.norm(a, b);
        rep.max_real_norm = Some(rep.max_real_norm.map_or(norm, |m| m.max(norm)));
        if *x > BigInt::one() {
            rep.violations.push(format!("real root ({a}, {b}) has multiplicity {x} > 1"));
        }
        for k in 2.. {
            let Some(y) = t.entry(k * a, k * b) else { break };
            if !y.is_zero() {
                rep.violations.push(format!(
                    "({}, {}) = {k}·({a}, {b}) has multiplicity {y} although ({a}, {b}) is a real root",
                    k * a,
                    k * b
                ));
            }
        }
    }
    rep
}

/// Two-variable Laurent polynomial in `p, q`.
type Poly2 = BTreeMap<(i64, i64), BigInt>;

fn poly_mul(x: &Poly2, y: &Poly2, max_deg: i64) -> Poly2 {
    let mut out = Poly2::new();
    for (&(a, b), c) in x {
        for (&(a2, b2), c2) in y {
            if a + a2 + b + b2 > max_deg {
                continue;
            }
            *out.entry((a + a2, b + b2)).or_insert_with(BigInt::zero) += c * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn binom_int(c: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= c - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `(1 − p^m q^n)^e` through total degree `max_deg`, for `m + n ≥ 1`.
fn factor_power(m: i64, n: i64, e: &BigInt, max_deg: i64) -> Poly2 {
    let mut out = Poly2::new();
    out.insert((0, 0), BigInt::one());
    if e.is_zero() {
        return out;
    }
    let deg = m + n;
    if e.is_negative() {
        // (1 − x)^{−s} = Σ binom(s + k − 1, k) x^k
        let s = -e;
        for k in 1..=(max_deg / deg) as u64 {
            out.insert((m * k as i64, n * k as i64), binom_int(&(&s + BigInt::from(k) - 1), k));
        }
    } else {
        for k in 1..=(max_deg / deg) as u64 {
            let b = binom_int(e, k);
            out.insert((m * k as i64, n * k as i64), if k % 2 == 1 { -b } else { b });
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenomReport {
    pub order: u32,
    /// The exponent `c(0)` fixed by constant-term agreement.
    pub c0: BigInt,
    pub first_discrepancy: Option<((i64, i64), BigInt, BigInt)>,
}

impl DenomReport {
    pub fn equal(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// The coefficients `c(−1), c(0), c(1), …` of `J`.
pub fn j_coefficients(db: &Moonshine, count: usize) -> Result<Vec<BigInt>, Error> {
    let j = expand_eta_combination(&db.get("1A")?.series, count as i64 - 1)?;
    Ok((0..count)
        .map(|k| j.coeff_or_zero(Rational64::from_integer(k as i64 - 1)).to_integer())
        .collect())
}

/// `p^{−1} ∏_{m>0, n∈ℤ} (1 − p^m q^n)^{c(mn)}` against `J(p) − J(q)` through total degree `order`.
///
/// `c` lists `c(−1), c(0), c(1), …`; the `c(0)` entry is ignored and replaced by the value the
/// constant term forces. Only `n ≥ −1` contributes since `c(k) = 0` for `k < −1`.
pub fn denominator_check_with(c: &[BigInt], order: u32) -> Result<DenomReport, Error> {
    if order > MAX_DENOM_ORDER {
        return Err(Error::Range(format!("order {order} exceeds the cap {MAX_DENOM_ORDER}")));
    }
    let d = order as i64;
    let need = (d + 1) * (d + 1) / 4;
    if (c.len() as i64) < need + 2 {
        return Err(Error::Range(format!("need coefficients of J through q^{need}")));
    }
    let cc = |k: i64| -> BigInt { if k < -1 { BigInt::zero() } else { c[(k + 1) as usize].clone() } };
    let build = |c0: &BigInt| -> Poly2 {
        // ∏ over m ≥ 1, n ≥ 0 through degree d + 1, then times p^{−1} − q^{−1}.
        let mut prod = Poly2::new();
        prod.insert((0, 0), BigInt::one());
        for m in 1..=d + 1 {
            for n in 0..=d + 1 - m {
                let e = if m * n == 0 { c0.clone() } else { cc(m * n) };
                prod = poly_mul(&prod, &factor_power(m, n, &e, d + 1), d + 1);
            }
        }
        let mut pre = Poly2::new();
        pre.insert((-1, 0), BigInt::one());
        pre.insert((0, -1), -BigInt::one());
        poly_mul(&prod, &pre, d)
    };
    let mut rhs = Poly2::new();
    for k in -1..=d {
        let x = cc(k);
        if !x.is_zero() {
            *rhs.entry((k, 0)).or_insert_with(BigInt::zero) += &x;
            *rhs.entry((0, k)).or_insert_with(BigInt::zero) -= &x;
        }
    }
    rhs.retain(|_, c| !c.is_zero());
    // The constant term of the product side is −c(0).
    let trial = build(&BigInt::zero());
    let c0 = trial.get(&(0, 0)).cloned().unwrap_or_default() - rhs.get(&(0, 0)).cloned().unwrap_or_default();
    let lhs = build(&c0);
    let mut keys: Vec<(i64, i64)> = lhs.keys().chain(rhs.keys()).copied().collect();
    keys.sort_by_key(|&(a, b)| (a + b, -a));
    keys.dedup();
    let first_discrepancy = keys.into_iter().find_map(|k| {
        let (l, r) = (lhs.get(&k).cloned().unwrap_or_default(), rhs.get(&k).cloned().unwrap_or_default());
        (l != r).then_some((k, l, r))
    });
    Ok(DenomReport { order, c0, first_discrepancy })
}

/// The denominator identity for `J` itself.
pub fn denominator_check_1a(db: &Moonshine, order: u32) -> Result<DenomReport, Error> {
    if order > MAX_DENOM_ORDER {
        return Err(Error::Range(format!("order {order} exceeds the cap {MAX_DENOM_ORDER}")));
    }
    let d = order as usize;
    denominator_check_with(&j_coefficients(db, (d + 1) * (d + 1) / 4 + 2)?, order)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Leading-term checks of the twisted characters for one class.
pub fn hypothesis_checks(db: &Moonshine, rec: &ClassRecord) -> Result<Vec<HypCheck>, Error> {
    if !fhat_supported(rec) {
        return Err(Error::Unsupported(format!("class {} is not covered", rec.name)));
    }
    let mut out = Vec::new();
    let tw = s_transform(&rec.series, 1)?;
    let polar: Vec<(Rational64, BigRational)> = tw.iter().filter(|(r, _)| *r < Rational64::zero()).map(|(r, c)| (r, c.clone())).collect();
    if rec.fricke {
        let want = Rational64::new(-1, rec.level as i64);
        let passed = polar.len() == 1 && polar[0].0 == want && polar[0].1.is_one();
        out.push(HypCheck {
            name: "A_g polar term".into(),
            passed,
            detail: format!("polar part of T_g(-1/tau): {}", fmt_terms(&polar)),
        });
    } else {
        out.push(HypCheck {
            name: "A_g regular at 0".into(),
            passed: polar.is_empty(),
            detail: format!("polar part of T_g(-1/tau): {}", fmt_terms(&polar)),
        });
    }
    if rec.name == "4B" {
        for (i, r, ph) in expected_4b_phases() {
            let s = fhat(db, rec, i, 1, 1)?.series;
            let got = s.leading().map(|(e, c)| (e, c.as_root_of_unity()));
            let passed = got == Some((r, Some(UnityExponent::from_rational(&ph))));
            out.push(HypCheck {
                name: format!("4B F-hat_({i},1) polar phase"),
                passed,
                detail: match s.leading() {
                    Some((e, c)) => format!("leading {c} q^{e}, expected e({ph}) q^{r}"),
                    None => "no terms".into(),
                },
            });
        }
        let t = expand_eta_combination(&rec.series, 3)?.to_cyclotomic();
        for (i, sign) in [(0, false), (4, true)] {
            let f = fhat(db, rec, i, 1, 3)?.series;
            let want = if sign { t.neg() } else { t.clone() };
            out.push(HypCheck {
                name: format!("4B F-hat_({i},1) = {}T_g", if sign { "-" } else { "" }),
                passed: f.agrees_with(&want),
                detail: String::new(),
            });
        }
    } else if rec.order > 1 {
        let n = rec.level as i64;
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let a = fhat(db, rec, i, j, 2)?.series;
                let b = fhat_by_cases(db, rec, i, j, 2)?;
                if !a.agrees_with(&b) {
                    bad.push(format!("({i},{j})"));
                }
            }
        }
        out.push(HypCheck {
            name: "B_g case analysis".into(),
            passed: bad.is_empty(),
            detail: if bad.is_empty() { format!("{} components agree", n * n) } else { format!("mismatch at {}", bad.join(" ")) },
        });
    }
    Ok(out)
}

/// `(i, leading exponent, phase)` for `F̂_{i,1}` of 4B.
pub fn expected_4b_phases() -> [(i64, Rational64, Rational64); 6] {
    let q = Rational64::new;
    [
        (1, q(-1, 8), q(-1, 8)),
        (3, q(-1, 8), q(5, 8)),
        (5, q(-1, 8), q(3, 8)),
        (7, q(-1, 8), q(1, 8)),
        (2, q(-1, 2), q(1, 4)),
        (6, q(-1, 2), q(3, 4)),
    ]
}

fn fmt_terms(t: &[(Rational64, BigRational)]) -> String {
    if t.is_empty() {
        return "none".into();
    }
    t.iter().map(|(r, c)| format!("{c} q^{r}")).collect::<Vec<_>>().join(" + ")
}

/// `mult(1, −1)` for a class, straight from the table builder.
pub fn real_simple_mult(db: &Moonshine, rec: &ClassRecord) -> Result<i64, Error> {
    let t = mult_table(db, rec, 1, 1)?;
    Ok(t.entry(1, -1).and_then(|x| x.to_i64()).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::ShippedData;

    #[test]
    fn eigenspace_examples() {
        let db = ShippedData::load();
        let r = db.get("2A").unwrap();
        assert_eq!(eigenspace_mult(&db, r, 1, 1, Rational64::new(1, 2)).unwrap(), Cyclotomic::from_integer(4372));
        assert_eq!(eigenspace_mult(&db, r, 1, -1, Rational64::new(-1, 2)).unwrap(), Cyclotomic::from_integer(1));
        assert_eq!(eigenspace_mult(&db, r, 1, 0, Rational64::new(-3, 2)).unwrap(), Cyclotomic::zero());
    }

    #[test]
    fn tables() {
        let db = ShippedData::load();
        let t = mult_table(&db, db.get("1A").unwrap(), 1, 1).unwrap();
        assert_eq!(t.entry(1, 1), Some(&BigInt::from(196884)));
        assert_eq!(t.entry(0, 0), Some(&BigInt::from(2)));
        let t = mult_table(&db, db.get("2A").unwrap(), 2, 2).unwrap();
        assert_eq!(t.entry(1, -1), Some(&BigInt::from(1)));
        assert_eq!(t.entry(1, 1), Some(&BigInt::from(4372)));
        assert!(check_bkm_truncation(&t).passed());
        assert_eq!(real_simple_mult(&db, db.get("2B").unwrap()).unwrap(), 0);
    }

    #[test]
    fn corrupted_table_flagged() {
        let db = ShippedData::load();
        let mut t = mult_table(&db, db.get("1A").unwrap(), 4, 4).unwrap();
        let rep = check_bkm_truncation(&t);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.real_roots, vec![(1, -1)]);
        t.entries.insert((2, -2), BigInt::one());
        assert!(!check_bkm_truncation(&t).passed());
    }

    #[test]
    fn denominator_identity() {
        let db = ShippedData::load();
        for d in [2, 4] {
            let r = denominator_check_1a(&db, d).unwrap();
            assert!(r.equal(), "{r:?}");
            assert_eq!(r.c0, BigInt::zero());
        }
        let mut c = j_coefficients(&db, 12).unwrap();
        c[2] += 1;
        let r = denominator_check_with(&c, 4).unwrap();
        assert!(!r.equal());
        assert!(denominator_check_1a(&db, 9).is_err());
    }

    #[test]
    fn hypotheses() {
        let db = ShippedData::load();
        for name in ["2A", "2B", "3C", "4B"] {
            for h in hypothesis_checks(&db, db.get(name).unwrap()).unwrap() {
                assert!(h.passed, "{name}: {h:?}");
            }
        }
    }
}
