//! q-series characters: eta/E4 quotients, their transforms under `SL₂(ℤ)`,
//! McKay–Thompson records, the components `F̂_{i,j}`, and Verma/Heisenberg characters.
//!
//! Moonshine-facing series use the shifted grading `Tr q^{L(0)−1}`. `order` arguments
//! of those functions are absolute: the result is known for every exponent `< order`.

mod data;

pub use data::{validate_data, CheckOutcome, ClassRecord, Moonshine, RecordReport, ShippedData};

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::exact::arith::mod_inverse;
use crate::exact::{Cyclotomic, UnityExponent};
use crate::fps::{Coeff, CycSeries, QSeries};
use crate::lattice::Sign;
use crate::Error;

/// Largest exponent denominator the transforms may produce.
pub const MAX_DENOMINATOR: u64 = 1152;

fn r64(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

fn bigq(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ceil_i64(r: Rational64) -> i64 {
    r.ceil().to_integer()
}

/// `∏_{n≥1}(1 − q^n)`, known below `q^steps`.
pub fn euler_product(steps: i64) -> QSeries {
    let len = steps.max(0) as usize;
    let mut c = vec![BigInt::zero(); len];
    if len > 0 {
        c[0] = BigInt::one();
    }
    for n in 1..len {
        for k in (n..len).rev() {
            let t = c[k - n].clone();
            c[k] -= t;
        }
    }
    let coeffs: Vec<BigRational> = c.into_iter().map(BigRational::from_integer).collect();
    QSeries::from_coeffs(r64(0), r64(1), &coeffs)
}

fn sigma3(n: i64) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(3)).sum()
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ`, known below `q^steps`.
pub fn e4_series(steps: i64) -> QSeries {
    let coeffs: Vec<BigRational> = (0..steps.max(0))
        .map(|n| if n == 0 { bigq(1) } else { BigRational::from_integer(sigma3(n) * 240) })
        .collect();
    QSeries::from_coeffs(r64(0), r64(1), &coeffs)
}

fn euler_power(r: i64, steps: i64) -> Result<QSeries, Error> {
    euler_product(steps).pow(r64(r))
}

fn e4_power(k: i64, steps: i64) -> Result<QSeries, Error> {
    e4_series(steps).pow(r64(k))
}

/// `η(τ) = q^{1/24} ∏(1 − qⁱ)` with every coefficient through `q^{1/24 + order}`.
pub fn eta_series(order: u32) -> QSeries {
    euler_product(order as i64 + 1).mul_q_power(Rational64::new(1, 24))
}

/// `coef · ∏ η(dτ)^{r_d} · ∏ E₄(dτ)^{k_d}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaTerm {
    pub coef: BigRational,
    pub factors: BTreeMap<u64, i64>,
    pub e4: BTreeMap<u64, i64>,
}

impl EtaTerm {
    pub fn new(coef: BigRational, factors: &[(u64, i64)]) -> Self {
        EtaTerm { coef, factors: factors.iter().copied().collect(), e4: BTreeMap::new() }
    }

    pub fn with_e4(mut self, e4: &[(u64, i64)]) -> Self {
        self.e4 = e4.iter().copied().collect();
        self
    }

    /// Twice the modular weight: `Σ r_d + 8 Σ k_d`.
    pub fn double_weight(&self) -> i64 {
        self.factors.values().sum::<i64>() + 8 * self.e4.values().sum::<i64>()
    }

    /// Exponent of the leading power of `q`.
    pub fn leading_exponent(&self) -> Rational64 {
        self.factors.iter().map(|(&d, &r)| Rational64::new(r * d as i64, 24)).sum()
    }

    fn levels(&self) -> BTreeSet<u64> {
        self.factors.keys().chain(self.e4.keys()).copied().collect()
    }
}

/// `Σ terms + add_const`, each term of weight zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaCombination {
    pub terms: Vec<EtaTerm>,
    pub add_const: BigRational,
}

impl EtaCombination {
    pub fn constant(c: BigRational) -> Self {
        EtaCombination { terms: Vec::new(), add_const: c }
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (k, t) in self.terms.iter().enumerate() {
            if t.levels().contains(&0) {
                return Err(Error::Invalid(format!("term {k}: eta argument dτ needs d ≥ 1")));
            }
            if t.double_weight() != 0 {
                return Err(Error::Invalid(format!(
                    "term {k} has weight {}/2, not 0",
                    t.double_weight()
                )));
            }
        }
        Ok(())
    }

    /// lcm of every `d` that occurs.
    pub fn lcm_level(&self) -> u64 {
        self.terms.iter().flat_map(|t| t.levels()).fold(1, |a, d| a.lcm(&d))
    }
}

fn expand_term(t: &EtaTerm, prec: Rational64) -> Result<QSeries, Error> {
    let v = t.leading_exponent();
    let rel = prec - v;
    if rel <= r64(0) || Zero::is_zero(&t.coef) {
        return Ok(QSeries::zero().truncate(prec));
    }
    let steps = ceil_i64(rel);
    let mut base = QSeries::one();
    for (&d, &r) in &t.factors {
        let d = d as i64;
        base = base.mul(&euler_power(r, ceil_i64(Rational64::new(steps, d)))?.scale_exponents(r64(d)));
    }
    for (&d, &k) in &t.e4 {
        let d = d as i64;
        base = base.mul(&e4_power(k, ceil_i64(Rational64::new(steps, d)))?.scale_exponents(r64(d)));
    }
    Ok(base.truncate(r64(steps)).mul_q_power(v).scale(&t.coef).truncate(prec))
}

/// The q-expansion, known below `q^order`.
pub fn expand_eta_combination(e: &EtaCombination, order: i64) -> Result<QSeries, Error> {
    e.validate()?;
    let p = r64(order);
    let mut out = QSeries::constant(e.add_const.clone()).truncate(p);
    for t in &e.terms {
        out = out.add(&expand_term(t, p)?);
    }
    Ok(out)
}

/// Exact square root of a nonnegative rational, if it is one.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| BigRational::new(sn, sd))
}

fn int_pow(base: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// `T(−1/τ) = G(τ/L)` with `G` again an eta/E4 combination. Returns `(G, L)`.
///
/// `η(−d/τ)^r ↦ d^{−r/2} η(τ/d)^r` and `E₄(−d/τ)^k ↦ d^{−4k} E₄(τ/d)^k`; the powers of `τ`
/// cancel by weight zero, and `η(τ/d) = η((L/d)·τ/L)`.
pub fn s_dual(e: &EtaCombination) -> Result<(EtaCombination, u64), Error> {
    e.validate()?;
    let l = e.lcm_level();
    if l > MAX_DENOMINATOR {
        return Err(Error::Range(format!("exponent denominator {l} exceeds the cap {MAX_DENOMINATOR}")));
    }
    let mut terms = Vec::with_capacity(e.terms.len());
    for (k, t) in e.terms.iter().enumerate() {
        let mut sq = bigq(1);
        for (&d, &r) in &t.factors {
            sq *= int_pow(d, -r);
        }
        for (&d, &kk) in &t.e4 {
            sq *= int_pow(d, -8 * kk);
        }
        let pref = rational_sqrt(&sq).ok_or_else(|| {
            Error::Data(format!("term {k}: S-transform prefactor sqrt({sq}) is irrational"))
        })?;
        terms.push(EtaTerm {
            coef: &t.coef * pref,
            factors: t.factors.iter().map(|(&d, &r)| (l / d, r)).collect(),
            e4: t.e4.iter().map(|(&d, &kk)| (l / d, kk)).collect(),
        });
    }
    Ok((EtaCombination { terms, add_const: e.add_const.clone() }, l))
}

/// `T(−1/τ)`, known below `q^order`.
pub fn s_transform(e: &EtaCombination, order: i64) -> Result<QSeries, Error> {
    let (g, l) = s_dual(e)?;
    Ok(expand_eta_combination(&g, order * l as i64)?.scale_exponents(Rational64::new(1, l as i64)))
}

/// `f(τ + j)`.
pub fn tau_shift(f: &CycSeries, j: i64) -> CycSeries {
    f.tau_shift(j)
}

/// Dedekind sum `s(h, k) = Σ_{r=1}^{k−1} (r/k)((hr/k))` for `k ≥ 1`.
pub fn dedekind_sum(h: i64, k: i64) -> Rational64 {
    assert!(k >= 1);
    let mut s = r64(0);
    for r in 1..k {
        let m = (h * r).rem_euclid(k);
        if m != 0 {
            s += Rational64::new(r, k) * (Rational64::new(m, k) - Rational64::new(1, 2));
        }
    }
    s
}

/// The multiplier `ε` in `η(γτ) = ε·(−i(cτ+d))^{1/2}·η(τ)`, as an exponent, for `c > 0`.
pub fn eta_multiplier(g: [i64; 4]) -> UnityExponent {
    let [a, _, c, d] = g;
    assert!(c > 0, "multiplier formula needs c > 0");
    let x = (Rational64::new(a + d, 12 * c) - dedekind_sum(d, c)) / 2;
    UnityExponent::from_rational(&x)
}

/// `M = γ'·[[A, B], [0, D]]` with `γ' ∈ SL₂(ℤ)`, `AD = det M`, `0 ≤ B < D`.
fn hermite_split(m: [i64; 4]) -> ([i64; 4], i64, i64, i64) {
    let [p, q, r, s] = m;
    let det = p * s - q * r;
    let a = p.gcd(&r);
    let (g0, g2) = (p / a, r / a);
    let eg = g0.extended_gcd(&g2);
    // g0·x − (−y)·g2 = 1 with x = eg.x, y = eg.y.
    let (x, y) = (-eg.y, eg.x);
    let d = det / a;
    let b0 = y * q - x * s;
    let k = Integer::div_floor(&b0, &d);
    let b = b0 - k * d;
    let gp = [g0, x + k * g0, g2, y + k * g2];
    (gp, a, b, d)
}

/// Normalizes `γ` up to sign so that `c > 0`, or `c = 0` and `d = 1`.
pub fn normalize_gamma(g: [i64; 4]) -> Result<[i64; 4], Error> {
    let [a, b, c, d] = g;
    if a * d - b * c != 1 {
        return Err(Error::Invalid(format!("matrix {g:?} does not have determinant 1")));
    }
    Ok(if c < 0 || (c == 0 && d < 0) { [-a, -b, -c, -d] } else { g })
}

/// Coefficients of `E(y)^r` (or `E₄(y)^k`) with `y = e(B/D)·q^{A/D}`.
fn substituted(base: QSeries, a: i64, b: i64, d: i64) -> CycSeries {
    base.to_cyclotomic()
        .map_terms(|n, c| c.mul_root(UnityExponent::from_rational(&(n * Rational64::new(b, d)))))
        .scale_exponents(Rational64::new(a, d))
}

/// `T(γτ)` for `γ ∈ SL₂(ℤ)`, known below `q^order`.
///
/// For each argument `dτ`, `d·γτ = γ'((Aτ+B)/D)`; the multiplier and the automorphy factor
/// of `γ'` give `ε(γ')^r D^{−r/2}` (resp. `D^{−4k}`), and `(cτ+d)`-powers cancel by weight zero.
pub fn transform(e: &EtaCombination, gamma: [i64; 4], order: i64) -> Result<CycSeries, Error> {
    e.validate()?;
    let g = normalize_gamma(gamma)?;
    let [ga, gb, gc, gd] = g;
    let p = r64(order);
    if gc == 0 {
        return Ok(expand_eta_combination(e, order)?.to_cyclotomic().tau_shift(gb));
    }
    let mut out = CycSeries::constant(Cyclotomic::from_rational(e.add_const.clone())).truncate(p);
    for (k, t) in e.terms.iter().enumerate() {
        let mut split = BTreeMap::new();
        for lv in t.levels() {
            let l = lv as i64;
            let (gp, a, b, d) = hermite_split([l * ga, l * gb, gc, gd]);
            if gp[2] * a != gc || gp[2] * b + gp[3] * d != gd {
                return Err(Error::Check(format!("cusp decomposition failed for level {l}")));
            }
            split.insert(lv, (gp, a, b, d));
        }
        let mut phase = UnityExponent::ZERO;
        let mut sq = bigq(1);
        let mut v = r64(0);
        for (&lv, &r) in &t.factors {
            let (gp, a, b, d) = split[&lv];
            phase = phase + eta_multiplier(gp).times(r) + UnityExponent::new(r * b, 24 * d);
            sq *= int_pow(d as u64, -r);
            v += Rational64::new(r * a, 24 * d);
        }
        for (&lv, &kk) in &t.e4 {
            let (_, _, _, d) = split[&lv];
            sq *= int_pow(d as u64, -8 * kk);
        }
        let pref = rational_sqrt(&sq)
            .ok_or_else(|| Error::Data(format!("term {k}: cusp prefactor sqrt({sq}) is irrational")))?;
        let rel = p - v;
        if rel <= r64(0) || Zero::is_zero(&t.coef) {
            continue;
        }
        let mut base = CycSeries::one();
        for (&lv, &r) in &t.factors {
            let (_, a, b, d) = split[&lv];
            let steps = ceil_i64(rel * Rational64::new(d, a));
            base = base.mul(&substituted(euler_power(r, steps)?, a, b, d));
        }
        for (&lv, &kk) in &t.e4 {
            let (_, a, b, d) = split[&lv];
            let steps = ceil_i64(rel * Rational64::new(d, a));
            base = base.mul(&substituted(e4_power(kk, steps)?, a, b, d));
        }
        let c = Cyclotomic::root(phase).scale(&(&t.coef * pref));
        out = out.add(&base.truncate(rel).mul_q_power(v).scale(&c).truncate(p));
    }
    Ok(out)
}

/// The roles a character series can play.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    McKayThompson,
    Twisted,
    Component { i: u64, j: u64 },
    Module,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacterSeries {
    pub role: Role,
    pub series: CycSeries,
}

/// Whether `fhat` handles the class: trivial, prime order, or 4B.
pub fn fhat_supported(rec: &ClassRecord) -> bool {
    let f = crate::exact::arith::factor(rec.order);
    rec.order == 1 || (f.len() == 1 && f[0].1 == 1) || rec.name == "4B"
}

fn check_supported(rec: &ClassRecord) -> Result<(), Error> {
    if fhat_supported(rec) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "F-hat for class {} of composite order {} is not covered",
            rec.name, rec.order
        )))
    }
}

/// `F̂_{i,j}(τ) = T_{g^k}(γτ)` where `k = gcd(i, j)` and `γ` has bottom row `(i, j)/k`.
pub fn fhat(db: &Moonshine, rec: &ClassRecord, i: i64, j: i64, order: i64) -> Result<CharacterSeries, Error> {
    check_supported(rec)?;
    let n = rec.level as i64;
    let (i, j) = (i.rem_euclid(n), j.rem_euclid(n));
    let role = Role::Component { i: i as u64, j: j as u64 };
    if i == 0 && j == 0 {
        let one = db.power_class(rec, 0)?;
        return Ok(CharacterSeries { role, series: expand_eta_combination(&one.series, order)?.to_cyclotomic() });
    }
    let k = i.gcd(&j);
    let (c, d) = (i / k, j / k);
    let eg = d.extended_gcd(&c);
    // a·d − b·c = 1
    let (a, b) = (eg.x, -eg.y);
    let cls = db.power_class(rec, k)?;
    Ok(CharacterSeries { role, series: transform(&cls.series, [a, b, c, d], order)? })
}

/// The case analysis route: `T_g(−1/(τ + jī))` for `i` a unit mod `N`, and
/// `e(±jk/h)·T_{g^j}(τ)` for `i = kn`. Other indices are not covered by it.
pub fn fhat_by_cases(db: &Moonshine, rec: &ClassRecord, i: i64, j: i64, order: i64) -> Result<CycSeries, Error> {
    check_supported(rec)?;
    let nn = rec.level as i64;
    let n = rec.order as i64;
    let (i, j) = (i.rem_euclid(nn), j.rem_euclid(nn));
    if let Some(ib) = mod_inverse(i, nn) {
        return Ok(s_transform(&rec.series, order)?.to_cyclotomic().tau_shift((j * ib).rem_euclid(nn)));
    }
    if i % n == 0 {
        let k = i / n;
        let eps = match rec.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        let phase = UnityExponent::new(eps * j * k, rec.h as i64);
        let cls = db.power_class(rec, j)?;
        return Ok(expand_eta_combination(&cls.series, order)?.to_cyclotomic().scale(&Cyclotomic::root(phase)));
    }
    Err(Error::Unsupported(format!(
        "index ({i}, {j}) of {} is neither a unit nor a multiple of {n}",
        rec.name
    )))
}

/// `q^{λ²/2}·η(τ)^{−dim V}` through `order` steps past the leading term.
pub fn heisenberg_char(lambda_norm: Rational64, dim_v: u32, order: u32) -> Result<QSeries, Error> {
    let lead = lambda_norm / 2 - Rational64::new(dim_v as i64, 24);
    Ok(euler_power(-(dim_v as i64), order as i64 + 1)?.mul_q_power(lead))
}

/// `q^h ∏(1 − qⁿ)^{−1}` through `q^{h+order}`.
pub fn verma_char(h: Rational64, order: u32) -> QSeries {
    euler_power(-1, order as i64 + 1).expect("Euler product has leading coefficient 1").mul_q_power(h)
}

/// Number of partitions of `m`, by direct enumeration (an oracle independent of the product).
pub fn partitions(m: u64) -> u64 {
    fn go(m: u64, max: u64) -> u64 {
        if m == 0 {
            return 1;
        }
        (1..=max.min(m)).map(|p| go(m - p, p)).sum()
    }
    go(m, m)
}

/// Multiplicities `m(h)` with `char = Σ m(h)·q^h/∏(1 − qⁿ)`, through `order` steps past the
/// lowest exponent of each class of exponents mod 1. Zero multiplicities are omitted.
pub fn verma_decompose(ch: &QSeries, order: u32) -> BTreeMap<Rational64, BigRational> {
    let mut cosets: BTreeMap<Rational64, Vec<(Rational64, BigRational)>> = BTreeMap::new();
    for (r, c) in ch.iter() {
        let frac = r - r.floor();
        cosets.entry(frac).or_default().push((r, c.clone()));
    }
    let mut out = BTreeMap::new();
    for (_, terms) in cosets {
        let low = terms[0].0;
        let mut limit = low + r64(order as i64 + 1);
        if let Some(p) = ch.precision() {
            limit = limit.min(p);
        }
        let sub = QSeries::from_terms(terms.into_iter().filter(|(r, _)| *r < limit)).truncate(limit);
        let steps = ceil_i64(limit - low);
        let prod = sub.mul(&euler_product(steps));
        for (r, c) in prod.iter() {
            if !Coeff::is_zero(c) {
                out.insert(r, c.clone());
            }
        }
    }
    out
}

/// Lowest weights of a shifted character: exponent `+ 1`.
pub fn lowest_weights(decomp: &BTreeMap<Rational64, BigRational>) -> Vec<Rational64> {
    decomp.keys().map(|r| r + r64(1)).collect()
}

/// Which momentum the covariant count is taken at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Momentum {
    Norm(Rational64),
    Zero,
}

fn known_coeff(ch: &QSeries, r: Rational64) -> Result<BigRational, Error> {
    ch.coeff(r).ok_or_else(|| Error::Range(format!("coefficient of q^{r} lies past the truncation point")))
}

/// Covariant dimension of `Quant(V ⊗ π_p)` from `Tr q^{L(0)}|V`: the coefficient of
/// `q^{1−(p,p)}` for `p ≠ 0`, and `2·[q⁰] + [q¹]` at zero momentum.
pub fn quant_dim(ch_v: &QSeries, p: Momentum) -> Result<BigRational, Error> {
    match p {
        Momentum::Norm(n) => known_coeff(ch_v, r64(1) - n),
        Momentum::Zero => Ok(known_coeff(ch_v, r64(0))? * bigq(2) + known_coeff(ch_v, r64(1))?),
    }
}

/// Euler characteristic of the relative complex at momentum norm `p_norm ≠ 0`, computed
/// from the shifted character by multiplying in the momentum-module oscillators
/// `q^{p_norm}∏(1−qⁿ)^{−2}` and the ghost factor `∏(1−qⁿ)²` and reading off `q⁰`.
pub fn brst_euler(ch_shifted: &QSeries, p_norm: Rational64) -> Result<BigRational, Error> {
    let target = -p_norm;
    let low = ch_shifted.valuation().unwrap_or(target).min(target);
    let steps = ceil_i64(target - low) + 1;
    let momentum = euler_power(-2, steps)?.mul_q_power(p_norm);
    let ghosts = euler_power(2, steps)?;
    let total = ch_shifted.mul(&momentum).mul(&ghosts);
    known_coeff(&total, r64(0))
}

/// Whether the covariant count on `q·ch_shifted` agrees with the BRST Euler characteristic.
pub fn brst_euler_check(ch_shifted: &QSeries, p_norm: Rational64) -> Result<bool, Error> {
    let unshifted = ch_shifted.mul_q_power(r64(1));
    Ok(quant_dim(&unshifted, Momentum::Norm(p_norm))? == brst_euler(ch_shifted, p_norm)?)
}

#[cfg(test)]
mod tests;
