//! Univariate series `Σ c_r q^r` with `r ∈ (1/M)ℤ`, bounded below, with an explicit
//! truncation point beyond which nothing is known.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{Cyclotomic, UnityExponent};
use crate::Error;

/// Exact coefficient rings the series engine runs over.
pub trait Coeff: Clone + PartialEq + fmt::Display + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: &BigRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn scale(&self, r: &BigRational) -> Self;
    fn to_rational(&self) -> Option<BigRational>;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

impl Coeff for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn from_rational(r: &BigRational) -> Self {
        Cyclotomic::from_rational(r.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic::scale(self, r)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Cyclotomic::to_rational(self)
    }
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Series with exponents `k/den`. `prec = Some(p)` means every exponent `≥ p/den` is unknown;
/// `None` means the stored terms are the whole series.
#[derive(Clone, PartialEq, Debug)]
pub struct PuiseuxSeries<C: Coeff> {
    den: i64,
    terms: BTreeMap<i64, C>,
    prec: Option<i64>,
}

pub type QSeries = PuiseuxSeries<BigRational>;
pub type CycSeries = PuiseuxSeries<Cyclotomic>;

impl<C: Coeff> PuiseuxSeries<C> {
    pub fn zero() -> Self {
        PuiseuxSeries { den: 1, terms: BTreeMap::new(), prec: None }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Rational64::from_integer(0), c)
    }

    pub fn monomial(r: Rational64, c: C) -> Self {
        let den = *r.denom();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(*r.numer(), c);
        }
        PuiseuxSeries { den, terms, prec: None }
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational64, C)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (r, c) in it {
            s = s.add(&Self::monomial(r, c));
        }
        s
    }

    /// `Σ_{k≥0} c_k q^{start + k·step}` with `prec` after the last listed coefficient.
    pub fn from_coeffs(start: Rational64, step: Rational64, coeffs: &[C]) -> Self {
        let mut s = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            s = s.add(&Self::monomial(start + step * k as i64, c.clone()));
        }
        s.truncate(start + step * coeffs.len() as i64)
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    fn to_den(&self, den: i64) -> Self {
        debug_assert!(den % self.den == 0);
        let f = den / self.den;
        PuiseuxSeries {
            den,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            prec: self.prec.map(|p| p * f),
        }
    }

    /// Removes any common factor from the exponent denominator.
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let mut g = self.den;
        for k in self.terms.keys() {
            g = g.gcd(k);
        }
        if let Some(p) = self.prec {
            g = g.gcd(&p);
        }
        if g > 1 {
            self.terms = std::mem::take(&mut self.terms).into_iter().map(|(k, c)| (k / g, c)).collect();
            self.prec = self.prec.map(|p| p / g);
            self.den /= g;
        }
        self
    }

    fn exp(&self, k: i64) -> Rational64 {
        Rational64::new(k, self.den)
    }

    pub fn precision(&self) -> Option<Rational64> {
        self.prec.map(|p| self.exp(p))
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True when all known coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn valuation(&self) -> Option<Rational64> {
        self.terms.keys().next().map(|&k| self.exp(k))
    }

    pub fn leading(&self) -> Option<(Rational64, &C)> {
        self.terms.iter().next().map(|(&k, c)| (self.exp(k), c))
    }

    /// Coefficient of `q^r`, `None` if `r` lies at or past the truncation point.
    pub fn coeff(&self, r: Rational64) -> Option<C> {
        if let Some(p) = self.precision() {
            if r >= p {
                return None;
            }
        }
        let scaled = r * self.den;
        if !scaled.is_integer() {
            return Some(C::zero());
        }
        Some(self.terms.get(&scaled.to_integer()).cloned().unwrap_or_else(C::zero))
    }

    /// Like [`coeff`](Self::coeff), but absent or unknown reads as zero.
    pub fn coeff_or_zero(&self, r: Rational64) -> C {
        self.coeff(r).unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Rational64, &C)> + '_ {
        self.terms.iter().map(move |(&k, c)| (self.exp(k), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Drops every term at exponent `≥ r` and marks `r` as the truncation point.
    pub fn truncate(&self, r: Rational64) -> Self {
        let den = self.den.lcm(r.denom());
        let mut s = self.to_den(den);
        let p = (r * den).to_integer();
        let p = s.prec.map_or(p, |q| q.min(p));
        s.terms.retain(|k, _| *k < p);
        s.prec = Some(p);
        s.normalize()
    }

    /// Forgets the truncation point, treating the known terms as the whole series.
    pub fn as_exact(&self) -> Self {
        PuiseuxSeries { prec: None, ..self.clone() }
    }

    fn common(&self, o: &Self) -> (Self, Self) {
        let den = self.den.lcm(&o.den);
        (self.to_den(den), o.to_den(den))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = self.common(o);
        for (k, c) in b.terms {
            let slot = a.terms.entry(k).or_insert_with(C::zero);
            *slot = slot.add(&c);
        }
        a.prec = match (a.prec, b.prec) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        if let Some(p) = a.prec {
            a.terms.retain(|k, _| *k < p);
        }
        a.normalize()
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            den: self.den,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        PuiseuxSeries {
            den: self.den,
            terms: self.terms.iter().map(|(k, x)| (*k, x.mul(c))).collect(),
            prec: self.prec,
        }
        .normalize()
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&C::from_rational(r))
    }

    /// Valuation used for precision bookkeeping: a zero series with truncation `p` counts as `p`.
    fn low(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.common(o);
        let prec = match (a.prec, b.prec) {
            (None, None) => None,
            (Some(p), None) => b.low().map(|v| v + p),
            (None, Some(p)) => a.low().map(|v| v + p),
            (Some(p1), Some(p2)) => match (a.low(), b.low()) {
                (Some(v1), Some(v2)) => Some((v1 + p2).min(v2 + p1)),
                _ => Some(p1.min(p2)),
            },
        };
        let mut terms: BTreeMap<i64, C> = BTreeMap::new();
        for (k1, c1) in &a.terms {
            for (k2, c2) in &b.terms {
                let k = k1 + k2;
                if prec.is_some_and(|p| k >= p) {
                    continue;
                }
                let slot = terms.entry(k).or_insert_with(C::zero);
                *slot = slot.add(&c1.mul(c2));
            }
        }
        PuiseuxSeries { den: a.den, terms, prec }.normalize()
    }

    /// Multiplies by `q^r`.
    pub fn mul_q_power(&self, r: Rational64) -> Self {
        let den = self.den.lcm(r.denom());
        let s = self.to_den(den);
        let shift = (r * den).to_integer();
        PuiseuxSeries {
            den,
            terms: s.terms.into_iter().map(|(k, c)| (k + shift, c)).collect(),
            prec: s.prec.map(|p| p + shift),
        }
        .normalize()
    }

    /// Substitutes `q ↦ q^λ` for a positive rational `λ`.
    pub fn scale_exponents(&self, lambda: Rational64) -> Self {
        assert!(lambda > Rational64::from_integer(0), "exponent scaling must be positive");
        let (n, d) = (*lambda.numer(), *lambda.denom());
        PuiseuxSeries {
            den: self.den * d,
            terms: self.terms.iter().map(|(k, c)| (k * n, c.clone())).collect(),
            prec: self.prec.map(|p| p * n),
        }
        .normalize()
    }

    /// `c_r ↦ f(r, c_r)` termwise.
    pub fn map_terms<D: Coeff>(&self, f: impl Fn(Rational64, &C) -> D) -> PuiseuxSeries<D> {
        PuiseuxSeries {
            den: self.den,
            terms: self.terms.iter().map(|(&k, c)| (k, f(self.exp(k), c))).collect(),
            prec: self.prec,
        }
        .normalize()
    }

    /// `f^r` for rational `r`. The leading coefficient must be 1 unless `r` is an integer.
    /// Non-monomial series must carry a truncation point (their powers are infinite).
    pub fn pow(&self, r: Rational64) -> Result<Self, Error> {
        if r.is_integer() && *r.numer() >= 0 {
            return Ok(self.pow_nonneg(*r.numer() as u64));
        }
        let Some((&v, a0)) = self.terms.iter().next() else {
            return Err(Error::Invalid("cannot take a negative or fractional power of zero".into()));
        };
        let a0_r = if a0.is_one() {
            C::one()
        } else if r.is_integer() {
            let inv = a0.inv().ok_or_else(|| Error::Invalid("leading coefficient not invertible".into()))?;
            let mut out = C::one();
            for _ in 0..(-*r.numer()) {
                out = out.mul(&inv);
            }
            out
        } else {
            return Err(Error::Unsupported(format!("fractional power {r} of a series with leading coefficient {a0}")));
        };
        // Exponent of the leading term after raising to r.
        let lead = Rational64::new(v, self.den) * r;
        if self.terms.len() == 1 && self.prec.is_none() {
            return Ok(Self::monomial(lead, a0_r));
        }
        let p = self.prec.ok_or_else(|| {
            Error::Invalid("power of an untruncated non-monomial series is infinite; truncate first".into())
        })?;
        let n_steps = p - v;
        let a: Vec<C> = (0..n_steps).map(|k| self.terms.get(&(v + k)).cloned().unwrap_or_else(C::zero)).collect();
        let a0_inv = a[0].inv().ok_or_else(|| Error::Invalid("leading coefficient not invertible".into()))?;
        let rr = big(r);
        let one = <BigRational as One>::one();
        let mut b: Vec<C> = Vec::with_capacity(n_steps as usize);
        b.push(a0_r);
        for n in 1..n_steps {
            let mut acc = C::zero();
            for k in 1..=n {
                if a[k as usize].is_zero() {
                    continue;
                }
                let w = BigRational::from_integer(BigInt::from(k)) * (&rr + &one) - BigRational::from_integer(BigInt::from(n));
                if Zero::is_zero(&w) {
                    continue;
                }
                acc = acc.add(&a[k as usize].mul(&b[(n - k) as usize]).scale(&w));
            }
            let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
            b.push(acc.mul(&a0_inv).scale(&inv_n));
        }
        let base = PuiseuxSeries {
            den: self.den,
            terms: b.into_iter().enumerate().map(|(k, c)| (k as i64, c)).collect(),
            prec: Some(n_steps),
        }
        .normalize();
        Ok(base.mul_q_power(lead))
    }

    fn pow_nonneg(&self, e: u64) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        self.pow(Rational64::from_integer(-1))
    }

    /// True when every known coefficient is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.to_rational().is_some_and(|q| q.is_integer()))
    }
}

impl QSeries {
    pub fn to_cyclotomic(&self) -> CycSeries {
        self.map_terms(|_, c| Cyclotomic::from_rational(c.clone()))
    }

    /// Coefficient as a machine integer, for tests and reports.
    pub fn coeff_i64(&self, r: Rational64) -> Option<i64> {
        self.coeff(r).and_then(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
    }
}

impl CycSeries {
    /// `Σ c_r q^r ↦ Σ c_r e(j r) q^r`, i.e. `τ ↦ τ + j`.
    pub fn tau_shift(&self, j: i64) -> Self {
        self.map_terms(|r, c| c.mul_root(UnityExponent::from_rational(&(r * j))))
    }

    /// The rational series, if every known coefficient is rational.
    pub fn to_rational_series(&self) -> Option<QSeries> {
        if self.terms.values().any(|c| c.to_rational().is_none()) {
            return None;
        }
        Some(self.map_terms(|_, c| c.to_rational().expect("checked")))
    }
}

pub fn fmt_exponent(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl<C: Coeff> fmt::Display for PuiseuxSeries<C> {
    /// One `exponent<TAB>coefficient` row per stored term, then `O(q^p)` if truncated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, c) in self.iter() {
            writeln!(f, "{}\t{}", fmt_exponent(r), c)?;
        }
        if let Some(p) = self.precision() {
            writeln!(f, "O\t{}", fmt_exponent(p))?;
        }
        Ok(())
    }
}

/// Generalized binomial coefficient `s(s−1)…(s−k+1)/k!`.
pub fn binomial(s: &BigRational, k: u64) -> BigRational {
    let mut out = <BigRational as One>::one();
    for i in 0..k {
        out = out * (s - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    out
}

/// `(1 − x)^s = Σ_{k ≤ order} binom(s,k)(−x)^k` as a series in `x`, truncated after `x^order`.
pub fn binom_expand(s: &BigRational, order: u32) -> QSeries {
    let coeffs: Vec<BigRational> = (0..=order as u64)
        .map(|k| {
            let b = binomial(s, k);
            if k % 2 == 1 { -b } else { b }
        })
        .collect();
    QSeries::from_coeffs(Rational64::from_integer(0), Rational64::from_integer(1), &coeffs)
}

impl<C: Coeff> PuiseuxSeries<C> {
    /// Whether two series agree on every exponent both know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let limit = match (self.precision(), o.precision()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let d = self.sub(o);
        let ok = d.iter().all(|(r, c)| c.is_zero() || limit.is_some_and(|l| r >= l));
        ok
    }

    /// Largest exponent below the truncation point, if any.
    pub fn max_known_exponent(&self) -> Option<Rational64> {
        self.terms.keys().next_back().map(|&k| self.exp(k))
    }

    pub fn has_negative_rational(&self) -> bool {
        self.terms.values().any(|c| c.to_rational().is_some_and(|q| q.is_negative()))
    }
}
