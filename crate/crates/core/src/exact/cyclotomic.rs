use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{factor, lcm_u64};
use super::UnityExponent;

/// An element of a cyclotomic field, `Σ c_k e(k/N)`.
///
/// `N` is always the conductor of the element: the smallest `N` (never `2 mod 4`)
/// with the element in `Q(ζ_N)`. The coefficients are taken with respect to a fixed
/// basis of `Q(ζ_N)` (see [`Cyclotomic::is_basis_exponent`]), making `==`
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u64,
    terms: BTreeMap<u64, BigRational>,
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { n: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_integer(x: i64) -> Self {
        Self::from_rational(big(x))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        Cyclotomic { n: 1, terms }
    }

    /// `e(num/den)`.
    pub fn e(num: i64, den: i64) -> Self {
        Self::root(UnityExponent::new(num, den))
    }

    pub fn root(r: UnityExponent) -> Self {
        let n = r.den() as u64;
        let mut v = vec![BigRational::zero(); n as usize];
        v[r.num() as usize] = BigRational::one();
        Self::from_dense(n, v)
    }

    /// Builds `Σ c·e(r)` from arbitrary (possibly repeated) exponents.
    pub fn from_terms<I: IntoIterator<Item = (UnityExponent, BigRational)>>(it: I) -> Self {
        let items: Vec<_> = it.into_iter().collect();
        let mut l = 1u64;
        for (r, _) in &items {
            l = lcm_u64(l, r.den() as u64);
        }
        let mut v = vec![BigRational::zero(); l as usize];
        for (r, c) in items {
            let k = r.num() as u64 * (l / r.den() as u64);
            v[k as usize] += c;
        }
        Self::from_dense(l, v)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    /// Basis terms as `(e-exponent, coefficient)`, ascending by exponent.
    pub fn terms(&self) -> impl Iterator<Item = (UnityExponent, &BigRational)> + '_ {
        let n = self.n as i64;
        self.terms.iter().map(move |(k, c)| (UnityExponent::new(*k as i64, n), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.n == 1 {
            Some(self.terms.get(&0).cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Whether `e(k/n)` belongs to the canonical basis of `Q(ζ_n)`.
    ///
    /// For each prime power `p^a ∥ n` write `k mod p^a = j0 + j1·p^(a-1)`. For odd
    /// `p` the term is excluded when `j1 = 0`; for `p = 2` it is excluded when `j1 = 1`.
    pub fn is_basis_exponent(n: u64, k: u64) -> bool {
        factor(n).iter().all(|&(p, a)| !nonbasis_at(k, p, a))
    }

    fn to_dense(&self, l: u64) -> Vec<BigRational> {
        debug_assert!(l % self.n == 0);
        let s = l / self.n;
        let mut v = vec![BigRational::zero(); l as usize];
        for (k, c) in &self.terms {
            v[(k * s) as usize] = c.clone();
        }
        v
    }

    fn from_dense(mut l: u64, mut v: Vec<BigRational>) -> Self {
        if l % 4 == 2 {
            let (m, w) = halve(l, &v);
            l = m;
            v = w;
        }
        reduce(l, &mut v);
        'outer: loop {
            if l == 1 {
                break;
            }
            for (p, a) in factor(l) {
                if let Some(w) = descend(l, p, a, &v) {
                    l /= p;
                    v = w;
                    if l % 4 == 2 {
                        let (m, w) = halve(l, &v);
                        l = m;
                        v = w;
                    }
                    reduce(l, &mut v);
                    continue 'outer;
                }
            }
            break;
        }
        let terms = v
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c))
            .collect();
        Cyclotomic { n: l, terms }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    /// `self · e(r)`.
    pub fn mul_root(&self, r: UnityExponent) -> Self {
        if r.is_zero() {
            return self.clone();
        }
        let l = lcm_u64(self.n, r.den() as u64);
        let s = l / self.n;
        let shift = r.num() as u64 * (l / r.den() as u64);
        let mut v = vec![BigRational::zero(); l as usize];
        for (k, c) in &self.terms {
            v[((k * s + shift) % l) as usize] = c.clone();
        }
        Self::from_dense(l, v)
    }

    /// The Galois automorphism `e(r) ↦ e(u r)`; `u` must be prime to the conductor.
    pub fn galois(&self, u: i64) -> Self {
        let n = self.n as i64;
        let u = u.mod_floor(&n);
        assert!(u.gcd(&n) == 1, "Galois exponent {u} not prime to conductor {n}");
        let mut v = vec![BigRational::zero(); self.n as usize];
        for (k, c) in &self.terms {
            v[((*k as i64 * u) % n) as usize] = c.clone();
        }
        Self::from_dense(self.n, v)
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let mut acc = Self::one();
        for u in units(self.n) {
            acc = &acc * &self.galois(u as i64);
        }
        acc.to_rational().expect("norm is rational")
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().map(|(k, c)| (*k, c.clone())).unwrap();
            let r = UnityExponent::new(-(k as i64), self.n as i64);
            return Some(Self::root(r).scale(&c.recip()));
        }
        let mut rest = Self::one();
        for u in units(self.n).into_iter().filter(|&u| u != 1) {
            rest = &rest * &self.galois(u as i64);
        }
        let nm = (&rest * self).to_rational().expect("norm is rational");
        Some(rest.scale(&nm.recip()))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse().expect("inverse of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Returns `r` with `self = e(r)` when `self` is a root of unity.
    pub fn as_root_of_unity(&self) -> Option<UnityExponent> {
        if self.is_zero() {
            return None;
        }
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            let r = UnityExponent::new(*k as i64, self.n as i64);
            if c.is_one() {
                return Some(r);
            }
            if (-c).is_one() {
                return Some(r + UnityExponent::new(1, 2));
            }
        }
        if !(self * &self.conj()).is_one() {
            return None;
        }
        let m = 2 * self.n as i64;
        for j in 0..m {
            let r = UnityExponent::new(j, m);
            if conductor_of_root(r) != self.n {
                continue;
            }
            if &Self::root(r) == self {
                return Some(r);
            }
        }
        None
    }

    /// Floating-point value, for display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in &self.terms {
            let x = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * (*k as f64) / (self.n as f64);
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }
}

fn nonbasis_at(k: u64, p: u64, a: u32) -> bool {
    let pa = p.pow(a);
    let top = pa / p;
    let j1 = (k % pa) / top;
    if p == 2 {
        j1 == 1
    } else {
        j1 == 0
    }
}

fn reduce(l: u64, v: &mut [BigRational]) {
    for (p, a) in factor(l) {
        let step = l / p;
        for k in 0..l {
            if v[k as usize].is_zero() || !nonbasis_at(k, p, a) {
                continue;
            }
            let c = std::mem::replace(&mut v[k as usize], BigRational::zero());
            for t in 1..p {
                let idx = ((k + t * step) % l) as usize;
                v[idx] -= &c;
            }
        }
    }
}

/// `Q(ζ_{2m}) = Q(ζ_m)` for odd `m`.
fn halve(l: u64, v: &[BigRational]) -> (u64, Vec<BigRational>) {
    let m = l / 2;
    let mut w = vec![BigRational::zero(); m as usize];
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = k as u64;
        if k % 2 == 0 {
            w[(k / 2) as usize] += c;
        } else {
            w[(((k + m) / 2) % m) as usize] -= c;
        }
    }
    (m, w)
}

/// If the reduced vector lies in `Q(ζ_{l/p})`, returns it rewritten there.
fn descend(l: u64, p: u64, a: u32, v: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = l / p;
    if a >= 2 {
        if v.iter().enumerate().any(|(k, c)| !c.is_zero() && k as u64 % p != 0) {
            return None;
        }
        let mut w = vec![BigRational::zero(); m as usize];
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                w[k / p as usize] = c.clone();
            }
        }
        return Some(w);
    }
    if p == 2 {
        return None;
    }
    // p ∥ l, p odd: every basis term has nonzero p-component; the subfield is
    // spanned by the class sums over those components.
    let pinv = (p as i64).extended_gcd(&(m as i64)).x.mod_floor(&(m as i64)) as u64;
    let mut w = vec![BigRational::zero(); m as usize];
    for cls in 0..m {
        let mut first: Option<&BigRational> = None;
        for k in (cls..l).step_by(m as usize) {
            if k % p == 0 {
                continue;
            }
            let c = &v[k as usize];
            match first {
                None => first = Some(c),
                Some(f) if f != c => return None,
                _ => {}
            }
        }
        let c = first.unwrap();
        if !c.is_zero() {
            let kp = if m == 1 { 0 } else { (cls * pinv) % m };
            w[kp as usize] = -c.clone();
        }
    }
    Some(w)
}

fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&u| u.gcd(&n) == 1).collect()
}

/// Conductor of `e(r)`: its order, halved when that is `2 mod 4`.
pub fn conductor_of_root(r: UnityExponent) -> u64 {
    let d = r.den() as u64;
    if d % 4 == 2 {
        d / 2
    } else {
        d
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if r.is_zero() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "e({})", r)?;
            } else {
                write!(f, "{}*e({})", a, r)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({})", self)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.n == 1 && o.n == 1 {
            return Cyclotomic::from_rational(&self.terms[&0] + &o.terms[&0]);
        }
        let l = lcm_u64(self.n, o.n);
        let mut v = self.to_dense(l);
        let s = l / o.n;
        for (k, c) in &o.terms {
            v[(k * s) as usize] += c;
        }
        Cyclotomic::from_dense(l, v)
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || o.is_zero() {
            return Cyclotomic::zero();
        }
        if self.n == 1 {
            return o.scale(&self.terms[&0]);
        }
        if o.n == 1 {
            return self.scale(&o.terms[&0]);
        }
        let l = lcm_u64(self.n, o.n);
        let (s1, s2) = (l / self.n, l / o.n);
        let mut v = vec![BigRational::zero(); l as usize];
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                v[((k1 * s1 + k2 * s2) % l) as usize] += c1 * c2;
            }
        }
        Cyclotomic::from_dense(l, v)
    }
}

impl<'a> Neg for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self + &(-o)
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, o: Cyclotomic) -> Cyclotomic {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, o: &Cyclotomic) -> Cyclotomic {
                (&self).$m(o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, o: &Cyclotomic) {
        *self = &*self + o;
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, o: &Cyclotomic) {
        *self = &*self - o;
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, o: &Cyclotomic) {
        *self = &*self * o;
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::one()
    }
}

impl From<BigRational> for Cyclotomic {
    fn from(q: BigRational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl From<i64> for Cyclotomic {
    fn from(x: i64) -> Self {
        Cyclotomic::from_integer(x)
    }
}

impl From<UnityExponent> for Cyclotomic {
    fn from(r: UnityExponent) -> Self {
        Cyclotomic::root(r)
    }
}
