//! The rank-2 Lorentzian lattices `L_{n|h±}`, their discriminant groups and the
//! quadratic forms `ρ_{n|h±}`.
//!
//! Lattice pairs `(a, b) ∈ Z²` name the coset `(a, bh ∓ a) + L_{n|h±}` of `L^∨/L`. The map
//! `Z² → L^∨/L` is onto with kernel `R = ⟨(0, n), (n, ±2n/h)⟩`, and the group is presented
//! as `Z/(nh/(h,2)) × Z/(n(h,2)/h)` through two explicit generators of `Z²/R`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::abgrp::{is_quadratic, FiniteAbelianGroup, QuadraticFunction};
use crate::exact::UnityExponent;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1` for `+`, `−1` for `−`.
    pub fn eps(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `n|h±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NHType {
    pub n: u64,
    pub h: u64,
    pub sign: Sign,
}

impl NHType {
    pub fn new(n: u64, h: u64, sign: Sign) -> Result<Self, Error> {
        if n == 0 || h == 0 {
            return Err(Error::Invalid("n and h must be positive".into()));
        }
        if n % h != 0 {
            return Err(Error::Invalid(format!("h = {h} does not divide n = {n}")));
        }
        Ok(NHType { n, h, sign })
    }

    /// The level `N = nh`.
    pub fn level(&self) -> u64 {
        self.n * self.h
    }

    /// Orders of the two cyclic factors.
    pub fn factor_orders(&self) -> (u64, u64) {
        let g = self.h.gcd(&2);
        (self.n * self.h / g, self.n * g / self.h)
    }
}

impl fmt::Display for NHType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}{}", self.n, self.h, self.sign.symbol())
    }
}

impl FromStr for NHType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || Error::Parse(format!("expected a type like \"4|2+\", got {s:?}"));
        let (body, sign) = match t.chars().last() {
            Some('+') => (&t[..t.len() - 1], Sign::Plus),
            Some('-') => (&t[..t.len() - 1], Sign::Minus),
            _ => return Err(bad()),
        };
        let (n, h) = body.split_once('|').ok_or_else(bad)?;
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let h: u64 = h.trim().parse().map_err(|_| bad())?;
        NHType::new(n, h, sign)
    }
}

/// `L^∨_{n|h±}/L_{n|h±}` with `ρ` and `ρ̄`.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub t: NHType,
    pub group: FiniteAbelianGroup,
    /// Canonical lattice pair `(a, b)` for each group element, by rank.
    pub pairs: Vec<(i64, i64)>,
    pub rho: QuadraticFunction,
    pub rho_bar: QuadraticFunction,
}

fn generator2(t: &NHType) -> (i64, i64) {
    let h = t.h as i64;
    let e = t.sign.eps();
    if h <= 2 {
        (0, 1)
    } else if h % 2 == 1 {
        (-e * h * (h - 1) / 2, 1)
    } else {
        (e * h / 2, 1)
    }
}

/// Canonical representative of `(a, b) + R`.
pub fn reduce_pair(t: &NHType, (a, b): (i64, i64)) -> (i64, i64) {
    let n = t.n as i64;
    let step = t.sign.eps() * 2 * n / t.h as i64;
    let k = Integer::div_floor(&a, &n);
    let a2 = a - k * n;
    let b2 = (b - k * step).rem_euclid(n);
    (a2, b2)
}

/// `ρ(a,b) = e((abh ∓ a²)/nh)`.
pub fn rho_value(t: &NHType, (a, b): (i64, i64)) -> UnityExponent {
    let h = t.h as i64;
    let nh = (t.n * t.h) as i64;
    let num = a * b * h - t.sign.eps() * a * a;
    UnityExponent::new(num.rem_euclid(nh), nh)
}

/// The ambient vector `(x, y) = (a, bh ∓ a)` of the coset.
pub fn section(t: &NHType, (a, b): (i64, i64)) -> (i64, i64) {
    (a, b * t.h as i64 - t.sign.eps() * a)
}

pub fn build_discriminant(t: NHType) -> Result<DiscriminantForm, Error> {
    let t = NHType::new(t.n, t.h, t.sign)?;
    let (f1, f2) = t.factor_orders();
    let group = FiniteAbelianGroup::new(vec![f1, f2])?;
    let g1 = (1i64, 0i64);
    let g2 = generator2(&t);
    if reduce_pair(&t, (f1 as i64 * g1.0, 0)) != (0, 0) || reduce_pair(&t, (f2 as i64 * g2.0, f2 as i64 * g2.1)) != (0, 0) {
        return Err(Error::Check(format!("generators of {t} do not have the expected orders")));
    }
    let mut pairs = Vec::with_capacity(group.order());
    for r in 0..group.order() {
        let e = group.unrank(r);
        let (u, v) = (e.0[0] as i64, e.0[1] as i64);
        pairs.push(reduce_pair(&t, (u * g1.0 + v * g2.0, u * g1.1 + v * g2.1)));
    }
    let distinct: BTreeSet<_> = pairs.iter().collect();
    if distinct.len() != (t.n * t.n) as usize {
        return Err(Error::Check(format!("coordinate map for {t} is not a bijection onto L^v/L")));
    }
    let rho = QuadraticFunction::from_table(group.clone(), pairs.iter().map(|p| rho_value(&t, *p)).collect())?;
    let rho_bar = rho.inverse();
    Ok(DiscriminantForm { t, group, pairs, rho, rho_bar })
}

impl DiscriminantForm {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Conformal weight `−xy/nh mod 1` of the Heisenberg module on the coset, read from the
    /// ambient norm `(x, y) ↦ −xy/nh`.
    pub fn weight(&self, rank: usize) -> UnityExponent {
        let (x, y) = section(&self.t, self.pairs[rank]);
        let nh = self.t.level() as i64;
        UnityExponent::new((-x * y).rem_euclid(nh), nh)
    }

    /// `e(weight) = ρ̄` at every element.
    pub fn weights_match_rho_bar(&self) -> bool {
        (0..self.order()).all(|r| self.weight(r) == self.rho_bar.at(r))
    }

    /// The polarization of `ρ` against `e((xy' + x'y)/nh)` computed from the sections.
    pub fn bilinear_matches_ambient(&self) -> bool {
        let b = self.rho.associated_bilinear();
        let nh = self.t.level() as i64;
        (0..self.order()).all(|i| {
            (0..self.order()).all(|j| {
                let (x, y) = section(&self.t, self.pairs[i]);
                let (x2, y2) = section(&self.t, self.pairs[j]);
                b.at(i, j) == UnityExponent::new((x * y2 + x2 * y).rem_euclid(nh), nh)
            })
        })
    }

    pub fn rho_is_quadratic(&self) -> bool {
        is_quadratic(&self.rho)
    }

    pub fn rho_times_bar_trivial(&self) -> bool {
        self.rho.product(&self.rho_bar).map(|q| q.is_trivial()).unwrap_or(false)
    }
}

/// For `h = 1`: `ρ_{n|1±}(a, b) = e(a(b ∓ a)/n)`, i.e. `ρ` is the hyperbolic form `e(ab/n)`
/// composed with the shear `(a,b) ↦ (a, b ∓ a)`, and likewise for `ρ̄`.
/// For `h = 2`: `ρ_{n|2+}(a, a + b) = ρ_{n|2−}(a, b)`.
pub fn shear_check(t: NHType) -> Result<bool, Error> {
    let n = t.n as i64;
    match t.h {
        1 => {
            let d = build_discriminant(t)?;
            let e = t.sign.eps();
            Ok(d.pairs.iter().enumerate().all(|(r, &(a, b))| {
                let hyp = UnityExponent::new((a * (b - e * a)).rem_euclid(n), n);
                d.rho.at(r) == hyp && d.rho_bar.at(r) == -hyp
            }))
        }
        2 => {
            let plus = NHType { sign: Sign::Plus, ..t };
            let minus = NHType { sign: Sign::Minus, ..t };
            let dm = build_discriminant(minus)?;
            Ok(dm.pairs.iter().all(|&(a, b)| rho_value(&plus, reduce_pair(&plus, (a, a + b))) == rho_value(&minus, (a, b))))
        }
        h => Err(Error::Invalid(format!("shear identities are stated for h in {{1, 2}}, got h = {h}"))),
    }
}

/// Whether the pointwise product of two quadratic functions on one group is quadratic.
pub fn type_sum_check(q1: &QuadraticFunction, q2: &QuadraticFunction) -> Result<bool, Error> {
    Ok(is_quadratic(&q1.product(q2)?))
}
