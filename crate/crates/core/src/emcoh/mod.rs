//! The abelian (Eilenberg–Mac Lane) cochain complex of `K(A,2)` in low degrees.
//!
//! All values are roots of unity and are stored additively as [`UnityExponent`]s,
//! so products of values are sums of exponents.

pub mod smith;

use std::fmt::Write as _;

use num_integer::Integer;
use rand::Rng;

use crate::abgrp::{AddTable, FiniteAbelianGroup, QuadraticFunction};
use crate::exact::{parse_rational, Cyclotomic, UnityExponent};
use crate::Error;

use smith::{lex_min, solve_mod, ModMatrix};

/// `φ: A → C^×`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain1 {
    pub group: FiniteAbelianGroup,
    pub phi: Vec<UnityExponent>,
}

/// `f: A × A → C^×`, indexed by `rank(i)·|A| + rank(j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain2 {
    pub group: FiniteAbelianGroup,
    pub f: Vec<UnityExponent>,
}

/// `(F, Ω)` with `F: A³ → C^×` and `Ω: A² → C^×`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianCocycle3 {
    pub group: FiniteAbelianGroup,
    pub f3: Vec<UnityExponent>,
    pub omega: Vec<UnityExponent>,
}

impl Cochain1 {
    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Cochain1 { group: group.clone(), phi: vec![UnityExponent::ZERO; group.order()] }
    }
}

impl Cochain2 {
    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        let n = group.order();
        Cochain2 { group: group.clone(), f: vec![UnityExponent::ZERO; n * n] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> UnityExponent {
        self.f[i * self.group.order() + j]
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|i| self.at(0, i).is_zero() && self.at(i, 0).is_zero())
    }

    /// Uniform random cochain with values in `μ_m`; normalized when asked.
    pub fn random<R: Rng>(group: &FiniteAbelianGroup, m: i64, normalized: bool, rng: &mut R) -> Self {
        let n = group.order();
        let f = (0..n * n)
            .map(|idx| {
                if normalized && (idx / n == 0 || idx % n == 0) {
                    UnityExponent::ZERO
                } else {
                    UnityExponent::new(rng.gen_range(0..m), m)
                }
            })
            .collect();
        Cochain2 { group: group.clone(), f }
    }

    pub fn inverse(&self) -> Self {
        Cochain2 { group: self.group.clone(), f: self.f.iter().map(|x| -*x).collect() }
    }
}

impl AbelianCocycle3 {
    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        let n = group.order();
        AbelianCocycle3 {
            group: group.clone(),
            f3: vec![UnityExponent::ZERO; n * n * n],
            omega: vec![UnityExponent::ZERO; n * n],
        }
    }

    #[inline]
    pub fn f(&self, i: usize, j: usize, k: usize) -> UnityExponent {
        let n = self.group.order();
        self.f3[(i * n + j) * n + k]
    }

    #[inline]
    pub fn om(&self, i: usize, j: usize) -> UnityExponent {
        self.omega[i * self.group.order() + j]
    }

    pub fn is_trivial(&self) -> bool {
        self.f3.iter().chain(&self.omega).all(|x| x.is_zero())
    }

    /// The cocycle on `Z/2` with `F ≡ 1` and `Ω(i,j) = (-1)^{ij}`.
    pub fn super_sign() -> Self {
        let a = FiniteAbelianGroup::cyclic(2);
        let mut c = Self::trivial(&a);
        c.omega[3] = UnityExponent::new(1, 2);
        c
    }

    /// `F` is 1 whenever an argument is 0, and `Ω(0, i) = Ω(i, 0) = 1`.
    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        (0..n).all(|i| {
            self.om(0, i).is_zero()
                && self.om(i, 0).is_zero()
                && (0..n).all(|j| self.f(0, i, j).is_zero() && self.f(i, 0, j).is_zero() && self.f(i, j, 0).is_zero())
        })
    }

    /// Least common multiple of the orders of all values.
    pub fn value_order(&self) -> i64 {
        self.f3.iter().chain(&self.omega).fold(1i64, |acc, v| acc.lcm(&v.den()))
    }

    pub fn inverse(&self) -> Self {
        AbelianCocycle3 {
            group: self.group.clone(),
            f3: self.f3.iter().map(|x| -*x).collect(),
            omega: self.omega.iter().map(|x| -*x).collect(),
        }
    }
}

/// `(d¹φ)(i,j) = φ(j) φ(i+j)^{-1} φ(i)`.
pub fn d1(phi: &Cochain1) -> Cochain2 {
    let t = phi.group.add_table();
    let n = t.len();
    let mut f = vec![UnityExponent::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            f[i * n + j] = phi.phi[j] - phi.phi[t.add(i, j)] + phi.phi[i];
        }
    }
    Cochain2 { group: phi.group.clone(), f }
}

/// `F(i,j,k) = f(j,k) f(i+j,k)^{-1} f(i,j+k) f(i,j)^{-1}` and `Ω(i,j) = f(i,j)/f(j,i)`.
pub fn d2(f: &Cochain2) -> AbelianCocycle3 {
    let t = f.group.add_table();
    let n = t.len();
    let mut f3 = vec![UnityExponent::ZERO; n * n * n];
    let mut omega = vec![UnityExponent::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let ij = t.add(i, j);
            for k in 0..n {
                f3[(i * n + j) * n + k] = f.at(j, k) - f.at(ij, k) + f.at(i, t.add(j, k)) - f.at(i, j);
            }
            omega[i * n + j] = f.at(i, j) - f.at(j, i);
        }
    }
    AbelianCocycle3 { group: f.group.clone(), f3, omega }
}

/// Which identity fails first, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleViolation {
    Pentagon([usize; 4]),
    Hexagon1([usize; 3]),
    Hexagon2([usize; 3]),
}

pub fn cocycle_violation(c: &AbelianCocycle3) -> Option<CocycleViolation> {
    let t = c.group.add_table();
    let n = t.len();
    for i in 0..n {
        for j in 0..n {
            let ij = t.add(i, j);
            for k in 0..n {
                let jk = t.add(j, k);
                for l in 0..n {
                    let lhs = c.f(i, j, k) + c.f(i, jk, l) + c.f(j, k, l);
                    let rhs = c.f(ij, k, l) + c.f(i, j, t.add(k, l));
                    if lhs != rhs {
                        return Some(CocycleViolation::Pentagon([i, j, k, l]));
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let h1l = -c.f(i, j, k) + c.om(i, t.add(j, k)) - c.f(j, k, i);
                let h1r = c.om(i, j) - c.f(j, i, k) + c.om(i, k);
                if h1l != h1r {
                    return Some(CocycleViolation::Hexagon1([i, j, k]));
                }
                let h2l = c.f(i, j, k) + c.om(t.add(i, j), k) + c.f(k, i, j);
                let h2r = c.om(j, k) + c.f(i, k, j) + c.om(i, k);
                if h2l != h2r {
                    return Some(CocycleViolation::Hexagon2([i, j, k]));
                }
            }
        }
    }
    None
}

/// Pentagon and both hexagons, checked exhaustively.
pub fn is_abelian_cocycle(c: &AbelianCocycle3) -> bool {
    cocycle_violation(c).is_none()
}

/// `Q(i) = Ω(i,i)`.
pub fn trace(c: &AbelianCocycle3) -> Result<QuadraticFunction, Error> {
    if let Some(v) = cocycle_violation(c) {
        return Err(Error::Check(format!("not an abelian 3-cocycle: {v:?}")));
    }
    Ok(trace_unchecked(c))
}

fn trace_unchecked(c: &AbelianCocycle3) -> QuadraticFunction {
    let n = c.group.order();
    QuadraticFunction::from_table(c.group.clone(), (0..n).map(|i| c.om(i, i)).collect())
        .expect("sizes agree")
}

/// `d²(η)·c`. The cochain must be normalized.
pub fn act_cochain(eta: &Cochain2, c: &AbelianCocycle3) -> Result<AbelianCocycle3, Error> {
    if eta.group != c.group {
        return Err(Error::Invalid("cochain and cocycle live on different groups".into()));
    }
    if !eta.is_normalized() {
        return Err(Error::Invalid("cochain is not normalized".into()));
    }
    Ok(pointwise(&d2(eta), c))
}

fn pointwise(a: &AbelianCocycle3, b: &AbelianCocycle3) -> AbelianCocycle3 {
    AbelianCocycle3 {
        group: a.group.clone(),
        f3: a.f3.iter().zip(&b.f3).map(|(x, y)| *x + *y).collect(),
        omega: a.omega.iter().zip(&b.omega).map(|(x, y)| *x + *y).collect(),
    }
}

/// A normalized `λ` with `d²(λ)·c` trivial, or `None` when the trace of `c` is nontrivial.
/// `c` must be normalized: `d²` of a normalized cochain always is.
///
/// Among the solutions with values in `μ_M`, the lexicographically smallest exponent
/// vector (in rank order of `(i,j)`) is returned. `M` starts at the lcm of the value
/// orders and is raised by the group exponent if the system has no solution there.
pub fn trivialize(c: &AbelianCocycle3) -> Result<Option<Cochain2>, Error> {
    if !c.is_normalized() {
        return Err(Error::Invalid("cocycle is not normalized; no normalized 2-cochain can trivialize it".into()));
    }
    let q = trace(c)?;
    if !q.is_trivial() {
        return Ok(None);
    }
    let t = c.group.add_table();
    let base = c.value_order().max(1);
    let mut m = base;
    for _ in 0..4 {
        if let Some(lambda) = solve_at(c, &t, m) {
            let check = act_cochain(&lambda, c)?;
            if check.is_trivial() {
                return Ok(Some(lambda));
            }
            return Err(Error::Check("solver returned a non-trivializing cochain".into()));
        }
        m *= c.group.exponent().max(2) as i64;
    }
    Err(Error::Check(format!("no trivializing cochain with values of order dividing {m}")))
}

fn scaled(v: UnityExponent, m: i64) -> i64 {
    debug_assert!(m % v.den() == 0);
    v.num() * (m / v.den())
}

fn solve_at(c: &AbelianCocycle3, t: &AddTable, m: i64) -> Option<Cochain2> {
    let n = t.len();
    let vars = n * n;
    let var = |i: usize, j: usize| i * n + j;
    let rows = n * n * n + n * n + 2 * n;
    let mut a = ModMatrix::zeros(rows, vars, m);
    let mut b = vec![0i64; rows];
    let mut r = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                a.add_to(r, var(j, k), 1);
                a.add_to(r, var(t.add(i, j), k), -1);
                a.add_to(r, var(i, t.add(j, k)), 1);
                a.add_to(r, var(i, j), -1);
                b[r] = -scaled(c.f(i, j, k), m);
                r += 1;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            a.add_to(r, var(i, j), 1);
            a.add_to(r, var(j, i), -1);
            b[r] = -scaled(c.om(i, j), m);
            r += 1;
        }
    }
    for i in 0..n {
        a.add_to(r, var(0, i), 1);
        r += 1;
        a.add_to(r, var(i, 0), 1);
        r += 1;
    }
    let set = solve_mod(&a, &b)?;
    let x = lex_min(&set);
    Some(Cochain2 {
        group: c.group.clone(),
        f: x.into_iter().map(|v| UnityExponent::new(v, m)).collect(),
    })
}

/// `Q(i) = e(k_i)` for every `i`.
pub fn evenness_check(q: &QuadraticFunction, weights: &[num_rational::Rational64]) -> bool {
    q.values().len() == weights.len()
        && q.values().iter().zip(weights).all(|(v, w)| *v == UnityExponent::from_rational(w))
}

// ---- file format -------------------------------------------------------------

fn fmt_coords(a: &FiniteAbelianGroup, r: usize) -> String {
    a.fmt_element(&a.unrank(r))
}

fn fmt_value(v: UnityExponent) -> String {
    Cyclotomic::root(v).to_string()
}

/// Header `group n1,...` followed by `i|j<TAB>value` rows (all pairs).
pub fn write_cochain2(f: &Cochain2) -> String {
    let n = f.group.order();
    let mut s = format!("group {}\n", f.group);
    for i in 0..n {
        for j in 0..n {
            let _ = writeln!(s, "{}|{}\t{}", fmt_coords(&f.group, i), fmt_coords(&f.group, j), fmt_value(f.at(i, j)));
        }
    }
    s
}

pub fn write_cochain1(f: &Cochain1) -> String {
    let mut s = format!("group {}\n", f.group);
    for (i, v) in f.phi.iter().enumerate() {
        let _ = writeln!(s, "{}\t{}", fmt_coords(&f.group, i), fmt_value(*v));
    }
    s
}

/// Writes `F` rows (`i|j|k`) followed by `Ω` rows (`i|j`).
pub fn write_cocycle(c: &AbelianCocycle3) -> String {
    let n = c.group.order();
    let a = &c.group;
    let mut s = format!("group {}\n", a);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let _ = writeln!(s, "{}|{}|{}\t{}", fmt_coords(a, i), fmt_coords(a, j), fmt_coords(a, k), fmt_value(c.f(i, j, k)));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let _ = writeln!(s, "{}|{}\t{}", fmt_coords(a, i), fmt_coords(a, j), fmt_value(c.om(i, j)));
        }
    }
    s
}

pub fn write_quadratic(q: &QuadraticFunction) -> String {
    let a = q.group();
    let mut s = format!("group {}\n", a);
    for (i, v) in q.values().iter().enumerate() {
        let _ = writeln!(s, "{}\t{}", fmt_coords(a, i), fmt_value(*v));
    }
    s
}

/// Rows of a table file: group, then `(keys, value)` per line. Missing entries are 1.
struct TableFile {
    group: FiniteAbelianGroup,
    rows: Vec<(Vec<usize>, UnityExponent)>,
}

fn parse_value(s: &str) -> Result<UnityExponent, Error> {
    let c: Cyclotomic = s.trim().parse().map_err(|e: crate::exact::ParseError| Error::Parse(e.to_string()))?;
    c.as_root_of_unity().ok_or_else(|| Error::Invalid(format!("value {s:?} is not a root of unity")))
}

fn parse_table(text: &str) -> Result<TableFile, Error> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty table file".into()))?;
    let spec = header
        .strip_prefix("group")
        .ok_or_else(|| Error::Parse(format!("expected 'group n1,...' header, got {header:?}")))?;
    let group = FiniteAbelianGroup::parse(spec.trim())?;
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        let (keys, val) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("line {}: expected '<keys><TAB><value>'", ln + 2)))?;
        let ks = keys
            .split('|')
            .map(|k| group.parse_element(k).map(|e| group.rank(&e)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((ks, parse_value(val)?));
    }
    Ok(TableFile { group, rows })
}

pub fn read_cochain1(text: &str) -> Result<Cochain1, Error> {
    let t = parse_table(text)?;
    let mut c = Cochain1::trivial(&t.group);
    for (k, v) in t.rows {
        match k.as_slice() {
            [i] => c.phi[*i] = v,
            _ => return Err(Error::Parse("1-cochain rows take one key".into())),
        }
    }
    Ok(c)
}

pub fn read_cochain2(text: &str) -> Result<Cochain2, Error> {
    let t = parse_table(text)?;
    let n = t.group.order();
    let mut c = Cochain2::trivial(&t.group);
    for (k, v) in t.rows {
        match k.as_slice() {
            [i, j] => c.f[i * n + j] = v,
            _ => return Err(Error::Parse("2-cochain rows take two keys".into())),
        }
    }
    Ok(c)
}

/// Three-key rows fill `F`, two-key rows fill `Ω`.
pub fn read_cocycle(text: &str) -> Result<AbelianCocycle3, Error> {
    let t = parse_table(text)?;
    let n = t.group.order();
    let mut c = AbelianCocycle3::trivial(&t.group);
    for (k, v) in t.rows {
        match k.as_slice() {
            [i, j, l] => c.f3[(i * n + j) * n + l] = v,
            [i, j] => c.omega[i * n + j] = v,
            _ => return Err(Error::Parse("cocycle rows take two or three keys".into())),
        }
    }
    Ok(c)
}

/// Weights file rows `coords<TAB>rational`.
pub fn read_weights(a: &FiniteAbelianGroup, text: &str) -> Result<Vec<num_rational::Rational64>, Error> {
    let mut w = vec![num_rational::Rational64::from_integer(0); a.order()];
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with("group")) {
        let (k, v) = line.split_once('\t').ok_or_else(|| Error::Parse(format!("bad weight row {line:?}")))?;
        let e = a.parse_element(k)?;
        let q = parse_rational(v).map_err(|e| Error::Parse(e.to_string()))?;
        let r = crate::exact::UnityExponent::from_big(&q);
        w[a.rank(&e)] = num_rational::Rational64::new(r.num(), r.den());
    }
    Ok(w)
}
