//! Expansion of `z^a w^b t^c (z−w)^d (z−t)^f (w−t)^g` along chains of conventional
//! embeddings, and the commuting-diagram checks built on it.
//!
//! A space is described by its levels, biggest first. A level is either one coordinate
//! (a Laurent variable) or a block of two coordinates inside which every fundamental
//! coordinate of their span may stay unexpanded. An arrow rewrites every unexpanded power
//! `c^s` whose coordinate is not allowed in the target: `c = lead + rest` with `lead` the
//! component in the biggest level where `c` has one, giving `lead^s (1 + rest/lead)^s`.
//! When `lead` is the negative of a coordinate the phase comes from the convention table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::puiseux::binomial;
use crate::exact::{fmt_rational, Cyclotomic, UnityExponent};
use crate::Error;

/// The six fundamental coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Z,
    W,
    T,
    ZW,
    ZT,
    WT,
}

pub const ALL_COORDS: [Coord; 6] = [Coord::Z, Coord::W, Coord::T, Coord::ZW, Coord::ZT, Coord::WT];

type Lin = [i64; 3];

impl Coord {
    pub fn form(self) -> Lin {
        match self {
            Coord::Z => [1, 0, 0],
            Coord::W => [0, 1, 0],
            Coord::T => [0, 0, 1],
            Coord::ZW => [1, -1, 0],
            Coord::ZT => [1, 0, -1],
            Coord::WT => [0, 1, -1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::Z => "z",
            Coord::W => "w",
            Coord::T => "t",
            Coord::ZW => "z-w",
            Coord::ZT => "z-t",
            Coord::WT => "w-t",
        }
    }

    fn from_form(f: Lin) -> Option<Coord> {
        ALL_COORDS.into_iter().find(|c| c.form() == f)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "z" => Ok(Coord::Z),
            "w" => Ok(Coord::W),
            "t" => Ok(Coord::T),
            "z-w" => Ok(Coord::ZW),
            "z-t" => Ok(Coord::ZT),
            "w-t" => Ok(Coord::WT),
            "w-z" | "t-z" | "t-w" | "-z" | "-w" | "-t" => Err(Error::Invalid(format!(
                "coordinate {t:?} is not used; rewrite it as e(s/2) times the opposite coordinate"
            ))),
            _ => Err(Error::Parse(format!("unknown coordinate {s:?}"))),
        }
    }
}

fn sub(a: Lin, b: Lin) -> Lin {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: Lin, k: i64) -> Lin {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn add(a: Lin, b: Lin) -> Lin {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn det3(m: [Lin; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Integer coordinates of `v` in the basis `b` (which must be unimodular over the forms used).
fn decompose(v: Lin, b: [Lin; 3]) -> Result<[i64; 3], Error> {
    // Columns are basis vectors: solve Σ x_i b_i = v by Cramer.
    let col = |m: [Lin; 3]| -> [Lin; 3] {
        [[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]]
    };
    let d = det3(col(b));
    if d == 0 {
        return Err(Error::Invalid("coordinates are not algebraically independent".into()));
    }
    let mut out = [0i64; 3];
    for i in 0..3 {
        let mut m = b;
        m[i] = v;
        let n = det3(col(m));
        if n % d != 0 {
            return Err(Error::Unsupported("non-integral change of coordinates".into()));
        }
        out[i] = n / d;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Single(Coord),
    Block(Coord, Coord),
}

impl Level {
    fn basis(self) -> Vec<Coord> {
        match self {
            Level::Single(c) => vec![c],
            Level::Block(a, b) => vec![a, b],
        }
    }

    /// Coordinates that may remain unexpanded at this level.
    fn allowed(self) -> Vec<Coord> {
        match self {
            Level::Single(c) => vec![c],
            Level::Block(a, b) => {
                let (fa, fb) = (a.form(), b.form());
                ALL_COORDS
                    .into_iter()
                    .filter(|c| {
                        let f = c.form();
                        // f, fa, fb linearly dependent.
                        det3([f, fa, fb]) == 0
                    })
                    .collect()
            }
        }
    }
}

/// A space in one of the commuting diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub name: &'static str,
    pub levels: Vec<Level>,
}

impl Space {
    fn basis(&self) -> [Lin; 3] {
        let v: Vec<Lin> = self.levels.iter().flat_map(|l| l.basis()).map(Coord::form).collect();
        [v[0], v[1], v[2]]
    }

    pub fn is_full(&self) -> bool {
        self.levels.len() == 3
    }

    fn final_coords(&self) -> Option<[Coord; 3]> {
        match self.levels.as_slice() {
            [Level::Single(a), Level::Single(b), Level::Single(c)] => Some([*a, *b, *c]),
            _ => None,
        }
    }
}

/// Convention switches; the default is the documented table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conventions {
    /// Expand `(w−t)^s` in the `(z−w)`-first space with `e(+s/2)` instead of `e(−s/2)`.
    pub flip_wt_over_zw: bool,
}

/// Phase exponent `κ` with `c^s = e(κ s) b^s (1 − rest/b)^s` when `c = −b + rest`.
fn negative_lead_phase(c: Coord, b: Coord, conv: Conventions) -> Result<BigRational, Error> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    match (c, b) {
        (Coord::ZW, Coord::W) | (Coord::ZT, Coord::T) | (Coord::WT, Coord::T) => Ok(half),
        (Coord::WT, Coord::ZW) => Ok(if conv.flip_wt_over_zw { half } else { -half }),
        (Coord::ZW, Coord::WT) => Ok(half),
        _ => Err(Error::Unsupported(format!("no convention expands {c} with leading term -({b})"))),
    }
}

/// `(1 + num/den)^s` with `num`, `den` linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SeriesFactor {
    num: Lin,
    den: Lin,
    s: BigRational,
}

/// `e(phase) · Π c^{s_c} · Π (1 + num/den)^s`.
#[derive(Clone, Debug)]
struct State {
    phase: UnityExponent,
    bare: BTreeMap<Coord, BigRational>,
    series: Vec<SeriesFactor>,
}

impl State {
    fn source(exps: &[BigRational; 6]) -> Self {
        let mut bare = BTreeMap::new();
        for (c, s) in ALL_COORDS.into_iter().zip(exps) {
            if !s.is_zero() {
                bare.insert(c, s.clone());
            }
        }
        State { phase: UnityExponent::ZERO, bare, series: Vec::new() }
    }

    fn apply(&self, target: &Space, conv: Conventions) -> Result<State, Error> {
        let basis = target.basis();
        let mut out = State { phase: self.phase, bare: BTreeMap::new(), series: self.series.clone() };
        for (&c, s) in &self.bare {
            let x = decompose(c.form(), basis)?;
            let mut pos = 0;
            let mut lead: Option<(Level, Lin)> = None;
            for lv in &target.levels {
                let n = lv.basis().len();
                let mut comp = [0i64; 3];
                for (k, bc) in lv.basis().into_iter().enumerate() {
                    comp = add(comp, scale(bc.form(), x[pos + k]));
                }
                pos += n;
                if comp != [0, 0, 0] {
                    lead = Some((*lv, comp));
                    break;
                }
            }
            let (lv, lform) = lead.expect("nonzero coordinate has a leading component");
            let rest = sub(c.form(), lform);
            let allowed = lv.allowed();
            let (b, negative) = if let Some(b) = Coord::from_form(lform).filter(|b| allowed.contains(b)) {
                (b, false)
            } else if let Some(b) = Coord::from_form(scale(lform, -1)).filter(|b| allowed.contains(b)) {
                (b, true)
            } else {
                return Err(Error::Unsupported(format!(
                    "{c} has leading part {lform:?} in {}, which is not a coordinate",
                    target.name
                )));
            };
            if rest == [0, 0, 0] {
                debug_assert!(!negative);
                *out.bare.entry(b).or_insert_with(BigRational::zero) += s;
                continue;
            }
            let (num, den) = if negative {
                let k = negative_lead_phase(c, b, conv)?;
                out.phase = out.phase + UnityExponent::from_big(&(k * s));
                (rest, scale(b.form(), -1))
            } else {
                (rest, b.form())
            };
            *out.bare.entry(b).or_insert_with(BigRational::zero) += s;
            out.series.push(SeriesFactor { num, den, s: s.clone() });
        }
        out.bare.retain(|_, s| !s.is_zero());
        Ok(out)
    }
}

/// Truncated series in the degree-zero monomials `X1^{-p-q} X2^p X3^q`, keyed by `(p, q)`,
/// keeping terms of grade `p + 2q ≤ order`. Each small ratio `X_j/X_i` (`j > i`) has grade ≥ 1.
type Multi = BTreeMap<(i64, i64), BigRational>;

fn grade(k: (i64, i64)) -> i64 {
    k.0 + 2 * k.1
}

fn mono_key(i: usize, j: usize) -> (i64, i64) {
    // X_j / X_i
    let mut p = [0i64; 3];
    p[j] += 1;
    p[i] -= 1;
    (p[1], p[2])
}

fn multi_mul(a: &Multi, b: &Multi, order: i64) -> Multi {
    let mut out = Multi::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = (ka.0 + kb.0, ka.1 + kb.1);
            if grade(k) > order {
                continue;
            }
            *out.entry(k).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn multi_one() -> Multi {
    let mut m = Multi::new();
    m.insert((0, 0), BigRational::one());
    m
}

/// `num/den` as a series; errors unless every term has positive grade.
fn ratio(num: Lin, den: Lin, frame: [Coord; 3], order: i64) -> Result<Multi, Error> {
    let basis = [frame[0].form(), frame[1].form(), frame[2].form()];
    let a = decompose(den, basis)?;
    let b = decompose(num, basis)?;
    let k = a.iter().position(|&x| x != 0).expect("nonzero denominator");
    let ak = BigRational::from_integer(BigInt::from(a[k]));
    // 1/den = (1/(a_k X_k)) Σ_n (−u)^n, u = Σ_{j>k} (a_j/a_k) X_j/X_k.
    let mut u = Multi::new();
    for j in k + 1..3 {
        if a[j] != 0 {
            *u.entry(mono_key(k, j)).or_insert_with(BigRational::zero) -= BigRational::from_integer(BigInt::from(a[j])) / &ak;
        }
    }
    let mut geo = multi_one();
    let mut pw = multi_one();
    for _ in 0..order {
        pw = multi_mul(&pw, &u, order);
        if pw.is_empty() {
            break;
        }
        for (key, c) in &pw {
            *geo.entry(*key).or_insert_with(BigRational::zero) += c;
        }
    }
    let mut numer = Multi::new();
    for i in 0..3 {
        if b[i] != 0 {
            if i < k {
                return Err(Error::Invalid("expansion ratio is not small in the target space".into()));
            }
            *numer.entry(mono_key(k, i)).or_insert_with(BigRational::zero) += BigRational::from_integer(BigInt::from(b[i])) / &ak;
        }
    }
    let r = multi_mul(&numer, &geo, order);
    if r.keys().any(|k| grade(*k) <= 0) {
        return Err(Error::Invalid("expansion ratio is not small in the target space".into()));
    }
    Ok(r)
}

fn binom_series(x: &Multi, s: &BigRational, order: i64) -> Multi {
    let mut out = multi_one();
    let mut pw = multi_one();
    for k in 1..=order as u64 {
        pw = multi_mul(&pw, x, order);
        if pw.is_empty() {
            break;
        }
        let bc = binomial(s, k);
        if bc.is_zero() {
            continue;
        }
        for (key, c) in &pw {
            *out.entry(*key).or_insert_with(BigRational::zero) += c * &bc;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// A fully expanded element of a three-level space.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub frame: [Coord; 3],
    pub prefix: [BigRational; 3],
    pub phase: UnityExponent,
    pub order: i64,
    series: Multi,
}

impl Expansion {
    /// Coefficient of `X1^{e1} X2^{e2} X3^{e3}`, including the phase.
    pub fn coeff(&self, e: &[BigRational; 3]) -> Cyclotomic {
        let p = &e[1] - &self.prefix[1];
        let q = &e[2] - &self.prefix[2];
        if !p.is_integer() || !q.is_integer() || (&e[0] - &self.prefix[0] + &p + &q) != BigRational::zero() {
            return Cyclotomic::zero();
        }
        let key = (p.to_integer().try_into().unwrap_or(i64::MAX), q.to_integer().try_into().unwrap_or(i64::MAX));
        self.series.get(&key).map_or(Cyclotomic::zero(), |c| Cyclotomic::root(self.phase).scale(c))
    }

    /// `(exponents, coefficient)` rows in grade order.
    pub fn rows(&self) -> Vec<([BigRational; 3], Cyclotomic)> {
        let mut keys: Vec<_> = self.series.keys().copied().collect();
        keys.sort_by_key(|k| (grade(*k), *k));
        keys.into_iter()
            .map(|(p, q)| {
                let (bp, bq) = (BigRational::from_integer(p.into()), BigRational::from_integer(q.into()));
                let e = [&self.prefix[0] - &bp - &bq, &self.prefix[1] + bp, &self.prefix[2] + bq];
                (e, Cyclotomic::root(self.phase).scale(&self.series[&(p, q)]))
            })
            .collect()
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# frame {} > {} > {}", self.frame[0], self.frame[1], self.frame[2])?;
        for (e, c) in self.rows() {
            writeln!(f, "{},{},{}\t{}", fmt_rational(&e[0]), fmt_rational(&e[1]), fmt_rational(&e[2]), c)?;
        }
        Ok(())
    }
}

fn finish(st: &State, space: &Space, order: i64) -> Result<Expansion, Error> {
    let frame = space
        .final_coords()
        .ok_or_else(|| Error::Invalid(format!("{} is not a fully iterated Laurent space", space.name)))?;
    let mut prefix = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for (c, s) in &st.bare {
        let i = frame.iter().position(|x| x == c).expect("arrow leaves only frame coordinates");
        prefix[i] += s;
    }
    let mut series = multi_one();
    for fac in &st.series {
        let r = ratio(fac.num, fac.den, frame, order)?;
        series = multi_mul(&series, &binom_series(&r, &fac.s, order), order);
    }
    Ok(Expansion { frame, prefix, phase: st.phase, order, series })
}

/// Expands the monomial with exponents `(a,b,c,d,f,g)` on `(z, w, t, z−w, z−t, w−t)` along
/// a chain of spaces ending in a fully iterated space.
pub fn expand_along(exps: &[BigRational; 6], path: &[&Space], order: i64, conv: Conventions) -> Result<Expansion, Error> {
    let mut st = State::source(exps);
    for sp in path {
        st = st.apply(sp, conv)?;
    }
    let last = path.last().ok_or_else(|| Error::Invalid("empty path".into()))?;
    finish(&st, last, order)
}

/// First coefficient where two expansions differ.
#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub exponents: [BigRational; 3],
    pub left: Cyclotomic,
    pub right: Cyclotomic,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.exponents;
        write!(
            f,
            "at exponents ({}, {}, {}): {} vs {}",
            fmt_rational(&e[0]),
            fmt_rational(&e[1]),
            fmt_rational(&e[2]),
            self.left,
            self.right
        )
    }
}

pub fn compare(a: &Expansion, b: &Expansion) -> Option<Discrepancy> {
    assert_eq!(a.frame, b.frame, "expansions live in different spaces");
    let mut all: Vec<[BigRational; 3]> = a.rows().into_iter().map(|r| r.0).collect();
    all.extend(b.rows().into_iter().map(|r| r.0));
    all.sort();
    all.dedup();
    for e in all {
        let (x, y) = (a.coeff(&e), b.coeff(&e));
        if x != y {
            return Some(Discrepancy { exponents: e, left: x, right: y });
        }
    }
    None
}

// ---- diagrams ------------------------------------------------------------------

use Coord::*;
use Level::{Block, Single};

fn sp(name: &'static str, levels: &[Level]) -> Space {
    Space { name, levels: levels.to_vec() }
}

/// Every named space of the star and octagon diagrams.
pub fn spaces() -> Vec<Space> {
    vec![
        sp("i(jkl)", &[Single(Z), Block(W, T)]),
        sp("ij(kl)", &[Block(Z, W), Single(T)]),
        sp("i(jk)l", &[Block(Z, T), Single(WT)]),
        sp("[(ij)k]l", &[Block(W, T), Single(ZW)]),
        sp("([ij]k)l", &[Single(T), Block(ZW, WT)]),
        sp("i(j(kl))", &[Single(Z), Single(W), Single(T)]),
        sp("i((jk)l)", &[Single(Z), Single(T), Single(WT)]),
        sp("(ij)(kl)", &[Single(W), Single(T), Single(ZW)]),
        sp("(i(jk))l", &[Single(T), Single(ZT), Single(WT)]),
        sp("((ij)k)l", &[Single(T), Single(WT), Single(ZW)]),
        sp("j((ki)l)", &[Single(W), Single(Z), Single(ZT)]),
        sp("j((ik)l)", &[Single(W), Single(T), Single(ZT)]),
        sp("(j(ki))l", &[Single(Z), Single(ZW), Single(ZT)]),
        sp("(j(ik))l", &[Single(T), Single(WT), Single(ZT)]),
        sp("((jk)i)l", &[Single(Z), Single(ZT), Single(WT)]),
        sp("((ji)k)l", &[Single(T), Single(ZT), Single(ZW)]),
        sp("j(ki)l", &[Block(Z, W), Single(ZT)]),
        sp("j([ik]l)", &[Single(W), Block(Z, T)]),
        sp("j(ik)l", &[Block(W, T), Single(ZT)]),
        sp("([jk]i)l", &[Single(Z), Block(ZW, ZT)]),
        sp("[(jk)i]l", &[Block(Z, T), Single(WT)]),
        sp("((ki)j)l", &[Single(W), Single(ZW), Single(ZT)]),
        sp("((ik)j)l", &[Single(W), Single(WT), Single(ZT)]),
        sp("(k(ij))l", &[Single(W), Single(WT), Single(ZW)]),
        sp("(i(kj))l", &[Single(W), Single(ZW), Single(WT)]),
        sp("i((kj)l)", &[Single(Z), Single(W), Single(WT)]),
        sp("([ik]j)l", &[Single(W), Block(ZW, ZT)]),
        sp("i(kj)l", &[Block(Z, W), Single(WT)]),
        sp("i([jk]l)", &[Single(Z), Block(W, T)]),
    ]
}

pub fn space(name: &str) -> Result<Space, Error> {
    spaces()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Invalid(format!("unknown space {name:?}")))
}

pub const SOURCE: &str = "ijkl";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagram {
    Star,
    Octagon1,
    Octagon2,
}

impl FromStr for Diagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "star" => Ok(Diagram::Star),
            "oct1" | "octagon1" => Ok(Diagram::Octagon1),
            "oct2" | "octagon2" => Ok(Diagram::Octagon2),
            _ => Err(Error::Parse(format!("unknown diagram {s:?} (expected star, oct1 or oct2)"))),
        }
    }
}

impl Diagram {
    pub fn name(self) -> &'static str {
        match self {
            Diagram::Star => "star",
            Diagram::Octagon1 => "oct1",
            Diagram::Octagon2 => "oct2",
        }
    }

    /// Arrows out of each middle space; every middle space also receives an arrow from the source.
    fn table(self) -> &'static [(&'static str, &'static [&'static str])] {
        match self {
            Diagram::Star => &[
                ("i(jkl)", &["i(j(kl))", "i((jk)l)"]),
                ("ij(kl)", &["i(j(kl))", "(ij)(kl)"]),
                ("i(jk)l", &["i((jk)l)", "(i(jk))l"]),
                ("[(ij)k]l", &["(ij)(kl)", "((ij)k)l"]),
                ("([ij]k)l", &["(i(jk))l", "((ij)k)l"]),
            ],
            Diagram::Octagon1 => &[
                ("j(ki)l", &["j((ki)l)", "(j(ki))l"]),
                ("j([ik]l)", &["j((ki)l)", "j((ik)l)"]),
                ("j(ik)l", &["j((ik)l)", "(j(ik))l"]),
                ("([jk]i)l", &["(j(ki))l", "((jk)i)l"]),
                ("([ij]k)l", &["(j(ik))l", "((ji)k)l", "(i(jk))l", "((ij)k)l"]),
                ("[(jk)i]l", &["((jk)i)l", "(i(jk))l"]),
            ],
            Diagram::Octagon2 => &[
                ("([ik]j)l", &["((ki)j)l", "(k(ij))l", "((ik)j)l", "(i(kj))l"]),
                ("[(ij)k]l", &["(k(ij))l", "((ij)k)l"]),
                ("i(kj)l", &["(i(kj))l", "i((kj)l)"]),
                ("([ij]k)l", &["((ij)k)l", "(i(jk))l"]),
                ("i(jk)l", &["(i(jk))l", "i((jk)l)"]),
                ("i([jk]l)", &["i((kj)l)", "i((jk)l)"]),
            ],
        }
    }

    pub fn has_arrow(self, from: &str, to: &str) -> bool {
        if from == SOURCE {
            return self.table().iter().any(|(m, _)| *m == to);
        }
        self.table().iter().any(|(m, outs)| *m == from && outs.contains(&to))
    }

    /// All two-step paths `source → middle → outer`, grouped by the outer space.
    pub fn paths(self) -> BTreeMap<&'static str, Vec<&'static str>> {
        let mut out: BTreeMap<&'static str, Vec<&'static str>> = BTreeMap::new();
        for (m, outs) in self.table() {
            for o in *outs {
                out.entry(o).or_default().push(m);
            }
        }
        out
    }
}

/// Parses `a,b,c,d,f,g`.
pub fn parse_exponents(s: &str) -> Result<[BigRational; 6], Error> {
    let v: Vec<BigRational> = s
        .split(',')
        .map(|x| crate::exact::parse_rational(x).map_err(|e| Error::Parse(e.to_string())))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| Error::Parse("expected six comma-separated exponents a,b,c,d,f,g".into()))
}

/// Result of comparing two composites into the same space.
#[derive(Clone, Debug)]
pub struct PathComparison {
    pub target: &'static str,
    pub via: (&'static str, &'static str),
    pub discrepancy: Option<Discrepancy>,
}

/// Expands along `source → path1... ` and `source → path2...` and compares.
pub fn check_paths(
    exps: &[BigRational; 6],
    diagram: Diagram,
    path1: &[&str],
    path2: &[&str],
    order: i64,
    conv: Conventions,
) -> Result<Option<Discrepancy>, Error> {
    let resolve = |p: &[&str]| -> Result<Vec<Space>, Error> {
        let mut prev = SOURCE;
        let mut out = Vec::new();
        for &name in p {
            if !diagram.has_arrow(prev, name) {
                return Err(Error::Invalid(format!("no arrow {prev} -> {name} in {}", diagram.name())));
            }
            out.push(space(name)?);
            prev = name;
        }
        Ok(out)
    };
    let (s1, s2) = (resolve(path1)?, resolve(path2)?);
    if s1.last().map(|s| s.name) != s2.last().map(|s| s.name) {
        return Err(Error::Invalid("paths end in different spaces".into()));
    }
    let e1 = expand_along(exps, &s1.iter().collect::<Vec<_>>(), order, conv)?;
    let e2 = expand_along(exps, &s2.iter().collect::<Vec<_>>(), order, conv)?;
    Ok(compare(&e1, &e2))
}

/// Compares every pair of composites into each outer space of the diagram.
pub fn check_diagram(
    exps: &[BigRational; 6],
    diagram: Diagram,
    order: i64,
    conv: Conventions,
) -> Result<Vec<PathComparison>, Error> {
    let mut out = Vec::new();
    for (target, mids) in diagram.paths() {
        let mut mids = mids.clone();
        mids.dedup();
        let first = mids[0];
        for other in &mids[1..] {
            let d = check_paths(exps, diagram, &[first, target], &[other, target], order, conv)?;
            out.push(PathComparison { target, via: (first, other), discrepancy: d });
        }
    }
    Ok(out)
}

/// The two-variable frames reachable from `z^a w^b (z−w)^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairFrame {
    /// `V((z))((w))`
    ZW,
    /// `V((w))((z))`
    WZ,
    /// `V((z))((z−w))`
    ZZmW,
    /// `V((w))((z−w))`
    WZmW,
}

impl FromStr for PairFrame {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "z,w" => Ok(PairFrame::ZW),
            "w,z" => Ok(PairFrame::WZ),
            "z,z-w" => Ok(PairFrame::ZZmW),
            "w,z-w" => Ok(PairFrame::WZmW),
            _ if t.contains("w-z") => Err(Error::Invalid("frames written with (w-z) are not used".into())),
            _ => Err(Error::Parse(format!("unknown two-variable frame {s:?}"))),
        }
    }
}

impl PairFrame {
    pub fn coords(self) -> [Coord; 2] {
        match self {
            PairFrame::ZW => [Z, W],
            PairFrame::WZ => [W, Z],
            PairFrame::ZZmW => [Z, ZW],
            PairFrame::WZmW => [W, ZW],
        }
    }
}

/// Two-variable series `Σ c · X^r Y^n` in a [`PairFrame`], known for `n ≤ n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSeries {
    pub frame: PairFrame,
    pub terms: BTreeMap<(BigRational, BigRational), Cyclotomic>,
    pub n_max: BigRational,
}

impl fmt::Display for PairSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.frame.coords();
        writeln!(f, "# frame {x} > {y}")?;
        let mut rows: Vec<_> = self.terms.iter().collect();
        rows.sort_by(|a, b| (&a.0 .1, &a.0 .0).cmp(&(&b.0 .1, &b.0 .0)));
        for ((r, n), c) in rows {
            writeln!(f, "{},{}\t{}", fmt_rational(r), fmt_rational(n), c)?;
        }
        Ok(())
    }
}

impl PairSeries {
    pub fn agrees_with(&self, o: &PairSeries) -> bool {
        if self.frame != o.frame {
            return false;
        }
        let lim = if self.n_max < o.n_max { &self.n_max } else { &o.n_max };
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(o.terms.keys()).filter(|k| &k.1 <= lim).collect();
        keys.into_iter().all(|k| {
            self.terms.get(k).cloned().unwrap_or_else(Cyclotomic::zero) == o.terms.get(k).cloned().unwrap_or_else(Cyclotomic::zero)
        })
    }
}

/// `z^a w^b (z−w)^c` expanded in a two-variable frame, through relative order `order`
/// in the second variable.
pub fn embed_pair(a: &BigRational, b: &BigRational, c: &BigRational, frame: PairFrame, order: i64) -> Result<PairSeries, Error> {
    let [x, y] = frame.coords();
    let target = Space { name: "pair", levels: vec![Single(x), Single(y), Single(T)] };
    let zero = BigRational::zero();
    let exps = [a.clone(), b.clone(), zero.clone(), c.clone(), zero.clone(), zero];
    let e = expand_along(&exps, &[&target], order, Conventions::default())?;
    let mut terms = BTreeMap::new();
    for (ex, coef) in e.rows() {
        terms.insert((ex[0].clone(), ex[1].clone()), coef);
    }
    let n_max = &e.prefix[1] + BigRational::from_integer(order.into());
    Ok(PairSeries { frame, terms, n_max })
}

/// `f(z, z−w) ↦ e^{(z−w)∂_w} f(w, z−w)` from `V((z))((z−w))` to `V((w))((z−w))`, and its
/// inverse in the other direction.
pub fn taylor_shift(f: &PairSeries) -> Result<PairSeries, Error> {
    let (target, sign) = match f.frame {
        PairFrame::ZZmW => (PairFrame::WZmW, false),
        PairFrame::WZmW => (PairFrame::ZZmW, true),
        other => {
            return Err(Error::Invalid(format!(
                "the shift is defined between (z, z-w) and (w, z-w) frames; {other:?} would give infinite coefficient sums"
            )))
        }
    };
    let mut terms: BTreeMap<(BigRational, BigRational), Cyclotomic> = BTreeMap::new();
    for ((r, n), c) in &f.terms {
        let room = &f.n_max - n;
        if room.is_negative() {
            continue;
        }
        let kmax: i64 = room.floor().to_integer().try_into().unwrap_or(0);
        for k in 0..=kmax {
            let mut bc = binomial(r, k as u64);
            if bc.is_zero() {
                continue;
            }
            if sign && k % 2 == 1 {
                bc = -bc;
            }
            let kk = BigRational::from_integer(k.into());
            let key = (r - &kk, n + &kk);
            let slot = terms.entry(key).or_insert_with(Cyclotomic::zero);
            *slot += &c.scale(&bc);
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(PairSeries { frame: target, terms, n_max: f.n_max.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ex(v: [(i64, i64); 6]) -> [BigRational; 6] {
        v.map(|(n, d)| q(n, d))
    }

    #[test]
    fn negative_coordinates_rejected() {
        assert!("w-z".parse::<Coord>().is_err());
        assert!("w,w-z".parse::<PairFrame>().is_err());
    }

    #[test]
    fn basic_pair_conventions() {
        let h = q(1, 2);
        let z = BigRational::zero();
        let s = embed_pair(&z, &z, &h, PairFrame::ZW, 2).unwrap();
        assert_eq!(s.terms[&(q(1, 2), q(0, 1))], Cyclotomic::one());
        assert_eq!(s.terms[&(q(-1, 2), q(1, 1))], Cyclotomic::from_rational(q(-1, 2)));
        assert_eq!(s.terms[&(q(-3, 2), q(2, 1))], Cyclotomic::from_rational(q(-1, 8)));
        let t = embed_pair(&z, &z, &h, PairFrame::WZ, 2).unwrap();
        assert_eq!(t.terms[&(q(1, 2), q(0, 1))], Cyclotomic::e(1, 4));
        assert_eq!(t.terms[&(q(-1, 2), q(1, 1))], Cyclotomic::e(1, 4).scale(&q(-1, 2)));
    }

    #[test]
    fn paper_octagon_quadrilateral_phase() {
        let e = ex([(0, 1), (0, 1), (0, 1), (1, 3), (0, 1), (1, 2)]);
        let a = expand_along(&e, &[&space("j([ik]l)").unwrap(), &space("j((ki)l)").unwrap()], 4, Conventions::default()).unwrap();
        assert_eq!(a.phase, UnityExponent::new(1, 6));
        let b = expand_along(&e, &[&space("j(ki)l").unwrap(), &space("j((ki)l)").unwrap()], 4, Conventions::default()).unwrap();
        assert!(compare(&a, &b).is_none());
        let flipped = Conventions { flip_wt_over_zw: true };
        let c = expand_along(&e, &[&space("j(ki)l").unwrap(), &space("j((ki)l)").unwrap()], 4, flipped).unwrap();
        assert!(compare(&a, &c).is_some());
    }

    #[test]
    fn diagrams_commute_for_a_fractional_tuple() {
        let e = ex([(1, 2), (1, 3), (-1, 4), (1, 2), (3, 4), (1, 2)]);
        for d in [Diagram::Star, Diagram::Octagon1, Diagram::Octagon2] {
            for c in check_diagram(&e, d, 4, Conventions::default()).unwrap() {
                assert!(c.discrepancy.is_none(), "{d:?} {c:?}");
            }
        }
    }

    #[test]
    fn ill_formed_path_rejected() {
        let e = ex([(0, 1); 6]);
        assert!(check_paths(&e, Diagram::Star, &["i(jkl)", "(ij)(kl)"], &["ij(kl)", "(ij)(kl)"], 3, Conventions::default()).is_err());
    }
}
