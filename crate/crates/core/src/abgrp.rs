//! Finite abelian groups `Z/n1 × … × Z/nk`, dense function tables on them, and
//! root-of-unity valued quadratic functions.

use std::fmt;

use crate::exact::{Cyclotomic, UnityExponent};
use crate::Error;

/// `Z/n1 × … × Z/nk`, factors not required to be invariant factors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// Element coordinates, coordinate `i` in `[0, n_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement(pub Vec<u64>);

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, Error> {
        if factors.iter().any(|&n| n == 0) {
            return Err(Error::Invalid("cyclic factor must be at least 1".into()));
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("positive order")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Parses the literal `n1,n2,...`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let factors = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad group literal {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    /// Least common multiple of the factors.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |a, &b| num_integer::lcm(a, b))
    }

    /// Mixed-radix rank; the first coordinate is the most significant.
    pub fn rank(&self, x: &GroupElement) -> usize {
        let mut r = 0usize;
        for (c, n) in x.0.iter().zip(&self.factors) {
            r = r * *n as usize + (*c % *n) as usize;
        }
        r
    }

    pub fn unrank(&self, mut r: usize) -> GroupElement {
        let mut out = vec![0; self.factors.len()];
        for (slot, n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (r % *n as usize) as u64;
            r /= *n as usize;
        }
        GroupElement(out)
    }

    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, Error> {
        if coords.len() != self.factors.len() {
            return Err(Error::Invalid(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.factors.len()
            )));
        }
        Ok(GroupElement(
            coords.iter().zip(&self.factors).map(|(c, n)| c.rem_euclid(*n as i64) as u64).collect(),
        ))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|r| self.unrank(r))
    }

    /// Addition table on ranks, `|A|²` entries.
    pub fn add_table(&self) -> AddTable {
        let n = self.order();
        let elems: Vec<_> = self.elements().collect();
        let mut sum = vec![0usize; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = GroupElement(
                    a.0.iter().zip(&b.0).zip(&self.factors).map(|((x, y), m)| (x + y) % m).collect(),
                );
                sum[i * n + j] = self.rank(&c);
            }
        }
        let neg = (0..n)
            .map(|i| {
                let c = GroupElement(
                    elems[i].0.iter().zip(&self.factors).map(|(x, m)| (m - x) % m).collect(),
                );
                self.rank(&c)
            })
            .collect();
        AddTable { n, sum, neg }
    }

    /// `|Hom(A, C^×)|`, which equals `|A|` for finite `A`.
    pub fn dual_order(&self) -> usize {
        self.order()
    }

    pub fn fmt_element(&self, x: &GroupElement) -> String {
        x.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement, Error> {
        let coords = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad element {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        self.element(&coords)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<_> = self.factors.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Precomputed group law on ranks.
#[derive(Clone, Debug)]
pub struct AddTable {
    n: usize,
    sum: Vec<usize>,
    neg: Vec<usize>,
}

impl AddTable {
    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        self.sum[i * self.n + j]
    }

    #[inline]
    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// `|Hom(A, C^×)|` by the order of `A`.
pub fn group_dual_order(a: &FiniteAbelianGroup) -> usize {
    a.dual_order()
}

/// All homomorphisms `A → μ_∞`, each given by the images of the standard generators.
///
/// The image of the generator of `Z/n` must be an `n`-th root of unity, so there are
/// exactly `n` choices per factor.
pub fn enumerate_characters(a: &FiniteAbelianGroup) -> Vec<Vec<UnityExponent>> {
    let mut out: Vec<Vec<UnityExponent>> = vec![vec![]];
    for &n in a.factors() {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..n {
                let mut v = prefix.clone();
                v.push(UnityExponent::new(k as i64, n as i64));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A root-of-unity valued function on `A`, stored densely by rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticFunction {
    group: FiniteAbelianGroup,
    values: Vec<UnityExponent>,
}

impl QuadraticFunction {
    /// Wraps a table without checking quadraticity; see [`is_quadratic`].
    pub fn from_table(group: FiniteAbelianGroup, values: Vec<UnityExponent>) -> Result<Self, Error> {
        if values.len() != group.order() {
            return Err(Error::Invalid(format!(
                "table has {} values, group has order {}",
                values.len(),
                group.order()
            )));
        }
        Ok(QuadraticFunction { group, values })
    }

    pub fn from_fn(group: &FiniteAbelianGroup, f: impl Fn(&GroupElement) -> UnityExponent) -> Self {
        let values = group.elements().map(|x| f(&x)).collect();
        QuadraticFunction { group: group.clone(), values }
    }

    /// Fails if some value is not a root of unity.
    pub fn from_cyclotomic(group: FiniteAbelianGroup, values: &[Cyclotomic]) -> Result<Self, Error> {
        let vals = values
            .iter()
            .enumerate()
            .map(|(r, c)| {
                c.as_root_of_unity().ok_or_else(|| {
                    Error::Invalid(format!(
                        "value {} at {} is not a root of unity",
                        c,
                        group.fmt_element(&group.unrank(r))
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_table(group, vals)
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Self::from_fn(group, |_| UnityExponent::ZERO)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[UnityExponent] {
        &self.values
    }

    #[inline]
    pub fn at(&self, rank: usize) -> UnityExponent {
        self.values[rank]
    }

    pub fn eval(&self, x: &GroupElement) -> UnityExponent {
        self.values[self.group.rank(x)]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn inverse(&self) -> Self {
        QuadraticFunction { group: self.group.clone(), values: self.values.iter().map(|v| -*v).collect() }
    }

    /// Pointwise product.
    pub fn product(&self, o: &Self) -> Result<Self, Error> {
        if self.group != o.group {
            return Err(Error::Invalid("quadratic functions on different groups".into()));
        }
        Ok(QuadraticFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&o.values).map(|(a, b)| *a + *b).collect(),
        })
    }

    /// `B(i,j) = Q(i+j)/(Q(i)Q(j))` as a table on rank pairs.
    pub fn associated_bilinear(&self) -> BilinearTable {
        let t = self.group.add_table();
        let n = t.len();
        let mut vals = vec![UnityExponent::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                vals[i * n + j] = self.values[t.add(i, j)] - self.values[i] - self.values[j];
            }
        }
        BilinearTable { n, vals }
    }
}

/// Table of a function `A × A → μ_∞`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BilinearTable {
    n: usize,
    vals: Vec<UnityExponent>,
}

impl BilinearTable {
    pub fn at(&self, i: usize, j: usize) -> UnityExponent {
        self.vals[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_bimultiplicative(&self, t: &AddTable) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|i2| {
                (0..self.n).all(|j| self.at(t.add(i, i2), j) == self.at(i, j) + self.at(i2, j))
            })
        })
    }
}

/// Exhaustive check of `Q(i) = Q(-i)` and the cube condition.
pub fn is_quadratic(q: &QuadraticFunction) -> bool {
    // Q(-x) = Q(x) and B(x, ·) additive in each generator: together equivalent to
    // Q(x+y+z)Q(x)Q(y)Q(z) = Q(x+y)Q(x+z)Q(y+z), at |A|²·rank cost.
    let t = q.group.add_table();
    let n = t.len();
    let v = &q.values;
    if !v[0].is_zero() || (0..n).any(|i| v[i] != v[t.neg(i)]) {
        return false;
    }
    let b = |i: usize, j: usize| v[t.add(i, j)] - v[i] - v[j];
    let gens: Vec<usize> = (0..q.group.factors().len())
        .map(|k| {
            let mut c = vec![0i64; q.group.factors().len()];
            c[k] = 1;
            q.group.rank(&q.group.element(&c).expect("unit vector"))
        })
        .collect();
    (0..n).all(|x| gens.iter().all(|&g| (0..n).all(|y| b(x, t.add(y, g)) == b(x, y) + b(x, g))))
}

/// Quadraticity of a table of cyclotomic values; non-roots of unity are rejected.
pub fn is_quadratic_cyc(a: &FiniteAbelianGroup, values: &[Cyclotomic]) -> Result<bool, Error> {
    Ok(is_quadratic(&QuadraticFunction::from_cyclotomic(a.clone(), values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cube_oracle(q: &QuadraticFunction) -> bool {
        let t = q.group.add_table();
        let n = t.len();
        let v = &q.values;
        if (0..n).any(|i| v[i] != v[t.neg(i)]) {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let ij = t.add(i, j);
                for k in 0..n {
                    let s = v[t.add(ij, k)] + v[i] + v[j] + v[k] - v[ij] - v[t.add(i, k)] - v[t.add(j, k)];
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn generator_test_matches_cube_condition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for f in [vec![2], vec![4], vec![2, 2], vec![4, 2], vec![3, 3], vec![6]] {
            let a = g(&f);
            let m = 2 * a.exponent() as i64;
            let mut hits = 0;
            for trial in 0..400 {
                // Half the trials start from a genuine quadratic form so both answers occur.
                let q = if trial % 2 == 0 {
                    let vals = (0..a.order()).map(|_| UnityExponent::new(rng.gen_range(0..m), m)).collect();
                    QuadraticFunction::from_table(a.clone(), vals).unwrap()
                } else {
                    let c = rng.gen_range(0..m);
                    QuadraticFunction::from_fn(&a, |x| {
                        let s: i64 = x.0.iter().zip(a.factors()).map(|(xi, ni)| (*xi * *xi) as i64 * (m / *ni as i64)).sum();
                        UnityExponent::new(s * c, m)
                    })
                };
                let want = cube_oracle(&q);
                assert_eq!(is_quadratic(&q), want, "{f:?} {:?}", q.values());
                hits += want as usize;
            }
            assert!(hits > 0);
        }
    }

    fn g(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn rank_round_trip() {
        let a = g(&[4, 2, 3]);
        for r in 0..a.order() {
            assert_eq!(a.rank(&a.unrank(r)), r);
        }
        assert_eq!(a.unrank(1).0, vec![0, 0, 1]);
    }

    #[test]
    fn dual_order_matches_character_count() {
        for f in [vec![1], vec![4, 2], vec![8, 1], vec![3, 3]] {
            let a = g(&f);
            assert_eq!(group_dual_order(&a), enumerate_characters(&a).len());
        }
    }

    #[test]
    fn z2_quadratic_examples() {
        let a = g(&[2]);
        let q = |x: UnityExponent| QuadraticFunction::from_table(a.clone(), vec![UnityExponent::ZERO, x]).unwrap();
        assert!(is_quadratic(&q(UnityExponent::new(1, 4))));
        assert!(!is_quadratic(&q(UnityExponent::new(1, 3))));
        assert!(is_quadratic(&QuadraticFunction::trivial(&a)));
    }

    #[test]
    fn rejects_non_root_values() {
        let a = g(&[2]);
        let vals = [Cyclotomic::one(), Cyclotomic::from_integer(2)];
        assert!(is_quadratic_cyc(&a, &vals).is_err());
    }

    #[test]
    fn z4_gauss_form_bilinear() {
        let a = g(&[4]);
        let q = QuadraticFunction::from_fn(&a, |x| UnityExponent::new((x.0[0] * x.0[0]) as i64, 8));
        assert!(is_quadratic(&q));
        let b = q.associated_bilinear();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b.at(i, j), UnityExponent::new((i * j) as i64, 4));
            }
        }
    }
}
