//! Linear systems over `Z/M` via diagonalization with unimodular row and column
//! operations, plus a Howell-form echelon used to pick the lexicographically
//! smallest solution.

use num_integer::Integer;

#[inline]
fn md(x: i128, m: i64) -> i64 {
    x.rem_euclid(m as i128) as i64
}

/// Dense matrix over `Z/M`, row-major.
#[derive(Clone, Debug)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub m: i64,
    pub data: Vec<i64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, m: i64) -> Self {
        ModMatrix { rows, cols, m, data: vec![0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        let m = self.m;
        self.data[r * self.cols + c] = v.rem_euclid(m);
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        let x = self.get(r, c) as i128 + v as i128;
        self.data[r * self.cols + c] = md(x, self.m);
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rows)
            .map(|r| {
                let s: i128 = (0..self.cols).map(|c| self.get(r, c) as i128 * x[c] as i128).sum();
                md(s, self.m)
            })
            .collect()
    }
}

/// Applies `[[s, t], [u, v]]` to rows `a`, `b` of `mat` (row-major, width `w`).
fn row_op(data: &mut [i64], w: usize, a: usize, b: usize, s: i64, t: i64, u: i64, v: i64, m: i64) {
    for c in 0..w {
        let x = data[a * w + c] as i128;
        let y = data[b * w + c] as i128;
        data[a * w + c] = md(s as i128 * x + t as i128 * y, m);
        data[b * w + c] = md(u as i128 * x + v as i128 * y, m);
    }
}

fn col_op(data: &mut [i64], h: usize, w: usize, a: usize, b: usize, s: i64, t: i64, u: i64, v: i64, m: i64) {
    for r in 0..h {
        let x = data[r * w + a] as i128;
        let y = data[r * w + b] as i128;
        data[r * w + a] = md(s as i128 * x + t as i128 * y, m);
        data[r * w + b] = md(u as i128 * x + v as i128 * y, m);
    }
}

/// Unimodular `[[s, t], [-y/g, x/g]]` sending `(x, y)` to `(g, 0)`.
fn bezout(x: i64, y: i64) -> (i64, i64, i64, i64, i64) {
    if x != 0 && y % x == 0 {
        return (x, 1, 0, -y / x, 1);
    }
    let e = x.extended_gcd(&y);
    let g = e.gcd;
    (g, e.x, e.y, -y / g, x / g)
}

/// A unit `u` mod `m` with `u·v ≡ gcd(v, m)`.
fn normalizing_unit(v: i64, m: i64) -> i64 {
    let g = v.gcd(&m);
    if g == 0 || g == m {
        return 1;
    }
    let mg = m / g;
    let base = (v / g).extended_gcd(&mg).x.rem_euclid(mg);
    (0..g).map(|k| base + k * mg).find(|u| u.gcd(&m) == 1).expect("unit exists")
}

/// Solution set `{x0 + span(kernel)}` of `A x ≡ b (mod M)`.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub particular: Vec<i64>,
    pub kernel: Vec<Vec<i64>>,
    pub m: i64,
}

/// Solves `A x ≡ b (mod M)`; `None` when inconsistent.
pub fn solve_mod(a: &ModMatrix, b: &[i64]) -> Option<SolutionSet> {
    let m = a.m;
    let (h, w) = (a.rows, a.cols);
    let mut d = a.data.clone();
    let mut rhs: Vec<i64> = b.iter().map(|x| x.rem_euclid(m)).collect();
    let mut v = vec![0i64; w * w];
    for i in 0..w {
        v[i * w + i] = 1 % m;
    }
    let mut t = 0;
    while t < h.min(w) {
        // Choose a pivot with the smallest gcd with M in the remaining block.
        let mut best: Option<(i64, usize, usize)> = None;
        for r in t..h {
            for c in t..w {
                let x = d[r * w + c];
                if x != 0 {
                    let g = x.gcd(&m);
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, r, c));
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        if pr != t {
            row_op(&mut d, w, t, pr, 0, 1, 1, 0, m);
            rhs.swap(t, pr);
        }
        if pc != t {
            col_op(&mut d, h, w, t, pc, 0, 1, 1, 0, m);
            col_op(&mut v, w, w, t, pc, 0, 1, 1, 0, m);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..h {
                let y = d[r * w + t];
                if y == 0 {
                    continue;
                }
                let x = d[t * w + t];
                let (_, s, tt, u, vv) = bezout(x, y);
                row_op(&mut d, w, t, r, s, tt, u, vv, m);
                let (bx, by) = (rhs[t] as i128, rhs[r] as i128);
                rhs[t] = md(s as i128 * bx + tt as i128 * by, m);
                rhs[r] = md(u as i128 * bx + vv as i128 * by, m);
            }
            for c in t + 1..w {
                let y = d[t * w + c];
                if y == 0 {
                    continue;
                }
                let x = d[t * w + t];
                let (_, s, tt, u, vv) = bezout(x, y);
                col_op(&mut d, h, w, t, c, s, tt, u, vv, m);
                col_op(&mut v, w, w, t, c, s, tt, u, vv, m);
            }
            for r in t + 1..h {
                if d[r * w + t] != 0 {
                    dirty = true;
                    break;
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }
    let rank = t;
    // D y = rhs
    let mut y = vec![0i64; w];
    for i in 0..h {
        let di = if i < rank { d[i * w + i] } else { 0 };
        let bi = rhs[i];
        let g = di.gcd(&m);
        if bi % g != 0 {
            return None;
        }
        if i < w && di != 0 {
            let mg = m / g;
            let inv = (di / g).extended_gcd(&mg).x.rem_euclid(mg);
            y[i] = md((bi / g) as i128 * inv as i128, mg);
        }
    }
    let vcol = |c: usize| -> Vec<i64> { (0..w).map(|r| v[r * w + c]).collect() };
    let mut particular = vec![0i64; w];
    for c in 0..w {
        if y[c] != 0 {
            for (r, slot) in particular.iter_mut().enumerate() {
                *slot = md(*slot as i128 + v[r * w + c] as i128 * y[c] as i128, m);
            }
        }
    }
    let mut kernel = Vec::new();
    for c in 0..w {
        let dc = if c < rank { d[c * w + c] } else { 0 };
        let mult = m / dc.gcd(&m);
        let col: Vec<i64> = vcol(c).into_iter().map(|x| md(x as i128 * mult as i128, m)).collect();
        if col.iter().any(|&x| x != 0) {
            kernel.push(col);
        }
    }
    Some(SolutionSet { particular, kernel, m })
}

/// Howell-form echelon of the row module generated by `gens` over `Z/M`:
/// `(pivot column, pivot value dividing M, row)` with strictly increasing columns.
pub fn howell_rows(gens: &[Vec<i64>], m: i64) -> Vec<(usize, i64, Vec<i64>)> {
    let w = gens.first().map_or(0, |g| g.len());
    let mut pool: Vec<Vec<i64>> = gens.to_vec();
    let mut out = Vec::new();
    for c in 0..w {
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest = Vec::new();
        for row in pool.drain(..) {
            if row[c] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(mut p) => {
                    let (_, s, t, u, v) = bezout(p[c], row[c]);
                    let mut r2 = row;
                    for k in c..w {
                        let (x, y) = (p[k] as i128, r2[k] as i128);
                        p[k] = md(s as i128 * x + t as i128 * y, m);
                        r2[k] = md(u as i128 * x + v as i128 * y, m);
                    }
                    if r2.iter().any(|&x| x != 0) {
                        rest.push(r2);
                    }
                    pivot = Some(p);
                }
            }
        }
        if let Some(mut p) = pivot {
            let u = normalizing_unit(p[c], m);
            for x in p.iter_mut() {
                *x = md(*x as i128 * u as i128, m);
            }
            let g = p[c];
            let ann = m / g.gcd(&m);
            let q: Vec<i64> = p.iter().map(|&x| md(x as i128 * ann as i128, m)).collect();
            if q.iter().any(|&x| x != 0) {
                rest.push(q);
            }
            out.push((c, g, p));
        }
        pool = rest;
    }
    out
}

/// The lexicographically smallest element of `x0 + span(kernel)` with entries in `[0, M)`.
pub fn lex_min(set: &SolutionSet) -> Vec<i64> {
    let m = set.m;
    let mut x = set.particular.clone();
    for (c, g, row) in howell_rows(&set.kernel, m) {
        let q = x[c] / g;
        if q != 0 {
            for k in c..x.len() {
                x[k] = md(x[k] as i128 - q as i128 * row[k] as i128, m);
            }
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_solutions(a: &ModMatrix, b: &[i64]) -> Vec<Vec<i64>> {
        let w = a.cols;
        let total = (a.m as usize).pow(w as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut x = vec![0i64; w];
            let mut c = code;
            for k in (0..w).rev() {
                x[k] = (c % a.m as usize) as i64;
                c /= a.m as usize;
            }
            if a.mul_vec(&x) == b.iter().map(|v| v.rem_euclid(a.m)).collect::<Vec<_>>() {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn matches_brute_force_lexmin() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let m = [2, 4, 6, 8, 9, 12][trial % 6];
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..4);
            let mut a = ModMatrix::zeros(rows, cols, m);
            for r in 0..rows {
                for c in 0..cols {
                    a.set(r, c, rng.gen_range(0..m));
                }
            }
            let b: Vec<i64> = if rng.gen_bool(0.5) {
                let x: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..m)).collect();
                a.mul_vec(&x)
            } else {
                (0..rows).map(|_| rng.gen_range(0..m)).collect()
            };
            let brute = brute_solutions(&a, &b);
            match solve_mod(&a, &b) {
                None => assert!(brute.is_empty(), "missed solution for {a:?} {b:?}"),
                Some(set) => {
                    assert_eq!(a.mul_vec(&set.particular), b.iter().map(|v| v.rem_euclid(m)).collect::<Vec<_>>());
                    for k in &set.kernel {
                        assert!(a.mul_vec(k).iter().all(|&v| v == 0));
                    }
                    assert_eq!(lex_min(&set), brute[0], "lexmin for {a:?} {b:?}");
                }
            }
        }
    }
}
