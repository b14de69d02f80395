//! Exhaustive enumeration of `P^n(GF(q))`.
//!
//! Points are normalized (first nonzero coordinate is 1) and indexed so that
//! index order equals lexicographic order of the normalized coordinates. All
//! parallel searches return their hits sorted by index.

use rayon::prelude::*;

use std::collections::HashMap;

use crate::arith::{projective_space_size, Field, Gf};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;

#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    q: u64,
    n: usize,
    /// `offsets[j]` is the first index of points whose leading 1 sits at `n - j`.
    offsets: Vec<u64>,
    size: u64,
}

impl ProjectiveSpace {
    pub fn new(field: &Gf, n: usize) -> Result<Self> {
        let q = field.order() as u64;
        let size = projective_space_size(q as u128, n as u32);
        if size > u64::MAX as u128 / 2 {
            return Err(Error::BudgetExceeded {
                required: size,
                budget: u64::MAX as u128 / 2,
            });
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0u64;
        for j in 0..=n {
            offsets.push(acc);
            acc += q.pow(j as u32);
        }
        Ok(ProjectiveSpace {
            q,
            n,
            offsets,
            size: size as u64,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn check_budget(&self, budget: u128) -> Result<()> {
        if self.size as u128 > budget {
            Err(Error::BudgetExceeded {
                required: self.size as u128,
                budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn point(&self, idx: u64) -> Vec<u32> {
        let mut out = vec![0u32; self.n + 1];
        self.point_into(idx, &mut out);
        out
    }

    pub fn point_into(&self, idx: u64, out: &mut [u32]) {
        debug_assert!(idx < self.size);
        let j = match self.offsets.binary_search(&idx) {
            Ok(j) => j,
            Err(j) => j - 1,
        };
        let lead = self.n - j;
        let mut rest = idx - self.offsets[j];
        out.iter_mut().for_each(|c| *c = 0);
        out[lead] = 1;
        for i in (lead + 1..=self.n).rev() {
            out[i] = (rest % self.q) as u32;
            rest /= self.q;
        }
    }

    /// Index of an already-normalized point.
    pub fn index_of(&self, coords: &[u32]) -> u64 {
        let lead = coords
            .iter()
            .position(|&c| c != 0)
            .expect("projective point is nonzero");
        let j = self.n - lead;
        let tail = coords[lead + 1..]
            .iter()
            .fold(0u64, |acc, &c| acc * self.q + c as u64);
        self.offsets[j] + tail
    }

    /// All points satisfying `pred`, in index order.
    pub fn par_filter<P>(&self, pred: P) -> Vec<Vec<u32>>
    where
        P: Fn(&[u32]) -> bool + Sync,
    {
        const CHUNK: u64 = 4096;
        let chunks = self.size.div_ceil(CHUNK);
        let mut hits: Vec<(u64, Vec<u32>)> = (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(self.size);
                let mut buf = vec![0u32; self.n + 1];
                let mut found = Vec::new();
                for idx in start..end {
                    self.point_into(idx, &mut buf);
                    if pred(&buf) {
                        found.push((idx, buf.clone()));
                    }
                }
                found
            })
            .collect();
        hits.sort_by_key(|(i, _)| *i);
        hits.into_iter().map(|(_, p)| p).collect()
    }

    /// Visits every point in index order, chunk by chunk, with scratch state
    /// created once per chunk; outputs are concatenated in index order.
    pub fn par_scan<T, S, I, V>(&self, init: I, visit: V) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync,
        V: Fn(&mut S, &[u32], &mut Vec<T>) + Sync,
    {
        const CHUNK: u64 = 8192;
        let chunks = self.size.div_ceil(CHUNK);
        let parts: Vec<Vec<T>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(self.size);
                let mut state = init();
                let mut buf = vec![0u32; self.n + 1];
                let mut out = Vec::new();
                for idx in start..end {
                    self.point_into(idx, &mut buf);
                    visit(&mut state, &buf, &mut out);
                }
                out
            })
            .collect();
        parts.into_iter().flatten().collect()
    }
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn normalize_gf(field: &Gf, v: &mut [u32]) -> bool {
    let Some(lead) = v.iter().position(|&c| c != 0) else {
        return false;
    };
    let inv = field.inv_fast(v[lead]).expect("nonzero");
    for c in v[lead..].iter_mut() {
        *c = field.mul_fast(*c, inv);
    }
    true
}

/// A form over `GF(q)` flattened for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledForm {
    nvars: usize,
    degree: usize,
    terms: Vec<(u32, Vec<u8>)>,
}

impl CompiledForm {
    pub fn new(poly: &MultiPoly<Gf>) -> Self {
        CompiledForm {
            nvars: poly.nvars(),
            degree: poly.degree() as usize,
            terms: poly
                .terms()
                .map(|(e, c)| (*c, e.0.iter().map(|&k| k as u8).collect()))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, field: &Gf, x: &[u32]) -> u32 {
        let mut acc = 0u32;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = field.mul_fast(t, field.pow_fast(*xi, k as u64));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = field.add_fast(acc, t);
        }
        acc
    }

    /// Evaluation with precomputed powers: `powers[i][k] = x_i^k`.
    pub fn eval_powers(&self, field: &Gf, powers: &[Vec<u32>]) -> u32 {
        let mut acc = 0u32;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = field.mul_fast(t, powers[i][k as usize]);
                }
            }
            acc = field.add_fast(acc, t);
        }
        acc
    }

    /// Coefficients (low degree first) of the univariate polynomial obtained by
    /// fixing every variable except `free` to the given powers.
    pub fn univariate_in(&self, field: &Gf, powers: &[Vec<u32>], free: usize, out: &mut Vec<u32>) {
        out.clear();
        out.resize(self.degree + 1, 0);
        for (c, e) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if i != free && k > 0 {
                    t = field.mul_fast(t, powers[i][k as usize]);
                }
            }
            let slot = e[free] as usize;
            out[slot] = field.add_fast(out[slot], t);
        }
    }

    pub fn max_exponent(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(_, e)| e.iter().map(|&k| k as usize))
            .max()
            .unwrap_or(0)
    }
}

/// `powers[i][k] = x_i^k` for `k <= max_exp`.
pub fn power_table(field: &Gf, x: &[u32], max_exp: usize, powers: &mut Vec<Vec<u32>>) {
    powers.resize(x.len(), Vec::new());
    for (row, &xi) in powers.iter_mut().zip(x) {
        row.clear();
        let mut v = 1u32;
        for _ in 0..=max_exp {
            row.push(v);
            v = field.mul_fast(v, xi);
        }
    }
}

/// Common zeros in `P^{n-1}(GF(q))` of a list of forms.
///
/// Points `(x', t)` are scanned by fixing the normalized prefix `x'` and
/// taking the gcd of the forms as univariate polynomials in the last
/// variable; roots are searched only when that gcd is nonconstant.
pub struct CommonZeros {
    field: Gf,
    nvars: usize,
    max_degree: usize,
    /// Monomials of degree `<= max_degree` in the prefix variables, as
    /// `(parent index, variable)`, the empty monomial first.
    monomials: Vec<(usize, usize)>,
    /// Per form: `(power of the last variable, prefix monomial, coefficient)`.
    forms: Vec<Vec<(usize, usize, u32)>>,
}

impl CommonZeros {
    pub fn new(field: &Gf, nvars: usize, forms: &[MultiPoly<Gf>]) -> Result<Self> {
        if nvars < 2 {
            return Err(Error::invalid("need at least 2 variables"));
        }
        if let Some(f) = forms.iter().find(|f| f.nvars() != nvars) {
            return Err(Error::dimension(format!("form in {} variables, expected {nvars}", f.nvars())));
        }
        for f in forms {
            field.check_same(f.field())?;
        }
        let m = nvars - 1;
        let max_degree = forms.iter().map(|f| f.degree() as usize).max().unwrap_or(0);
        let mut monomials = vec![(0usize, 0usize)];
        let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
        index.insert(vec![0; m], 0);
        let mut layer = vec![vec![0u16; m]];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for e in &layer {
                let parent = index[e];
                // extend at or after the last used variable so each monomial appears once
                let first = e.iter().rposition(|&k| k > 0).unwrap_or(0);
                for v in first..m {
                    let mut child = e.clone();
                    child[v] += 1;
                    index.insert(child.clone(), monomials.len());
                    monomials.push((parent, v));
                    next.push(child);
                }
            }
            layer = next;
        }
        let forms = forms
            .iter()
            .map(|g| {
                g.terms()
                    .map(|(e, c)| (e.0[m] as usize, index[&e.0[..m].to_vec()], *c))
                    .collect()
            })
            .collect();
        Ok(CommonZeros {
            field: field.clone(),
            nvars,
            max_degree,
            monomials,
            forms,
        })
    }

    fn monomial_values(&self, prefix: &[u32], vals: &mut Vec<u32>) {
        vals.clear();
        vals.push(1);
        for &(parent, v) in &self.monomials[1..] {
            vals.push(self.field.mul_fast(vals[parent], prefix[v]));
        }
    }

    fn univariate(&self, i: usize, vals: &[u32], out: &mut Vec<u32>) {
        out.clear();
        out.resize(self.max_degree + 1, 0);
        for &(k, mono, c) in &self.forms[i] {
            out[k] = self.field.add_fast(out[k], self.field.mul_fast(c, vals[mono]));
        }
        univariate::trim(out);
    }

    /// Values of `t` with `(prefix, t)` a common zero.
    fn roots_over(&self, prefix: &[u32], scratch: &mut Scratch) -> Vec<u32> {
        let Scratch { vals, g, u } = scratch;
        self.monomial_values(prefix, vals);
        g.clear();
        for i in 0..self.forms.len() {
            if g.len() == 1 {
                return Vec::new();
            }
            self.univariate(i, vals, u);
            *g = univariate::gcd(&self.field, g, u);
        }
        match univariate::roots(&self.field, g) {
            Some(r) => r,
            None => (0..self.field.order()).collect(),
        }
    }

    pub fn space_size(&self) -> u128 {
        projective_space_size(self.field.order() as u128, self.nvars as u32 - 1)
    }

    /// All common zeros, in lexicographic order of normalized coordinates.
    pub fn run(&self, budget: u128) -> Result<Vec<Vec<u32>>> {
        let required = self.space_size();
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let m = self.nvars - 1;
        let mut found = Vec::new();
        let mut scratch = Scratch::default();
        let zero_prefix = vec![0u32; m];
        self.monomial_values(&zero_prefix, &mut scratch.vals);
        if (0..self.forms.len()).all(|i| {
            self.univariate(i, &scratch.vals, &mut scratch.u);
            univariate::eval(&self.field, &scratch.u, 1) == 0
        }) {
            let mut apex = vec![0u32; self.nvars];
            apex[m] = 1;
            found.push(apex);
        }
        let space = ProjectiveSpace::new(&self.field, m - 1)?;
        found.extend(space.par_scan(Scratch::default, |scratch, prefix, out| {
            for t in self.roots_over(prefix, scratch) {
                let mut p = prefix.to_vec();
                p.push(t);
                out.push(p);
            }
        }));
        Ok(found)
    }
}

#[derive(Default)]
struct Scratch {
    vals: Vec<u32>,
    g: Vec<u32>,
    u: Vec<u32>,
}

/// Dense univariate helpers over `GF(q)`, coefficients low degree first.
pub mod univariate {
    use crate::arith::Gf;

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn eval(field: &Gf, a: &[u32], t: u32) -> u32 {
        a.iter()
            .rev()
            .fold(0u32, |acc, &c| field.add_fast(field.mul_fast(acc, t), c))
    }

    fn rem_in_place(field: &Gf, a: &mut Vec<u32>, m: &[u32]) {
        let dm = m.len() - 1;
        let lead_inv = field.inv_fast(m[dm]).expect("nonzero divisor");
        while a.len() > dm {
            let da = a.len() - 1;
            let c = field.mul_fast(a[da], lead_inv);
            let shift = da - dm;
            for (i, &mi) in m.iter().enumerate() {
                a[shift + i] = field.sub_fast(a[shift + i], field.mul_fast(c, mi));
            }
            trim(a);
        }
    }

    /// Monic gcd; the empty vector stands for the zero polynomial.
    pub fn gcd(field: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            rem_in_place(field, &mut x, &y);
            std::mem::swap(&mut x, &mut y);
        }
        if let Some(&lead) = x.last() {
            let li = field.inv_fast(lead).expect("nonzero");
            for c in x.iter_mut() {
                *c = field.mul_fast(*c, li);
            }
        }
        x
    }

    /// Roots in `GF(q)` by exhaustive evaluation; `None` for the zero polynomial.
    pub fn roots(field: &Gf, a: &[u32]) -> Option<Vec<u32>> {
        let mut a = a.to_vec();
        trim(&mut a);
        if a.is_empty() {
            return None;
        }
        if a.len() == 1 {
            return Some(Vec::new());
        }
        if a.len() == 2 {
            let r = field.mul_fast(field.neg_fast(a[0]), field.inv_fast(a[1]).expect("nonzero"));
            return Some(vec![r]);
        }
        Some((0..field.order()).filter(|&t| eval(field, &a, t) == 0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips_in_lex_order() {
        let f = Gf::prime(3).unwrap();
        let ps = ProjectiveSpace::new(&f, 2).unwrap();
        assert_eq!(ps.size(), 13);
        let pts: Vec<_> = (0..ps.size()).map(|i| ps.point(i)).collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(ps.index_of(p), i as u64);
        }
        assert_eq!(pts[0], vec![0, 0, 1]);
        assert_eq!(pts[12], vec![1, 2, 2]);
    }

    #[test]
    fn par_filter_is_ordered() {
        let f = Gf::prime(5).unwrap();
        let ps = ProjectiveSpace::new(&f, 3).unwrap();
        let hits = ps.par_filter(|x| x[0] == 1 && x[3] == 2);
        assert_eq!(hits.len(), 25);
        assert!(hits.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn common_zeros_match_brute_force() {
        use crate::poly::parse_poly;
        let f = Gf::prime(7).unwrap();
        let forms = [
            parse_poly(&f, "x0*x1 - x2*x3", 4).unwrap(),
            parse_poly(&f, "x0^2 + x1^2 - x3^2 + 3*x2*x3", 4).unwrap(),
        ];
        let fast = CommonZeros::new(&f, 4, &forms).unwrap().run(u128::MAX).unwrap();
        let ps = ProjectiveSpace::new(&f, 3).unwrap();
        let slow = ps.par_filter(|x| forms.iter().all(|g| g.eval(x).unwrap() == 0));
        assert_eq!(fast, slow);
        assert!(!fast.is_empty());
    }

    #[test]
    fn univariate_gcd_and_roots() {
        let f = Gf::prime(7).unwrap();
        // (t-1)(t-2) = t^2 - 3t + 2 ; (t-1)(t-3) = t^2 - 4t + 3
        let a = vec![2, 4, 1];
        let b = vec![3, 3, 1];
        assert_eq!(univariate::gcd(&f, &a, &b), vec![6, 1]);
        assert_eq!(univariate::roots(&f, &a).unwrap(), vec![1, 2]);
        assert!(univariate::roots(&f, &[0, 0]).is_none());
    }
}
