//! Homogeneous multivariate polynomials with exact coefficients.

mod parse;
mod subspace;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{ExactMatrix, Field};
use crate::error::{Error, Result};

pub use parse::{parse_poly, parse_scalar};
pub use subspace::LinearSubspaceParam;

/// Exponent vector of a monomial.
///
/// The ordering is *descending* graded-lex: `a < b` when `a` is the larger
/// monomial (higher total degree, then lexicographically larger with `x0`
/// most significant). Sorted containers therefore list the leading term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u16>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Exponent(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn product(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `x^e` evaluated at `x`.
    pub fn eval<F: Field>(&self, field: &F, x: &[F::Elem]) -> F::Elem {
        self.0
            .iter()
            .zip(x)
            .filter(|(&e, _)| e > 0)
            .fold(field.one(), |acc, (&e, xi)| {
                field.mul(&acc, &field.pow(xi, e as u64))
            })
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree `d` in `nvars` variables, leading
/// monomial first. There are `binomial(nvars + d - 1, d)` of them.
pub fn monomial_basis(nvars: usize, d: u32) -> Vec<Exponent> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Exponent>) {
        if i + 1 == nvars {
            cur.push(left as u16);
            out.push(Exponent(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u16);
            rec(nvars, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Exponent(Vec::new()));
        }
        return out;
    }
    rec(nvars, 0, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Homogeneous polynomial: sparse map from exponent to nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<F: Field> {
    field: F,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: &F, nvars: usize, degree: u32) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars, 0);
        if !field.is_zero(&c) {
            p.terms.insert(Exponent::zero(nvars), c);
        }
        p
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Exponent::unit(nvars, i), field.one())
    }

    pub fn monomial(field: &F, exp: Exponent, coef: F::Elem) -> Self {
        let mut p = Self::zero(field, exp.nvars(), exp.degree());
        if !field.is_zero(&coef) {
            p.terms.insert(exp, coef);
        }
        p
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    /// All exponents must have length `nvars` and total degree `degree`.
    pub fn from_terms(
        field: &F,
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponent, F::Elem)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, nvars, degree);
        for (e, c) in terms {
            if e.nvars() != nvars {
                return Err(Error::dimension(format!(
                    "exponent of length {} in a {nvars}-variable form",
                    e.nvars()
                )));
            }
            if e.degree() != degree {
                return Err(Error::NotHomogeneous(format!(
                    "term of degree {} in a form of degree {degree}",
                    e.degree()
                )));
            }
            if !field.contains(&c) {
                return Err(Error::ForeignElement(field.spec()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Form with the given coefficients on `monomial_basis(nvars, degree)`.
    pub fn from_coefficients(field: &F, nvars: usize, degree: u32, coeffs: &[F::Elem]) -> Self {
        let basis = monomial_basis(nvars, degree);
        debug_assert_eq!(basis.len(), coeffs.len());
        let mut p = Self::zero(field, nvars, degree);
        for (e, c) in basis.into_iter().zip(coeffs) {
            p.add_term(e, c.clone());
        }
        p
    }

    /// Coefficients on `monomial_basis(nvars, degree)`.
    pub fn coefficient_vector(&self) -> Vec<F::Elem> {
        monomial_basis(self.nvars, self.degree)
            .iter()
            .map(|e| self.coefficient(e))
            .collect()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &F::Elem)> {
        self.terms.iter().next()
    }

    pub fn coefficient(&self, e: &Exponent) -> F::Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn add_term(&mut self, e: Exponent, c: F::Elem) {
        let f = &self.field;
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = f.add(v, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.field.check_same(&other.field)?;
        if self.nvars != other.nvars {
            return Err(Error::dimension(format!(
                "forms in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f, self.nvars, self.degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = f.mul(v, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars, self.degree + other.degree);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.product(eb), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn eval(&self, x: &[F::Elem]) -> Result<F::Elem> {
        if x.len() != self.nvars {
            return Err(Error::dimension(format!(
                "point of length {} for a form in {} variables",
                x.len(),
                self.nvars
            )));
        }
        let f = &self.field;
        Ok(self.terms.iter().fold(f.zero(), |acc, (e, c)| {
            f.add(&acc, &f.mul(c, &e.eval(f, x)))
        }))
    }

    pub fn partial(&self, i: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            d.0[i] -= 1;
            out.add_term(d, f.mul(c, &f.from_i64(k as i64)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    pub fn gradient_at(&self, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.gradient().iter().map(|g| g.eval(x)).collect()
    }

    /// Matrix of second partials evaluated at `x`.
    pub fn hessian_matrix(&self, x: &[F::Elem]) -> Result<ExactMatrix<F>> {
        if x.len() != self.nvars {
            return Err(Error::dimension(format!(
                "point of length {} for a form in {} variables",
                x.len(),
                self.nvars
            )));
        }
        let n = self.nvars;
        let mut h = ExactMatrix::zeros(&self.field, n, n);
        for i in 0..n {
            let di = self.partial(i);
            for j in i..n {
                let v = di.partial(j).eval(x)?;
                h.set(i, j, v.clone());
                h.set(j, i, v);
            }
        }
        Ok(h)
    }

    /// Substitutes `x_i -> forms[i]`, each a linear form in a common ring.
    pub fn compose_linear(&self, forms: &[MultiPoly<F>]) -> Result<Self> {
        if forms.len() != self.nvars {
            return Err(Error::dimension(format!(
                "{} substitutions for {} variables",
                forms.len(),
                self.nvars
            )));
        }
        let m = forms.first().map_or(0, |l| l.nvars);
        for l in forms {
            self.field.check_same(&l.field)?;
            if l.nvars != m || (l.degree != 1 && !l.is_zero()) {
                return Err(Error::Degree("substitutions must be linear forms".into()));
            }
        }
        let f = &self.field;
        let max_exp = self
            .terms
            .keys()
            .flat_map(|e| e.0.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let mut powers: Vec<Vec<MultiPoly<F>>> = Vec::with_capacity(self.nvars);
        for l in forms {
            let mut row = vec![Self::constant(f, m, f.one())];
            for k in 1..=max_exp {
                let next = row[k - 1].mul(l)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(f, m, self.degree);
        for (e, c) in &self.terms {
            let mut term = Self::constant(f, m, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize])?;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        out.degree = self.degree;
        Ok(out)
    }

    /// Pullback along a parametrized linear subspace: a form of the same degree
    /// in the subspace's parameters (possibly zero).
    pub fn restrict_to_subspace(&self, s: &LinearSubspaceParam<F>) -> Result<Self> {
        if s.ambient() != self.nvars {
            return Err(Error::dimension(format!(
                "subspace of a {}-dimensional space applied to a form in {} variables",
                s.ambient(),
                self.nvars
            )));
        }
        self.compose_linear(&s.linear_forms())
    }

    /// Same form viewed in more variables (new ones appended, unused).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut out = Self::zero(&self.field, nvars, self.degree);
        for (e, c) in &self.terms {
            let mut v = e.0.clone();
            v.resize(nvars, 0);
            out.terms.insert(Exponent(v), c.clone());
        }
        out
    }

    /// Applies a coefficient map into another field.
    pub fn map_coefficients<G: Field>(&self, target: &G, map: impl Fn(&F::Elem) -> G::Elem) -> MultiPoly<G> {
        let mut out = MultiPoly::zero(target, self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), map(c));
        }
        out
    }

    /// True when `self = c * other` for some nonzero scalar `c`.
    pub fn is_proportional_to(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || self.degree != other.degree {
            return false;
        }
        let (Some((ea, ca)), Some((eb, cb))) = (self.leading_term(), other.leading_term()) else {
            return self.is_zero() && other.is_zero();
        };
        if ea != eb {
            return false;
        }
        let f = &self.field;
        let ratio = f.div(ca, cb).expect("leading coefficient is nonzero");
        *self == other.scale(&ratio)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Square root `h` with `h^2 = self`, when one exists (characteristic != 2).
    pub fn sqrt(&self) -> Option<Self> {
        let f = &self.field;
        if self.is_zero() {
            return Some(Self::zero(f, self.nvars, self.degree / 2));
        }
        if self.degree % 2 == 1 {
            return None;
        }
        let (lead_e, lead_c) = self.leading_term()?;
        if lead_e.0.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let root_c = sqrt_scalar(f, lead_c)?;
        let root_e = Exponent(lead_e.0.iter().map(|e| e / 2).collect());
        let lead_root = Self::monomial(f, root_e.clone(), root_c.clone());
        let two_lead = f.add(&root_c, &root_c);
        let mut h = lead_root;
        let mut rem = self.sub(&h.mul(&h).ok()?).ok()?;
        // Each pass fixes the next term of h: LT(rem) = 2 LT(h) t.
        let bound = monomial_basis(self.nvars, self.degree / 2).len() + 1;
        for _ in 0..bound {
            let Some((re, rc)) = rem.leading_term() else {
                return Some(h);
            };
            let quot: Vec<u16> = re
                .0
                .iter()
                .zip(&root_e.0)
                .map(|(&a, &b)| a.checked_sub(b))
                .collect::<Option<Vec<_>>>()?;
            let t_e = Exponent(quot);
            // t must be a strictly smaller monomial than LT(h)
            if t_e <= root_e {
                return None;
            }
            let t_c = f.div(rc, &two_lead)?;
            let t = Self::monomial(f, t_e, t_c);
            // (h + t)^2 = h^2 + 2ht + t^2
            let delta = h.mul(&t).ok()?.scale(&f.from_i64(2)).add(&t.mul(&t).ok()?).ok()?;
            rem = rem.sub(&delta).ok()?;
            h = h.add(&t).ok()?;
        }
        rem.is_zero().then_some(h)
    }
}

fn sqrt_scalar<F: Field>(f: &F, c: &F::Elem) -> Option<F::Elem> {
    if f.is_one(c) {
        return Some(f.one());
    }
    if let Some(g) = f.as_finite() {
        let x = f.to_finite_elem(c)?;
        let r = (0..g.order()).find(|&r| g.mul_fast(r, r) == x)?;
        return f.from_finite_elem(r);
    }
    None
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = &self.field;
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mut coef = f.format(c);
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if idx == 0 {
                if negative {
                    write!(out, "-")?;
                }
            } else if negative {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            if coef.contains('+') {
                coef = format!("({coef})");
            }
            match (coef.as_str(), vars.is_empty()) {
                (_, true) => write!(out, "{coef}")?,
                ("1", false) => write!(out, "{}", vars.join("*"))?,
                (_, false) => write!(out, "{coef}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "MultiPoly[{}; deg {}]({self})", self.field.spec(), self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binomial, Gf, Rationals};

    fn q(s: &str, n: usize) -> MultiPoly<Rationals> {
        parse_poly(&Rationals, s, n).unwrap()
    }

    #[test]
    fn monomial_basis_counts_and_order() {
        assert_eq!(monomial_basis(5, 3).len(), 35);
        assert_eq!(monomial_basis(4, 3).len(), 20);
        assert_eq!(monomial_basis(2, 1), vec![Exponent(vec![1, 0]), Exponent(vec![0, 1])]);
        for n in 1..6 {
            for d in 0..5 {
                let b = monomial_basis(n, d);
                assert_eq!(b.len(), binomial(n + d as usize - 1, d as usize));
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn eval_examples() {
        let f = q("x0*x1", 5);
        let one = Rationals.one();
        let zero = Rationals.zero();
        let x = vec![one.clone(), one, zero.clone(), zero.clone(), zero.clone()];
        assert_eq!(f.eval(&x).unwrap(), Rationals.one());
        assert_eq!(q("x0^3 - 7*x2*x4^2", 5).eval(&vec![zero; 5]).unwrap(), Rationals.zero());
        assert!(f.eval(&[Rationals.one()]).is_err());
    }

    #[test]
    fn gradient_of_square() {
        let f = q("x0^2", 3);
        let g = f.gradient();
        assert_eq!(g[0].to_string(), "2*x0");
        assert!(g[1].is_zero() && g[2].is_zero());
        assert_eq!(g[1].degree(), 1);
    }

    #[test]
    fn hessian_of_cone() {
        let f = q("x0*x1 + x2*x3", 5);
        let x: Vec<_> = [0, 0, 0, 0, 1].iter().map(|&v| Rationals.from_i64(v)).collect();
        let h = f.hessian_matrix(&x).unwrap();
        assert_eq!(h.rank(), 4);
        assert!(h.mul_vec(&x).unwrap().iter().all(|v| Rationals.is_zero(v)));
        let g = q("(x0*x1)^2", 5);
        assert!(g.hessian_matrix(&x).unwrap().rank() < 4);
    }

    #[test]
    fn restriction_to_coordinate_subspace() {
        let field = Rationals;
        let cols: Vec<Vec<_>> = (0..4)
            .map(|j| (0..5).map(|i| field.from_i64((i == j) as i64)).collect())
            .collect();
        let s = LinearSubspaceParam::from_columns(&field, cols).unwrap();
        let r = q("x4", 5).restrict_to_subspace(&s).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.degree(), 1);

        let line = LinearSubspaceParam::from_columns(
            &field,
            vec![
                [1, 0, 0].iter().map(|&v| field.from_i64(v)).collect(),
                [0, 1, 1].iter().map(|&v| field.from_i64(v)).collect(),
            ],
        )
        .unwrap();
        let r = q("x0^2", 3).restrict_to_subspace(&line).unwrap();
        assert_eq!(r.to_string(), "x0^2");
    }

    #[test]
    fn sqrt_detects_squares() {
        let f = q("x0*x1 - x2^2", 3);
        let sq = f.mul(&f).unwrap();
        let r = sq.sqrt().unwrap();
        assert!(r.is_proportional_to(&f));
        assert!(q("x0^3*x1", 3).sqrt().is_none());
        assert!(q("x0^4 + x1^4", 3).sqrt().is_none());

        let g = Gf::prime(7).unwrap();
        let h = parse_poly(&g, "3*x0^2 + x1*x2", 3).unwrap();
        let s = h.mul(&h).unwrap().monic();
        assert!(s.sqrt().unwrap().is_proportional_to(&h));
    }

    #[test]
    fn extension_coefficients_print_and_parse() {
        let g = Gf::new(11, 2).unwrap();
        let a = g.generator().unwrap();
        let c = g.add(&a, &3);
        let f = MultiPoly::var(&g, 3, 0).scale(&c);
        let text = f.to_string();
        assert_eq!(text, "(a+3)*x0");
        assert_eq!(parse_poly(&g, &text, 3).unwrap(), f);
    }
}
