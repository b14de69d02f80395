//! Finite fields `GF(p^k)` for odd primes `p`.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, where
//! `c_i` is the coefficient of `a^i` and `a` is a root of the defining modulus.
//! The modulus is the least monic irreducible polynomial of degree `k`, ordering
//! candidates by that same base-`p` encoding of their lower coefficients, so the
//! encoding of every element is reproducible across runs.
//!
//! Multiplication goes through exp/log tables over a fixed primitive element.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use super::field::{Field, FieldSpec};
use super::upoly::{self, UPoly};
use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Clone)]
pub struct Gf(Arc<Tables>);

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    place: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn digits(mut x: u32, p: u32, k: u32) -> UPoly {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push((x % p) as u64);
        x /= p;
    }
    upoly::trim(&mut out);
    out
}

fn undigits(d: &UPoly, p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
}

impl Gf {
    /// Builds `GF(p^k)`. Characteristic 2 is rejected.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::UnsupportedField(
                "characteristic 2 is not supported".into(),
            ));
        }
        if k == 0 {
            return Err(Error::UnsupportedField("extension degree 0".into()));
        }
        let q = (p as u128).pow(k);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::UnsupportedField(format!(
                "GF({p}^{k}) has {q} elements, above the table limit {MAX_FIELD_ORDER}"
            )));
        }
        let p32 = p as u32;
        let q = q as u32;
        let modulus = least_irreducible(p, k);
        let mod_poly: UPoly = modulus.iter().map(|&c| c as u64).collect();

        let slow_mul = |a: u32, b: u32| -> u32 {
            let r = upoly::mul_mod(&digits(a, p32, k), &digits(b, p32, k), &mod_poly, p);
            undigits(&r, p32)
        };
        let slow_pow = |a: u32, e: u64| -> u32 {
            let r = upoly::pow_poly_mod(&digits(a, p32, k), e as u128, &mod_poly, p);
            undigits(&r, p32)
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q as usize - 1) {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = slow_mul(x, generator);
        }
        for i in 0..(q as usize - 1) {
            exp[i + q as usize - 1] = exp[i];
        }

        let mut place = Vec::with_capacity(k as usize);
        let mut w = 1u32;
        for _ in 0..k {
            place.push(w);
            w = w.saturating_mul(p32);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d = digits(a, p32, k);
                let nd: UPoly = d.iter().map(|&c| (p - c) % p).collect();
                undigits(&nd, p32)
            })
            .collect();

        let mut tables = Tables {
            p: p32,
            k,
            q,
            modulus,
            exp,
            log,
            neg,
            add: None,
            place,
        };
        if k > 1 && q <= ADD_TABLE_LIMIT {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = tables.add_digits(a, b);
                }
            }
            tables.add = Some(add);
        }
        Ok(Gf(Arc::new(tables)))
    }

    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Self> {
        Gf::new(p, 1)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Self> {
        match spec {
            FieldSpec::Finite { p, k } => Gf::new(p, k),
            FieldSpec::Rationals => Err(Error::UnsupportedField(
                "rationals are not a finite field".into(),
            )),
        }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Coefficients of the defining modulus, constant term first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Coefficient digits of an element in the power basis `1, a, ..., a^{k-1}`.
    pub fn coefficients(&self, x: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.k as usize);
        let mut x = x;
        for _ in 0..self.0.k {
            out.push(x % self.0.p);
            x /= self.0.p;
        }
        out
    }

    pub fn from_coefficients(&self, c: &[u32]) -> u32 {
        c.iter()
            .zip(&self.0.place)
            .fold(0u32, |acc, (&ci, &w)| acc + (ci % self.0.p) * w)
    }

    #[inline]
    pub fn add_fast(&self, a: u32, b: u32) -> u32 {
        let t = &*self.0;
        if t.k == 1 {
            let s = a + b;
            if s >= t.p {
                s - t.p
            } else {
                s
            }
        } else if let Some(add) = &t.add {
            add[(a * t.q + b) as usize]
        } else {
            t.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg_fast(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub_fast(&self, a: u32, b: u32) -> u32 {
        self.add_fast(a, self.neg_fast(b))
    }

    #[inline]
    pub fn mul_fast(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.0;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv_fast(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let t = &*self.0;
        let l = t.log[a as usize];
        Some(if l == 0 {
            1
        } else {
            t.exp[(t.q - 1 - l) as usize]
        })
    }

    pub fn pow_fast(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let t = &*self.0;
        let n = (t.q - 1) as u64;
        let l = (t.log[a as usize] as u64 * (e % n)) % n;
        t.exp[l as usize]
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow_fast(a, self.0.p as u64)
    }

    /// True when `a` lies in the subfield `GF(p^d)`.
    pub fn in_subfield(&self, a: u32, d: u32) -> bool {
        self.pow_fast(a, (self.0.p as u64).pow(d)) == a
    }

    /// Embedding of `sub` into `self`; requires `sub.k | self.k` and equal `p`.
    pub fn embedding_from(&self, sub: &Gf) -> Result<Embedding> {
        if sub.p() != self.p() || self.k() % sub.k() != 0 {
            return Err(Error::UnsupportedField(format!(
                "{} does not embed into {}",
                sub.spec(),
                self.spec()
            )));
        }
        let images = if sub.k() == 1 {
            vec![1]
        } else {
            let m = sub.modulus();
            let root = (0..self.order())
                .find(|&x| {
                    let mut acc = 0u32;
                    for &c in m.iter().rev() {
                        acc = self.add_fast(self.mul_fast(acc, x), c);
                    }
                    acc == 0
                })
                .ok_or_else(|| Error::Inconsistency("modulus has no root in extension".into()))?;
            let mut images = Vec::with_capacity(sub.k() as usize);
            let mut w = 1u32;
            for _ in 0..sub.k() {
                images.push(w);
                w = self.mul_fast(w, root);
            }
            images
        };
        Ok(Embedding {
            from: sub.clone(),
            to: self.clone(),
            images,
        })
    }
}

impl Tables {
    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        for &w in &self.place {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * w;
            a /= self.p;
            b /= self.p;
        }
        out
    }
}

/// Monic irreducible polynomial of degree `k` over `Z/p`, constant term first.
fn least_irreducible(p: u64, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    for code in 0..count {
        let mut f: UPoly = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if f[0] == 0 {
            continue;
        }
        if upoly::is_irreducible(&f, p) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}

impl Eq for Gf {}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

impl Field for Gf {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Finite {
            p: self.0.p as u64,
            k: self.0.k,
        }
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_fast(*a, *b)
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.sub_fast(*a, *b)
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_fast(*a, *b)
    }

    fn neg(&self, a: &u32) -> u32 {
        self.neg_fast(*a)
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        self.inv_fast(*a)
    }

    fn from_bigint(&self, n: &BigInt) -> u32 {
        let p = BigInt::from(self.0.p);
        let r = n.mod_floor(&p);
        debug_assert!(!r.is_negative());
        r.to_u32().expect("residue fits in u32")
    }

    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    fn contains(&self, a: &u32) -> bool {
        *a < self.0.q
    }

    fn format(&self, a: &u32) -> String {
        if self.0.k == 1 || *a < self.0.p {
            return a.to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coefficients(*a).iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.0.q)
    }

    fn generator(&self) -> Option<u32> {
        (self.0.k > 1).then_some(self.0.p)
    }

    fn as_finite(&self) -> Option<&Gf> {
        Some(self)
    }

    fn to_finite_elem(&self, a: &u32) -> Option<u32> {
        Some(*a)
    }

    fn from_finite_elem(&self, a: u32) -> Option<u32> {
        (a < self.0.q).then_some(a)
    }

    fn pow(&self, a: &u32, e: u64) -> u32 {
        self.pow_fast(*a, e)
    }
}

/// Field homomorphism `GF(p^d) -> GF(p^k)`, `d | k`.
#[derive(Clone, Debug)]
pub struct Embedding {
    from: Gf,
    to: Gf,
    images: Vec<u32>,
}

impl Embedding {
    pub fn source(&self) -> &Gf {
        &self.from
    }

    pub fn target(&self) -> &Gf {
        &self.to
    }

    pub fn map(&self, x: u32) -> u32 {
        if self.from.k() == 1 {
            return x;
        }
        self.from
            .coefficients(x)
            .iter()
            .zip(&self.images)
            .fold(0u32, |acc, (&c, &w)| {
                self.to.add_fast(acc, self.to.mul_fast(c, w))
            })
    }
}
