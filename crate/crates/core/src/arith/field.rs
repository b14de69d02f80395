use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Serialize, Serializer};

use super::gf::Gf;
use crate::error::{Error, Result};

/// Descriptor of an exact field: the rationals or a finite field `GF(p^k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Finite { p: u64, k: u32 },
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Finite { p, .. } => *p,
        }
    }

    /// Number of elements, `None` for the rationals or when it overflows.
    pub fn order(&self) -> Option<u128> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Finite { p, k } => (*p as u128).checked_pow(*k),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Finite { p, k: 1 } => write!(f, "GF({p})"),
            FieldSpec::Finite { p, k } => write!(f, "GF({p}^{k})"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Accepts `Q`, `q`, `QQ`, `p=11`, `p=11,k=2` (spaces allowed around separators).
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "Q" | "q" | "QQ" | "rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let mut p = None;
        let mut k = 1u32;
        for part in t.split(|c: char| c == ',' || c.is_whitespace()) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("bad field component `{part}`")))?;
            let value = value.trim();
            match key.trim() {
                "p" => {
                    p = Some(value.parse::<u64>().map_err(|_| {
                        Error::invalid(format!("bad characteristic `{value}`"))
                    })?)
                }
                "k" => {
                    k = value
                        .parse::<u32>()
                        .map_err(|_| Error::invalid(format!("bad extension degree `{value}`")))?
                }
                other => return Err(Error::invalid(format!("unknown field key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::invalid(format!("field spec `{s}` lacks p=")))?;
        if k == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        Ok(FieldSpec::Finite { p, k })
    }
}

/// An exact field. Elements are plain values; all arithmetic goes through the
/// field object, which carries whatever tables the representation needs.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Canonical-membership test: false for values that belong to some other field.
    fn contains(&self, a: &Self::Elem) -> bool;

    fn format(&self, a: &Self::Elem) -> String;

    /// Uniform element for finite fields; a small integer for the rationals.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// The adjoined generator `a` of a proper extension, if any.
    fn generator(&self) -> Option<Self::Elem> {
        None
    }

    fn as_finite(&self) -> Option<&Gf> {
        None
    }

    fn to_finite_elem(&self, _a: &Self::Elem) -> Option<u32> {
        None
    }

    fn from_finite_elem(&self, _a: u32) -> Option<Self::Elem> {
        None
    }

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem> {
        let d = self.from_bigint(den);
        let inv = self.inv(&d).ok_or_else(|| {
            Error::invalid(format!("denominator {den} vanishes in {}", self.spec()))
        })?;
        Ok(self.mul(&self.from_bigint(num), &inv))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                expected: self.spec(),
                found: other.spec(),
            })
        }
    }
}
