use itertools::Itertools;
use serde::Serialize;

use super::{
    bese_invariants, condition_i_bound, condition_iii_bound, condition_iii_classes, h0_ruled, BeseInvariants,
    RuledClass,
};
use crate::arith::{ExactMatrix, Field};
use crate::error::{Error, Result};

/// A point of `F_r` in normalized Cox coordinates `(t0, t1, x0, x1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuledPoint<F: Field> {
    r: u32,
    coords: Vec<F::Elem>,
}

impl<F: Field> RuledPoint<F> {
    pub fn new(field: &F, r: u32, t0: F::Elem, t1: F::Elem, x0: F::Elem, x1: F::Elem) -> Result<Self> {
        let mut c = vec![t0, t1, x0, x1];
        if c.iter().any(|v| !field.contains(v)) {
            return Err(Error::ForeignElement(field.spec()));
        }
        let lt = c[..2]
            .iter()
            .position(|v| !field.is_zero(v))
            .ok_or_else(|| Error::invalid("fiber coordinates (t0, t1) vanish"))?;
        let lx = c[2..]
            .iter()
            .position(|v| !field.is_zero(v))
            .ok_or_else(|| Error::invalid("section coordinates (x0, x1) vanish"))?
            + 2;
        // (t, x0, x1) ~ (l t, l^r mu x0, mu x1)
        let lam = field.inv(&c[lt]).expect("nonzero");
        let lam_r = field.pow(&lam, r as u64);
        c[0] = field.mul(&c[0], &lam);
        c[1] = field.mul(&c[1], &lam);
        c[2] = field.mul(&c[2], &lam_r);
        let mu = field.inv(&c[lx]).expect("nonzero");
        c[2] = field.mul(&c[2], &mu);
        c[3] = field.mul(&c[3], &mu);
        Ok(RuledPoint { r, coords: c })
    }

    /// `((t0:t1), (x0:x1))` on `P^1 x P^1`.
    pub fn on_p1xp1(field: &F, t: [F::Elem; 2], x: [F::Elem; 2]) -> Result<Self> {
        let [t0, t1] = t;
        let [x0, x1] = x;
        Self::new(field, 0, t0, t1, x0, x1)
    }

    /// Preimage on `F_2` of a point `(w:y0:y1:y2)` of the cone `y0*y2 = y1^2`
    /// under `(t, x) -> (x0 : x1 t0^2 : x1 t0 t1 : x1 t1^2)`; the vertex
    /// `(1:0:0:0)` has no single preimage.
    pub fn from_cone_point(field: &F, y: &[F::Elem]) -> Result<Self> {
        if y.len() != 4 {
            return Err(Error::dimension("cone points have four coordinates"));
        }
        let cone = field.sub(&field.mul(&y[1], &y[3]), &field.mul(&y[2], &y[2]));
        if !field.is_zero(&cone) {
            return Err(Error::invalid("point is not on the cone y0*y2 = y1^2"));
        }
        let (t0, t1, x1) = if !field.is_zero(&y[1]) {
            (y[1].clone(), y[2].clone(), field.inv(&y[1]).expect("nonzero"))
        } else if !field.is_zero(&y[3]) {
            (field.zero(), field.one(), y[3].clone())
        } else {
            return Err(Error::invalid("the cone vertex has no unique preimage"));
        };
        // x1 * t0^2 = y0 with t0 = y0 gives x1 = 1/y0
        Self::new(field, 2, t0, t1, y[0].clone(), x1)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    /// Values of the monomial sections of `c` at this point.
    fn section_values(&self, field: &F, sections: &[[u32; 4]]) -> Vec<F::Elem> {
        sections
            .iter()
            .map(|e| {
                e.iter()
                    .zip(&self.coords)
                    .fold(field.one(), |acc, (&k, v)| field.mul(&acc, &field.pow(v, k as u64)))
            })
            .collect()
    }
}

/// Exponents `(i, j, c, e)` of `t0^i t1^j x0^c x1^e` spanning `H^0(F_r, O(class))`.
pub fn monomial_sections(r: u32, class: RuledClass) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    if class.a < 0 {
        return out;
    }
    for c in (0..=class.a).rev() {
        let tdeg = class.b - r as i64 * c;
        if tdeg < 0 {
            continue;
        }
        for i in (0..=tdeg).rev() {
            out.push([i as u32, (tdeg - i) as u32, c as u32, (class.a - c) as u32]);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct BeseInstance<F: Field> {
    field: F,
    r: u32,
    d: RuledClass,
    points: Vec<RuledPoint<F>>,
}

impl<F: Field> BeseInstance<F> {
    pub fn new(field: &F, r: u32, d: RuledClass, points: Vec<RuledPoint<F>>) -> Result<Self> {
        if r != 0 && r != 2 {
            return Err(Error::invalid(format!("only F_0 and F_2 are supported, got r = {r}")));
        }
        if d.a <= 0 || d.b <= 0 {
            return Err(Error::invalid(format!("class ({}, {}) needs a, b > 0", d.a, d.b)));
        }
        for (i, p) in points.iter().enumerate() {
            if p.r != r {
                return Err(Error::invalid(format!("point {i} lies on F_{} instead of F_{r}", p.r)));
            }
            if let Some(j) = points[..i].iter().position(|q| q == p) {
                return Err(Error::invalid(format!("points {j} and {i} coincide")));
            }
        }
        Ok(BeseInstance {
            field: field.clone(),
            r,
            d,
            points,
        })
    }

    pub fn points(&self) -> &[RuledPoint<F>] {
        &self.points
    }

    /// First subset (lexicographic) of size `m` lying on a curve of class `c`.
    fn subset_on_curve(&self, c: RuledClass, m: usize) -> Option<Vec<usize>> {
        let sections = monomial_sections(self.r, c);
        if sections.is_empty() || m > self.points.len() {
            return None;
        }
        let values: Vec<Vec<F::Elem>> = self
            .points
            .iter()
            .map(|p| p.section_values(&self.field, &sections))
            .collect();
        (0..self.points.len()).combinations(m).find(|s| {
            if s.is_empty() {
                return true;
            }
            let rows = s.iter().map(|&i| values[i].clone()).collect();
            let mat = ExactMatrix::from_rows(&self.field, rows).expect("consistent rows");
            mat.rank() < sections.len()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeseEntry {
    pub condition: String,
    pub class: [i64; 2],
    pub bound: i64,
    pub value: Option<i64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_subset: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeseReport {
    pub r: u32,
    pub d: [i64; 2],
    pub n: usize,
    pub invariants: BeseInvariants,
    pub passed: bool,
    pub entries: Vec<BeseEntry>,
    /// Index into `entries` of the first failed condition.
    pub first_violation: Option<usize>,
}

/// Evaluates conditions (i)-(iii) on an instance; (iii) tests every subset
/// of size `bound + 1` against every class in range.
pub fn bese_check<F: Field>(inst: &BeseInstance<F>) -> Result<BeseReport> {
    let inv = bese_invariants(inst.r, inst.d)?;
    let n = inst.points.len();
    let mut entries = Vec::new();
    let b1 = condition_i_bound(&inv);
    entries.push(BeseEntry {
        condition: "i".into(),
        class: [inst.d.a, inst.d.b],
        bound: b1,
        value: Some(n as i64),
        passed: n as i64 <= b1,
        violating_subset: None,
    });
    let b2 = 7 + 4 * inv.h;
    entries.push(BeseEntry {
        condition: "ii".into(),
        class: [inst.d.a, inst.d.b],
        bound: b2,
        value: Some(inv.d2),
        passed: inv.d2 >= b2,
        violating_subset: None,
    });
    for c in condition_iii_classes(inst.r, inst.d) {
        let bound = condition_iii_bound(inst.r, inst.d, c);
        let m = (bound + 1).max(0) as usize;
        let hit = if h0_ruled(inst.r, c) == 0 {
            None
        } else {
            inst.subset_on_curve(c, m)
        };
        entries.push(BeseEntry {
            condition: "iii".into(),
            class: [c.a, c.b],
            bound,
            value: None,
            passed: hit.is_none(),
            violating_subset: hit,
        });
    }
    let first_violation = entries.iter().position(|e| !e.passed);
    Ok(BeseReport {
        r: inst.r,
        d: [inst.d.a, inst.d.b],
        n,
        invariants: inv,
        passed: first_violation.is_none(),
        entries,
        first_violation,
    })
}
