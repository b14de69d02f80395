//! Divisor classes on Hirzebruch surfaces `F_r`, the numerical conditions of
//! the Bese global-generation criterion, and cubic divisors on quadrics in `P^3`.
//!
//! Classes are written `a*s + b*f` with `s^2 = -r`, `s.f = 1`, `f^2 = 0`.
//! Points of `F_r` use Cox coordinates `(t0, t1, x0, x1)`: the fiber
//! coordinates `t` have class `f`, `x1` has class `s` and `x0` has class
//! `s + r f`, so `{x1 = 0}` is the negative section.

mod bese;
mod quadric;

use serde::Serialize;

pub use bese::{bese_check, BeseEntry, BeseInstance, BeseReport, RuledPoint};
pub use quadric::{separating_divisor_on_quadric, QuadricKind, SeparatingDivisor, VertexCase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RuledClass {
    pub a: i64,
    pub b: i64,
}

impl RuledClass {
    pub const FIBER: RuledClass = RuledClass { a: 0, b: 1 };
    pub const SECTION: RuledClass = RuledClass { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        RuledClass { a, b }
    }

    pub fn add(self, o: RuledClass) -> Self {
        RuledClass::new(self.a + o.a, self.b + o.b)
    }

    pub fn sub(self, o: RuledClass) -> Self {
        RuledClass::new(self.a - o.a, self.b - o.b)
    }

    pub fn scale(self, k: i64) -> Self {
        RuledClass::new(k * self.a, k * self.b)
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

pub fn pair_classes(r: u32, c1: RuledClass, c2: RuledClass) -> i64 {
    -(r as i64) * c1.a * c2.a + c1.a * c2.b + c2.a * c1.b
}

pub fn canonical_class(r: u32) -> RuledClass {
    RuledClass::new(-2, -(r as i64 + 2))
}

/// `h^0(F_r, O(c))`.
pub fn h0_ruled(r: u32, c: RuledClass) -> u64 {
    if c.a < 0 {
        return 0;
    }
    (0..=c.a)
        .map(|i| (c.b - i * r as i64 + 1).max(0) as u64)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BeseInvariants {
    pub rho: i64,
    pub h: i64,
    pub d2: i64,
}

/// `rho = dim |D - K|`, `D^2`, and `h = rho - (D^2 - 3 D.K + 16) / 2`.
pub fn bese_invariants(r: u32, d: RuledClass) -> crate::Result<BeseInvariants> {
    if d.a <= 0 || d.b <= 0 {
        return Err(crate::Error::invalid(format!("class ({}, {}) needs a, b > 0", d.a, d.b)));
    }
    let k = canonical_class(r);
    let rho = h0_ruled(r, d.sub(k)) as i64 - 1;
    let d2 = pair_classes(r, d, d);
    let num = d2 - 3 * pair_classes(r, d, k) + 16;
    if num % 2 != 0 {
        return Err(crate::Error::invalid(format!(
            "D^2 - 3DK + 16 = {num} is odd for r = {r}, D = ({}, {})",
            d.a, d.b
        )));
    }
    Ok(BeseInvariants {
        rho,
        h: rho - num / 2,
        d2,
    })
}

/// Largest number of points a curve of class `c` may carry: `c.(D - K - c) - 2`.
pub fn condition_iii_bound(r: u32, d: RuledClass, c: RuledClass) -> i64 {
    pair_classes(r, c, d.sub(canonical_class(r)).sub(c)) - 2
}

/// Classes `(x, y) != (0, 0)` with `0 <= x <= a + 2`, `0 <= y <= (b + 2 + r) / 2`.
pub fn condition_iii_classes(r: u32, d: RuledClass) -> Vec<RuledClass> {
    let ymax = (d.b + 2 + r as i64).div_euclid(2);
    (0..=d.a + 2)
        .flat_map(|x| (0..=ymax).map(move |y| RuledClass::new(x, y)))
        .filter(|c| !c.is_zero())
        .collect()
}

/// Upper bound on the number of points allowed by condition (i).
pub fn condition_i_bound(inv: &BeseInvariants) -> i64 {
    (inv.rho - 4).div_euclid(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairings() {
        assert_eq!(pair_classes(0, RuledClass::new(3, 3), RuledClass::new(3, 3)), 18);
        assert_eq!(pair_classes(2, RuledClass::new(2, 5), RuledClass::new(2, 5)), 12);
        assert_eq!(pair_classes(7, RuledClass::FIBER, RuledClass::FIBER), 0);
        assert_eq!(pair_classes(3, canonical_class(3), RuledClass::FIBER), -2);
    }

    #[test]
    fn canonical_and_sections() {
        assert_eq!(canonical_class(0), RuledClass::new(-2, -2));
        assert_eq!(canonical_class(2), RuledClass::new(-2, -4));
        assert_eq!(RuledClass::new(3, 3).sub(canonical_class(0)), RuledClass::new(5, 5));
        assert_eq!(h0_ruled(0, RuledClass::new(5, 5)), 36);
        assert_eq!(h0_ruled(2, RuledClass::new(4, 9)), 30);
        assert_eq!(h0_ruled(2, RuledClass::new(5, 10)), 36);
        assert_eq!(h0_ruled(2, RuledClass::new(-1, 10)), 0);
    }

    #[test]
    fn invariants_of_the_three_instances() {
        let t = |r, a, b| bese_invariants(r, RuledClass::new(a, b)).unwrap();
        assert_eq!(t(0, 3, 3), BeseInvariants { rho: 35, h: 0, d2: 18 });
        assert_eq!(t(2, 3, 6), BeseInvariants { rho: 35, h: 0, d2: 18 });
        assert_eq!(t(2, 2, 5), BeseInvariants { rho: 29, h: 0, d2: 12 });
        assert!(bese_invariants(0, RuledClass::new(0, 3)).is_err());
    }

    #[test]
    fn bounds() {
        let b = |r, d: (i64, i64), c: (i64, i64)| {
            condition_iii_bound(r, RuledClass::new(d.0, d.1), RuledClass::new(c.0, c.1))
        };
        assert_eq!(b(0, (3, 3), (1, 1)), 6);
        assert_eq!(b(0, (3, 3), (2, 1)), 9);
        assert_eq!(b(2, (3, 6), (1, 0)), 0);
        assert_eq!(b(2, (2, 5), (1, 2)), 5);
    }

    #[test]
    fn ranges() {
        let c = condition_iii_classes(0, RuledClass::new(3, 3));
        assert_eq!(c.len(), 6 * 3 - 1);
        assert_eq!(c.last(), Some(&RuledClass::new(5, 2)));
        assert_eq!(condition_iii_classes(2, RuledClass::new(3, 6)).len(), 35);
        assert_eq!(condition_iii_classes(2, RuledClass::new(2, 5)).len(), 24);
    }
}
