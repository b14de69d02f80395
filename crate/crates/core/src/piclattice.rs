//! A rank-3 divisor-class lattice on the basis `(h, f, e)` with a
//! configurable Gram matrix, and an audit of an integral action on it.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeClass(pub [i64; 3]);

impl LatticeClass {
    pub const H: LatticeClass = LatticeClass([1, 0, 0]);
    pub const F: LatticeClass = LatticeClass([0, 1, 0]);
    pub const E: LatticeClass = LatticeClass([0, 0, 1]);
    pub const ZERO: LatticeClass = LatticeClass([0, 0, 0]);

    pub fn add(self, o: Self) -> Self {
        LatticeClass([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn scale(self, k: i64) -> Self {
        LatticeClass(self.0.map(|c| k * c))
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.scale(-1))
    }
}

/// Symmetric matrix of pairings between `h`, `f`, `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 3]; 3]", into = "[[i64; 3]; 3]")]
pub struct GramTable([[i64; 3]; 3]);

impl GramTable {
    pub fn new(g: [[i64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(Error::invalid(format!(
                        "Gram table is not symmetric at ({i}, {j}): {} vs {}",
                        g[i][j], g[j][i]
                    )));
                }
            }
        }
        Ok(GramTable(g))
    }

    /// `h^2 = 4, h.f = 0, h.e = 2, f^2 = e^2 = -2, f.e = 1`.
    pub fn printed() -> Self {
        GramTable([[4, 0, 2], [0, -2, 1], [2, 1, -2]])
    }

    pub fn identity() -> Self {
        GramTable([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn entries(&self) -> [[i64; 3]; 3] {
        self.0
    }
}

impl TryFrom<[[i64; 3]; 3]> for GramTable {
    type Error = Error;

    fn try_from(g: [[i64; 3]; 3]) -> Result<Self> {
        GramTable::new(g)
    }
}

impl From<GramTable> for [[i64; 3]; 3] {
    fn from(g: GramTable) -> Self {
        g.0
    }
}

pub fn pairing(a: LatticeClass, b: LatticeClass, g: &GramTable) -> i64 {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| a.0[i] * g.0[i][j] * b.0[j])
        .sum()
}

/// Integer 3x3 matrix acting on column vectors of coefficients.
pub type IntMatrix = [[i64; 3]; 3];

pub fn apply(m: &IntMatrix, v: LatticeClass) -> LatticeClass {
    LatticeClass([0, 1, 2].map(|i| (0..3).map(|j| m[i][j] * v.0[j]).sum()))
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

/// Columns are the images `h -> 15h - 8f - 16e`, `f -> 14h - 7f - 16e`, `e -> e`.
pub fn statement_action_matrix() -> IntMatrix {
    let cols = [[15, -8, -16], [14, -7, -16], [0, 0, 1]];
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| cols[j][i]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub m_squared: IntMatrix,
    pub is_involution: bool,
}

pub fn audit_involution(m: &IntMatrix) -> InvolutionReport {
    let sq = mat_mul(m, m);
    InvolutionReport {
        m_squared: sq,
        is_involution: sq == [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }
}

/// `(A + mB)^2 = c0 + c1 m + c2 m^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub c0: i64,
    pub c1: i64,
    pub c2: i64,
}

impl Expansion {
    pub fn at(&self, m: i64) -> i64 {
        self.c0 + self.c1 * m + self.c2 * m * m
    }
}

pub fn expand_quadratic(a: LatticeClass, b: LatticeClass, g: &GramTable) -> Expansion {
    Expansion {
        c0: pairing(a, a, g),
        c1: 2 * pairing(a, b, g),
        c2: pairing(b, b, g),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MSolutions {
    Values(Vec<i64>),
    Identically(&'static str),
}

pub const DEFAULT_M_WINDOW: i64 = 1000;

/// Integers `|m| <= window` with `(A + mB)^2 = target`.
pub fn solve_for_m(a: LatticeClass, b: LatticeClass, g: &GramTable, target: i64, window: i64) -> MSolutions {
    let ex = expand_quadratic(a, b, g);
    let (c0, c1, c2) = (ex.c0 - target, ex.c1, ex.c2);
    let candidates: Vec<i64> = if c2 == 0 && c1 == 0 {
        if c0 == 0 {
            return MSolutions::Identically("identically satisfied");
        }
        Vec::new()
    } else if c2 == 0 {
        if c0 % c1 == 0 {
            vec![-c0 / c1]
        } else {
            Vec::new()
        }
    } else {
        let disc = c1 as i128 * c1 as i128 - 4 * c2 as i128 * c0 as i128;
        if disc < 0 {
            Vec::new()
        } else {
            let r = disc.sqrt();
            if r * r != disc {
                Vec::new()
            } else {
                let den = 2 * c2 as i128;
                let mut v: Vec<i64> = [-(c1 as i128) - r, -(c1 as i128) + r]
                    .into_iter()
                    .filter(|num| num % den == 0)
                    .map(|num| (num / den) as i64)
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    };
    MSolutions::Values(
        candidates
            .into_iter()
            .filter(|m| m.abs() <= window && ex.at(*m) == target)
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerSolutions {
    pub target4: MSolutions,
    pub target6: MSolutions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeAudit {
    pub gram: GramTable,
    pub action_matrix: IntMatrix,
    pub m_squared: IntMatrix,
    pub is_involution: bool,
    pub fixes_e: bool,
    pub fixes_h_minus_f_minus_e: bool,
    pub expansion: Expansion,
    pub paper_printed: String,
    pub printed_matches_expansion: bool,
    pub integer_solutions: IntegerSolutions,
}

/// The expansion printed alongside the action, `-122 + 8m`.
pub const PRINTED_EXPANSION: (i64, i64, i64) = (-122, 8, 0);

/// Full audit of the action matrix and the expansion of `(8f - h + m(h - f - e))^2`.
pub fn lattice_audit(g: &GramTable) -> LatticeAudit {
    let m = statement_action_matrix();
    let inv = audit_involution(&m);
    let a = LatticeClass::F.scale(8).sub(LatticeClass::H);
    let b = LatticeClass::H.sub(LatticeClass::F).sub(LatticeClass::E);
    let ex = expand_quadratic(a, b, g);
    LatticeAudit {
        gram: *g,
        action_matrix: m,
        m_squared: inv.m_squared,
        is_involution: inv.is_involution,
        fixes_e: apply(&m, LatticeClass::E) == LatticeClass::E,
        fixes_h_minus_f_minus_e: apply(&m, b) == b,
        expansion: ex,
        paper_printed: "-122+8m".into(),
        printed_matches_expansion: (ex.c0, ex.c1, ex.c2) == PRINTED_EXPANSION,
        integer_solutions: IntegerSolutions {
            target4: solve_for_m(a, b, g, 4, DEFAULT_M_WINDOW),
            target6: solve_for_m(a, b, g, 6, DEFAULT_M_WINDOW),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_pairings() {
        let g = GramTable::printed();
        assert_eq!(pairing(LatticeClass::H, LatticeClass::H, &g), 4);
        assert_eq!(pairing(LatticeClass::F, LatticeClass::E, &g), 1);
        assert!(GramTable::new([[1, 2, 0], [0, 1, 0], [0, 0, 1]]).is_err());
    }

    #[test]
    fn action_columns() {
        let m = statement_action_matrix();
        assert_eq!(apply(&m, LatticeClass::H), LatticeClass([15, -8, -16]));
        assert_eq!(apply(&m, LatticeClass::E), LatticeClass::E);
        let b = LatticeClass([1, -1, -1]);
        assert_eq!(apply(&m, b), b);
    }

    #[test]
    fn involution_examples() {
        assert!(audit_involution(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_involution);
        assert!(audit_involution(&[[1, 0, 0], [0, -1, 0], [0, 0, 1]]).is_involution);
    }

    #[test]
    fn expansions() {
        let id = GramTable::identity();
        assert_eq!(
            expand_quadratic(LatticeClass::H, LatticeClass::F, &id),
            Expansion { c0: 1, c1: 0, c2: 1 }
        );
        let a = LatticeClass([2, 3, 4]);
        assert_eq!(expand_quadratic(a, LatticeClass::ZERO, &GramTable::printed()).c1, 0);
    }

    #[test]
    fn solving() {
        let id = GramTable::identity();
        assert_eq!(
            solve_for_m(LatticeClass::ZERO, LatticeClass::H, &id, 9, DEFAULT_M_WINDOW),
            MSolutions::Values(vec![-3, 3])
        );
        assert_eq!(
            solve_for_m(LatticeClass::H, LatticeClass::ZERO, &id, 1, DEFAULT_M_WINDOW),
            MSolutions::Identically("identically satisfied")
        );
        assert_eq!(
            solve_for_m(LatticeClass::ZERO, LatticeClass::H, &id, 9, 2),
            MSolutions::Values(vec![])
        );
    }

    #[test]
    fn gram_json_round_trip() {
        let g = GramTable::printed();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, "[[4,0,2],[0,-2,1],[2,1,-2]]");
        assert_eq!(serde_json::from_str::<GramTable>(&s).unwrap(), g);
        assert!(serde_json::from_str::<GramTable>("[[1,2,0],[0,1,0],[0,0,1]]").is_err());
    }
}
