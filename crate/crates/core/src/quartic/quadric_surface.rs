use std::collections::BTreeMap;

use serde::Serialize;

use super::planes::coefficient_field;
use crate::arith::{ExactMatrix, Field, FieldSpec, Gf};
use crate::enumerate::{normalize_gf, CompiledForm, ProjectiveSpace};
use crate::error::{Error, Result};
use crate::poly::{monomial_basis, LinearSubspaceParam, MultiPoly};

pub enum QuadricSearch<F: Field> {
    /// Test membership of `F` in the ideal `(l, q)`.
    Candidate { l: MultiPoly<F>, q: MultiPoly<F> },
    /// Look for a hyperplane section splitting off a quadric.
    Search { budget: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum QuadricMembership {
    /// `F = l a + q b`, so `{l = q = 0}` lies on the hypersurface.
    Yes { l: String, q: String, a: String, b: String },
    No,
    /// Not a proof of absence.
    NotFound {
        search_field: Option<FieldSpec>,
        hyperplanes_tested: usize,
        reason: String,
    },
}

impl QuadricMembership {
    pub fn contains_quadric(&self) -> Option<bool> {
        match self {
            QuadricMembership::Yes { .. } => Some(true),
            QuadricMembership::No => Some(false),
            QuadricMembership::NotFound { .. } => None,
        }
    }
}

/// Solves `f = g1 a1 + g2 a2` for forms `a1`, `a2` of complementary degrees.
pub fn ideal_membership<F: Field>(
    f: &MultiPoly<F>,
    g1: &MultiPoly<F>,
    g2: &MultiPoly<F>,
) -> Result<Option<(MultiPoly<F>, MultiPoly<F>)>> {
    let field = f.field();
    let n = f.nvars();
    let d = f.degree();
    if g1.degree() > d || g2.degree() > d {
        return Err(Error::Degree("generators of degree above the form".into()));
    }
    let (d1, d2) = (d - g1.degree(), d - g2.degree());
    let mut columns = Vec::new();
    for (g, dd) in [(g1, d1), (g2, d2)] {
        for m in monomial_basis(n, dd) {
            let shifted = g.mul(&MultiPoly::monomial(field, m, field.one()))?;
            columns.push(shifted.coefficient_vector());
        }
    }
    let split = monomial_basis(n, d1).len();
    let rows = monomial_basis(n, d).len();
    let matrix = ExactMatrix::from_rows_with_cols(field, columns, rows)?.transpose();
    let Some(u) = matrix.solve(&f.coefficient_vector())? else {
        return Ok(None);
    };
    let a1 = MultiPoly::from_coefficients(field, n, d1, &u[..split]);
    let a2 = MultiPoly::from_coefficients(field, n, d2, &u[split..]);
    if g1.mul(&a1)?.add(&g2.mul(&a2)?)? != *f {
        return Err(Error::Inconsistency("membership solution does not expand back".into()));
    }
    Ok(Some((a1, a2)))
}

pub fn contains_quadric_surface<F: Field>(f: &MultiPoly<F>, mode: QuadricSearch<F>) -> Result<QuadricMembership> {
    if f.nvars() != 5 || f.degree() != 4 {
        return Err(Error::Degree("expected a quartic form in x0..x4".into()));
    }
    match mode {
        QuadricSearch::Candidate { l, q } => {
            if l.degree() != 1 || q.degree() != 2 || l.is_zero() || q.is_zero() {
                return Err(Error::Degree("candidate needs a linear and a quadratic form".into()));
            }
            Ok(match ideal_membership(f, &l, &q)? {
                Some((a, b)) => QuadricMembership::Yes {
                    l: l.to_string(),
                    q: q.to_string(),
                    a: a.to_string(),
                    b: b.to_string(),
                },
                None => QuadricMembership::No,
            })
        }
        QuadricSearch::Search { budget } => search(f, budget),
    }
}

/// Points of `X` are grouped by tangent hyperplane, which makes them singular
/// points of that hyperplane section; singular points of `X` belong to every
/// section through them. Sections with enough such points get the quadrics
/// through them tested as factors.
fn search<F: Field>(f: &MultiPoly<F>, budget: u128) -> Result<QuadricMembership> {
    let Some((small, g)) = coefficient_field(f) else {
        return Ok(QuadricMembership::NotFound {
            search_field: None,
            hyperplanes_tested: 0,
            reason: "hyperplane search needs a finite field".into(),
        });
    };
    let space = ProjectiveSpace::new(&small, 4)?;
    if space.size() as u128 > budget {
        return Err(Error::BudgetExceeded {
            required: space.size() as u128,
            budget,
        });
    }
    let form = CompiledForm::new(&g);
    let grads: Vec<CompiledForm> = g.gradient().iter().map(CompiledForm::new).collect();
    let hits = space.par_scan(
        || (),
        |_, x, out| {
            if form.eval(&small, x) == 0 {
                let mut n: Vec<u32> = grads.iter().map(|d| d.eval(&small, x)).collect();
                let smooth = normalize_gf(&small, &mut n);
                out.push((x.to_vec(), smooth.then_some(n)));
            }
        },
    );
    let mut by_plane: BTreeMap<Vec<u32>, Vec<Vec<u32>>> = BTreeMap::new();
    let mut singular = Vec::new();
    for (x, n) in hits {
        match n {
            Some(n) => by_plane.entry(n).or_default().push(x),
            None => singular.push(x),
        }
    }
    let dot = |a: &[u32], b: &[u32]| {
        a.iter()
            .zip(b)
            .fold(0, |acc, (u, v)| small.add_fast(acc, small.mul_fast(*u, *v)))
    };
    let mut tested = 0;
    for (h, mut pts) in by_plane {
        pts.extend(singular.iter().filter(|x| dot(&h, x) == 0).cloned());
        if pts.len() < 7 {
            continue;
        }
        let plane = LinearSubspaceParam::hyperplane(&small, &h)?;
        let local: Vec<Vec<u32>> = pts
            .iter()
            .map(|x| plane.coordinates_of(x).map(|c| c.expect("point lies in its tangent hyperplane")))
            .collect::<Result<_>>()?;
        let basis = monomial_basis(4, 2);
        let rows: Vec<Vec<u32>> = local
            .iter()
            .map(|t| basis.iter().map(|e| e.eval(&small, t)).collect())
            .collect();
        let kernel = ExactMatrix::from_rows_with_cols(&small, rows, basis.len())?.kernel_basis();
        if kernel.is_empty() || kernel.len() > 3 {
            continue;
        }
        tested += 1;
        let fh = g.restrict_to_subspace(&plane)?;
        let members = ProjectiveSpace::new(&small, kernel.len() - 1)?;
        for idx in 0..members.size() {
            let w = members.point(idx);
            let coeffs: Vec<u32> = (0..basis.len())
                .map(|j| {
                    kernel
                        .iter()
                        .zip(&w)
                        .fold(0, |acc, (k, c)| small.add_fast(acc, small.mul_fast(k[j], *c)))
                })
                .collect();
            let m = MultiPoly::from_coefficients(&small, 4, 2, &coeffs);
            let zero = MultiPoly::zero(&small, 4, 1);
            if ideal_membership(&fh, &zero, &m)?.is_none() {
                continue;
            }
            // hyperplane parameters are the coordinates other than the first nonzero one
            let j = h.iter().position(|&c| c != 0).expect("nonzero");
            let vars: Vec<MultiPoly<Gf>> = (0..5).filter(|&i| i != j).map(|i| MultiPoly::var(&small, 5, i)).collect();
            let q2 = m.compose_linear(&vars)?;
            let l2 = (0..5).fold(MultiPoly::zero(&small, 5, 1), |acc, i| {
                acc.add(&MultiPoly::var(&small, 5, i).scale(&h[i])).expect("same ring")
            });
            if let Some((a, b)) = ideal_membership(&g, &l2, &q2)? {
                return Ok(QuadricMembership::Yes {
                    l: l2.to_string(),
                    q: q2.to_string(),
                    a: a.to_string(),
                    b: b.to_string(),
                });
            }
        }
    }
    Ok(QuadricMembership::NotFound {
        search_field: Some(small.spec()),
        hyperplanes_tested: tested,
        reason: "no hyperplane section over the search field split off a quadric".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn candidates() {
        let g = Gf::prime(11).unwrap();
        let p = |s: &str| parse_poly(&g, s, 5).unwrap();
        let (q, qp, l, c) = (p("x0*x1 + x2^2 - x3*x4"), p("x1^2 + x0*x3 + 2*x4^2"), p("x0 + 3*x2 - x4"), p("x1^3 + x2*x3*x4 + x0^2*x3"));
        let f = q.mul(&qp).unwrap().sub(&l.mul(&c).unwrap()).unwrap();
        for cand in [(l.clone(), q.clone()), (l.clone(), qp.clone())] {
            let r = contains_quadric_surface(&f, QuadricSearch::Candidate { l: cand.0, q: cand.1 }).unwrap();
            assert_eq!(r.contains_quadric(), Some(true));
        }
        let r = contains_quadric_surface(&f, QuadricSearch::Candidate { l: p("x1"), q: p("x2^2 + x3*x4") }).unwrap();
        assert_eq!(r, QuadricMembership::No);
        let (a, b) = ideal_membership(&f, &l, &q).unwrap().unwrap();
        assert_eq!(l.mul(&a).unwrap().add(&q.mul(&b).unwrap()).unwrap(), f);
    }

    #[test]
    fn search_finds_split_section() {
        let g = Gf::prime(7).unwrap();
        let p = |s: &str| parse_poly(&g, s, 5).unwrap();
        let f = p("(x0*x1 - x2^2 + x3^2)*(x1^2 + x2*x3 - x0^2 + 2*x3^2) - x4*(x0^3 + x1^3 + x2^3 + x4^3 + x3^2*x1)");
        let r = contains_quadric_surface(&f, QuadricSearch::Search { budget: u128::MAX }).unwrap();
        match r {
            QuadricMembership::Yes { l, .. } => assert_eq!(l, "x4"),
            other => panic!("{other:?}"),
        }
    }
}
