use itertools::Itertools;
use serde::Serialize;

use super::{on_linear_forms, vanishing_forms, PointConfig};
use crate::arith::{ExactMatrix, Field, Gf, MAX_FIELD_ORDER};
use crate::enumerate::{CompiledForm, ProjectiveSpace};
use crate::error::Result;
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TwistedCubicVerdict {
    Yes {
        base_points: usize,
        base_points_quadratic: Option<usize>,
    },
    No {
        reason: String,
    },
    Indeterminate {
        reason: String,
    },
}

/// Whether some twisted cubic passes through all the chosen points.
///
/// A twisted cubic over `GF(q)` lies on a net of quadrics and has exactly
/// `q+1` rational points, no four of them coplanar. When the quadrics
/// through the points form at least a net whose base locus has exactly
/// `q+1 > 8` rational points in that position, the base locus must contain
/// such a curve; a finite base locus has at most 8 points.
pub fn twisted_cubic_test<F: Field>(
    cfg: &PointConfig<F>,
    subset: &[usize],
    budget: u128,
) -> Result<TwistedCubicVerdict> {
    let span = cfg.span_dim(subset)?;
    if span > 3 {
        return Ok(no(format!("points span a P^{span}")));
    }
    if span <= 2 && subset.len() >= 4 {
        return Ok(no("at least four of the points are coplanar".into()));
    }
    if subset.len() < 7 {
        return Ok(undecided(format!("only {} points; the base-locus test needs at least 7", subset.len())));
    }
    let (_, local) = cfg.frame(subset, 3)?;
    let all = local.all_indices();
    let net = vanishing_forms(&local, &all, 2)?;
    if net.len() < 3 {
        return Ok(no(format!("quadrics through the points form a system of dimension {}", net.len())));
    }
    let Some(gf) = cfg.field().as_finite() else {
        return Ok(undecided(format!(
            "quadric system has dimension {} and base-locus enumeration needs a finite field",
            net.len()
        )));
    };
    let q = gf.order() as u128;
    if q + 1 <= 8 {
        return Ok(undecided(format!("field of order {q} is too small to separate curves from finite base loci")));
    }
    let space = ProjectiveSpace::new(gf, 3)?;
    if let Err(e) = space.check_budget(budget) {
        return Ok(undecided(e.to_string()));
    }
    let quadrics: Vec<MultiPoly<Gf>> = net
        .iter()
        .map(|c| {
            let c: Vec<u32> = c.iter().map(|x| cfg.field().to_finite_elem(x).expect("finite")).collect();
            MultiPoly::from_coefficients(gf, 4, 2, &c)
        })
        .collect();
    let base = base_locus(gf, &quadrics, &space);
    if (base.len() as u128) < q + 1 {
        return Ok(no(format!("base locus has {} rational points, fewer than {}", base.len(), q + 1)));
    }
    if base.len() as u128 > q + 1 {
        return Ok(undecided(format!("base locus has {} rational points, more than {}", base.len(), q + 1)));
    }
    if let Some(quad) = four_coplanar(gf, &base) {
        return Ok(undecided(format!("base points {quad:?} are coplanar")));
    }
    let mut base_points_quadratic = None;
    let q2 = q * q;
    if q2 <= MAX_FIELD_ORDER as u128 {
        let big = Gf::new(gf.p() as u64, 2 * gf.k())?;
        let space2 = ProjectiveSpace::new(&big, 3)?;
        if space2.check_budget(budget).is_ok() {
            let emb = big.embedding_from(gf)?;
            let lifted: Vec<MultiPoly<Gf>> = quadrics.iter().map(|g| g.map_coefficients(&big, |c| emb.map(*c))).collect();
            let n2 = base_locus(&big, &lifted, &space2).len();
            if n2 as u128 != q2 + 1 {
                return Ok(undecided(format!(
                    "base locus has {n2} points over the quadratic extension, expected {}",
                    q2 + 1
                )));
            }
            base_points_quadratic = Some(n2);
        }
    }
    Ok(TwistedCubicVerdict::Yes {
        base_points: base.len(),
        base_points_quadratic,
    })
}

fn no(reason: String) -> TwistedCubicVerdict {
    TwistedCubicVerdict::No { reason }
}

fn undecided(reason: String) -> TwistedCubicVerdict {
    TwistedCubicVerdict::Indeterminate { reason }
}

fn base_locus(gf: &Gf, forms: &[MultiPoly<Gf>], space: &ProjectiveSpace) -> Vec<Vec<u32>> {
    let compiled: Vec<CompiledForm> = forms.iter().map(CompiledForm::new).collect();
    space.par_filter(|x| compiled.iter().all(|c| c.eval(gf, x) == 0))
}

/// Four coplanar points among `pts`, as indices, if any.
fn four_coplanar(gf: &Gf, pts: &[Vec<u32>]) -> Option<Vec<usize>> {
    for t in (0..pts.len()).combinations(3) {
        let rows = t.iter().map(|&i| pts[i].clone()).collect();
        let m = ExactMatrix::from_rows(gf, rows).expect("consistent rows");
        let forms = m.kernel_basis();
        if forms.len() != 1 {
            let extra = (0..pts.len()).find(|i| !t.contains(i)).expect("more than three points");
            return Some(vec![t[0], t[1], t[2], extra]);
        }
        if let Some(j) = (t[2] + 1..pts.len()).find(|&j| on_linear_forms(gf, &forms, &pts[j])) {
            return Some(vec![t[0], t[1], t[2], j]);
        }
    }
    None
}
