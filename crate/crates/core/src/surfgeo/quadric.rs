use serde::Serialize;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::projgeo::{max_in_subspace, twisted_cubic_test, PointConfig, ProjPoint, TwistedCubicVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadricKind {
    Smooth,
    Cone { vertex: Vec<String> },
    Degenerate { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexCase {
    NotACone,
    VertexFree,
    VertexIsQ,
    VertexAmongP(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationHypotheses {
    pub irreducible: bool,
    pub line_with_4: bool,
    pub conic_with_7: bool,
    pub twisted_cubic_through_all: TwistedCubicVerdict,
}

impl SeparationHypotheses {
    pub fn hold(&self) -> bool {
        self.irreducible
            && !self.line_with_4
            && !self.conic_with_7
            && matches!(self.twisted_cubic_through_all, TwistedCubicVerdict::No { .. })
    }
}

#[derive(Clone, Debug)]
pub struct SeparatingDivisor<F: Field> {
    pub kind: QuadricKind,
    pub vertex_case: VertexCase,
    pub hypotheses: SeparationHypotheses,
    /// Cubic vanishing at every `p_i` but not at `q`.
    pub cubic: Option<MultiPoly<F>>,
    /// Set when the hypotheses hold and yet no cubic exists.
    pub finding: Option<String>,
}

/// Looks for a cubic form on `P^3` through the points `p` that misses `q`,
/// where all points lie on the quadric `y`.
pub fn separating_divisor_on_quadric<F: Field>(
    y: &MultiPoly<F>,
    p: &PointConfig<F>,
    q: &ProjPoint<F>,
    budget: u128,
) -> Result<SeparatingDivisor<F>> {
    let f = y.field();
    if y.nvars() != 4 || y.degree() != 2 || y.is_zero() {
        return Err(Error::Degree("expected a nonzero quadric form in 4 variables".into()));
    }
    if p.ambient_dim() != 3 || q.dim() != 3 {
        return Err(Error::dimension("points must lie in P^3"));
    }
    if p.is_empty() {
        return Err(Error::invalid("no points to pass through"));
    }
    if let Some(i) = p.points().iter().position(|x| x == q) {
        return Err(Error::invalid(format!("q coincides with point {i}")));
    }
    for (i, x) in p.points().iter().chain(std::iter::once(q)).enumerate() {
        if !f.is_zero(&y.eval(x.coords())?) {
            let name = if i < p.len() { format!("point {i}") } else { "q".into() };
            return Err(Error::invalid(format!("{name} is not on the quadric")));
        }
    }
    let gram = y.hessian_matrix(&vec![f.zero(); 4])?;
    let rank = gram.rank();
    let (kind, vertex_case) = match rank {
        4 => (QuadricKind::Smooth, VertexCase::NotACone),
        3 => {
            let v = ProjPoint::new(f, gram.kernel_basis().remove(0))?;
            let case = if &v == q {
                VertexCase::VertexIsQ
            } else if let Some(i) = p.points().iter().position(|x| x == &v) {
                VertexCase::VertexAmongP(i)
            } else {
                VertexCase::VertexFree
            };
            let vertex = v.coords().iter().map(|c| f.format(c)).collect();
            (QuadricKind::Cone { vertex }, case)
        }
        r => (QuadricKind::Degenerate { rank: r }, VertexCase::NotACone),
    };
    let all = p.all_indices();
    let hypotheses = SeparationHypotheses {
        irreducible: rank >= 3,
        line_with_4: max_in_subspace(p, 1)?.count >= 4,
        conic_with_7: max_in_subspace(p, 2)?.count >= 7,
        twisted_cubic_through_all: twisted_cubic_test(p, &all, budget)?,
    };
    let mut ext = p.points().to_vec();
    ext.push(q.clone());
    let with_q = PointConfig::new(f, 3, ext)?;
    let cubic = crate::defect::separating_form(&with_q, p.len(), 3)?;
    let finding = (cubic.is_none() && hypotheses.hold()).then(|| {
        "no cubic separates q although the line, conic and twisted-cubic hypotheses hold".to_string()
    });
    Ok(SeparatingDivisor {
        kind,
        vertex_case,
        hypotheses,
        cubic,
        finding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Gf;
    use crate::poly::parse_poly;

    /// Points `(1 : u : v : uv)` on `x0*x3 = x1*x2`.
    fn segre(f: &Gf, uv: &[(i64, i64)]) -> Vec<ProjPoint<Gf>> {
        uv.iter()
            .map(|&(u, v)| ProjPoint::from_i64(f, &[1, u, v, u * v]).unwrap())
            .collect()
    }

    #[test]
    fn generic_points_are_separated() {
        let f = Gf::prime(101).unwrap();
        let y = parse_poly(&f, "x0*x3 - x1*x2", 4).unwrap();
        let uv = [(1, 2), (3, 7), (5, 11), (8, 4), (13, 29), (17, 3), (21, 50), (30, 60), (44, 9), (70, 33)];
        let p = PointConfig::new(&f, 3, segre(&f, &uv)).unwrap();
        let q = segre(&f, &[(55, 66)]).remove(0);
        let r = separating_divisor_on_quadric(&y, &p, &q, 1 << 22).unwrap();
        assert_eq!(r.kind, QuadricKind::Smooth);
        assert!(r.hypotheses.hold());
        let c = r.cubic.unwrap();
        assert!(p.points().iter().all(|x| c.eval(x.coords()).unwrap() == 0));
        assert_ne!(c.eval(q.coords()).unwrap(), 0);
    }

    #[test]
    fn duplicate_and_off_quadric_points_rejected() {
        let f = Gf::prime(101).unwrap();
        let y = parse_poly(&f, "x0*x3 - x1*x2", 4).unwrap();
        let p = PointConfig::new(&f, 3, segre(&f, &[(1, 2), (3, 4)])).unwrap();
        assert!(separating_divisor_on_quadric(&y, &p, &p.point(0).clone(), 1 << 20).is_err());
        let off = ProjPoint::from_i64(&f, &[1, 1, 1, 2]).unwrap();
        assert!(separating_divisor_on_quadric(&y, &p, &off, 1 << 20).is_err());
    }

    #[test]
    fn cone_vertex_is_detected() {
        let f = Gf::prime(101).unwrap();
        let y = parse_poly(&f, "x1*x3 - x2^2", 4).unwrap();
        let p = PointConfig::new(
            &f,
            3,
            vec![
                ProjPoint::from_i64(&f, &[1, 0, 0, 0]).unwrap(),
                ProjPoint::from_i64(&f, &[0, 1, 1, 1]).unwrap(),
            ],
        )
        .unwrap();
        let q = ProjPoint::from_i64(&f, &[5, 1, 2, 4]).unwrap();
        let r = separating_divisor_on_quadric(&y, &p, &q, 1 << 20).unwrap();
        assert_eq!(r.vertex_case, VertexCase::VertexAmongP(0));
        assert!(r.cubic.is_some());
    }
}
