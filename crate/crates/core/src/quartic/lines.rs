use serde::Serialize;

use super::{Decomposition, QuarticInput};
use crate::arith::{Field, FieldSpec, Gf, MAX_FIELD_ORDER};
use crate::enumerate::{normalize_gf, CommonZeros};
use crate::error::{Error, Result};
use crate::poly::{Exponent, LinearSubspaceParam, MultiPoly};

/// `{y L = Q, y Q' = C}` in `P^5` with coordinates `x0..x4, y`; the primed
/// model swaps `Q` and `Q'`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelY<F: Field> {
    pub primed: bool,
    pub equations: [MultiPoly<F>; 2],
    pub l: MultiPoly<F>,
    /// The quadric in the first equation.
    pub q: MultiPoly<F>,
    /// The quadric multiplying `y` in the second equation.
    pub q_low: MultiPoly<F>,
    pub c: MultiPoly<F>,
}

impl<F: Field> ModelY<F> {
    fn new(primed: bool, d: &Decomposition<F>) -> Result<Self> {
        let (q, q_low) = if primed {
            (d.q_prime.clone(), d.q.clone())
        } else {
            (d.q.clone(), d.q_prime.clone())
        };
        let field = d.l.field();
        let y = MultiPoly::var(field, 6, 5);
        let eq1 = y.mul(&d.l.extend_vars(6))?.sub(&q.extend_vars(6))?;
        let eq2 = y.mul(&q_low.extend_vars(6))?.sub(&d.c.extend_vars(6))?;
        if eq1.degree() != 2 || eq2.degree() != 3 {
            return Err(Error::Degree("model equations must have degrees 2 and 3".into()));
        }
        Ok(ModelY {
            primed,
            equations: [eq1, eq2],
            l: d.l.clone(),
            q,
            q_low,
            c: d.c.clone(),
        })
    }

    pub fn field(&self) -> &F {
        self.l.field()
    }

    /// `(0 : ... : 0 : 1)`.
    pub fn distinguished_point(&self) -> Vec<F::Elem> {
        let f = self.field();
        let mut p = vec![f.zero(); 6];
        p[5] = f.one();
        p
    }

    /// `(x : q(x)/l(x))`, defined when `l(x) != 0`.
    pub fn lift(&self, x: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        let f = self.field();
        let lx = self.l.eval(x)?;
        let Some(y) = f.div(&self.q.eval(x)?, &lx) else {
            return Ok(None);
        };
        let mut p = x.to_vec();
        p.push(y);
        Ok(Some(p))
    }
}

/// Both models `Y` and `Y'` of a decomposed quartic.
pub fn birational_models<F: Field>(inp: &QuarticInput<F>) -> Result<(ModelY<F>, ModelY<F>)> {
    let d = inp
        .decomposition
        .as_ref()
        .ok_or_else(|| Error::invalid("the models need a decomposition Q Q' - L C"))?;
    Ok((ModelY::new(false, d)?, ModelY::new(true, d)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeOnY {
    pub linear_lowest_term: String,
    pub quadratic_lowest_term: String,
    pub lowest_terms_match: bool,
    pub rank_q_low: usize,
    pub rank_restricted: usize,
    pub is_node: bool,
}

/// Terms of the highest power of `y`, with `y` set to 1.
fn lowest_part<F: Field>(eq: &MultiPoly<F>) -> MultiPoly<F> {
    let top = eq.terms().map(|(e, _)| e.0[5]).max().unwrap_or(0);
    let terms: Vec<(Exponent, F::Elem)> = eq
        .terms()
        .filter(|(e, _)| e.0[5] == top)
        .map(|(e, c)| (Exponent(e.0[..5].to_vec()), c.clone()))
        .collect();
    let deg = terms.first().map_or(0, |(e, _)| e.degree());
    MultiPoly::from_terms(eq.field(), 5, deg, terms).expect("homogeneous")
}

fn quadric_rank<F: Field>(q: &MultiPoly<F>) -> Result<usize> {
    let zero = vec![q.field().zero(); q.nvars()];
    Ok(q.hessian_matrix(&zero)?.rank())
}

/// The singularity of `Y` at `(0 : ... : 0 : 1)`: a node when the second
/// equation's quadratic lowest term has full rank on `{L = 0}`.
pub fn node_on_y<F: Field>(model: &ModelY<F>) -> Result<NodeOnY> {
    let lin = lowest_part(&model.equations[0]);
    let quad = lowest_part(&model.equations[1]);
    let lowest_terms_match = lin == model.l && quad == model.q_low;
    let rank_q_low = quadric_rank(&model.q_low)?;
    let rank_restricted = if model.l.is_zero() {
        0
    } else {
        let f = model.field();
        let coeffs: Vec<F::Elem> = (0..5).map(|i| model.l.coefficient(&Exponent::unit(5, i))).collect();
        let h = LinearSubspaceParam::hyperplane(f, &coeffs)?;
        quadric_rank(&model.q_low.restrict_to_subspace(&h)?)?
    };
    Ok(NodeOnY {
        linear_lowest_term: lin.to_string(),
        quadratic_lowest_term: quad.to_string(),
        lowest_terms_match,
        rank_q_low,
        rank_restricted,
        is_node: lowest_terms_match && !model.l.is_zero() && rank_restricted == 4,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineThroughNode {
    /// Direction `x` of the line `{(s x : t)}`, over `field`.
    pub direction: Vec<String>,
    pub field: FieldSpec,
    /// Smallest extension degree of the prime field containing the direction.
    pub defined_over_degree: u32,
    /// 1 when the conditions cut the direction transversally, unknown otherwise.
    pub multiplicity: Option<u32>,
    pub in_tangent_space: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionCount {
    pub field: FieldSpec,
    pub lines: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCount {
    pub per_extension: Vec<ExtensionCount>,
    pub bezout_bound: u32,
    pub total_with_multiplicity: u32,
    pub non_transverse: usize,
    pub stabilized: bool,
    pub lines: Vec<LineThroughNode>,
}

/// Each equation split by powers of `y`; a line `{(s x : t)}` lies on the
/// model iff every piece vanishes at `x`.
fn line_conditions(model: &ModelY<Gf>) -> Vec<MultiPoly<Gf>> {
    let field = model.field();
    let mut out = Vec::new();
    for eq in &model.equations {
        let top = eq.terms().map(|(e, _)| e.0[5]).max().unwrap_or(0);
        for k in 0..=top {
            let terms: Vec<(Exponent, u32)> = eq
                .terms()
                .filter(|(e, _)| e.0[5] == k)
                .map(|(e, c)| (Exponent(e.0[..5].to_vec()), *c))
                .collect();
            if !terms.is_empty() {
                let deg = eq.degree() - k as u32;
                out.push(MultiPoly::from_terms(field, 5, deg, terms).expect("homogeneous"));
            }
        }
    }
    out
}

/// Lines through `(0 : ... : 0 : 1)` on the model, over `GF(q^s)` for growing
/// `s` until the transverse count reaches the Bezout bound or the budget or
/// `max_degree` (absolute extension degree) stops the search.
pub fn lines_through_node(model: &ModelY<Gf>, max_degree: u32, budget: u128) -> Result<LineCount> {
    let base = model.field().clone();
    if model.l.is_zero() {
        return Err(Error::invalid("L is zero; the directions do not lie in a hyperplane"));
    }
    let conditions = line_conditions(model);
    let (linear, rest): (Vec<_>, Vec<_>) = conditions.into_iter().partition(|c| c.degree() == 1);
    let bezout_bound: u32 = rest.iter().map(|c| c.degree()).product();
    let l_coeffs: Vec<u32> = (0..5).map(|i| model.l.coefficient(&Exponent::unit(5, i))).collect();
    if linear.iter().any(|c| !c.is_proportional_to(&model.l)) {
        return Err(Error::Inconsistency("linear line conditions other than L".into()));
    }
    let tangent: Vec<Vec<u32>> = model
        .equations
        .iter()
        .map(|e| e.gradient_at(&model.distinguished_point()))
        .collect::<Result<_>>()?;
    let mut per_extension = Vec::new();
    let mut result = LineCount {
        per_extension: Vec::new(),
        bezout_bound,
        total_with_multiplicity: 0,
        non_transverse: 0,
        stabilized: false,
        lines: Vec::new(),
    };
    let mut s = 1;
    while base.k() * s <= max_degree && (base.order() as u64).pow(s) <= MAX_FIELD_ORDER as u64 {
        let ext = Gf::new(base.p() as u64, base.k() * s)?;
        let emb = ext.embedding_from(&base)?;
        let lift = |p: &MultiPoly<Gf>| p.map_coefficients(&ext, |c| emb.map(*c));
        let l_ext: Vec<u32> = l_coeffs.iter().map(|&c| emb.map(c)).collect();
        let h = LinearSubspaceParam::hyperplane(&ext, &l_ext)?;
        let restricted: Vec<MultiPoly<Gf>> = rest
            .iter()
            .map(|c| lift(c).restrict_to_subspace(&h))
            .collect::<Result<_>>()?;
        let zeros = CommonZeros::new(&ext, 4, &restricted)?;
        if zeros.space_size() > budget {
            if s == 1 {
                return Err(Error::BudgetExceeded {
                    required: zeros.space_size(),
                    budget,
                });
            }
            break;
        }
        let eqs: Vec<MultiPoly<Gf>> = model.equations.iter().map(lift).collect();
        let all: Vec<MultiPoly<Gf>> = rest.iter().map(lift).chain([lift(&model.l)]).collect();
        let tangent_ext: Vec<Vec<u32>> = tangent.iter().map(|g| g.iter().map(|&c| emb.map(c)).collect()).collect();
        let mut lines = Vec::new();
        let (mut total, mut non_transverse) = (0u32, 0usize);
        for t in zeros.run(budget)? {
            let mut x = h.point(&t)?;
            normalize_gf(&ext, &mut x);
            let mut dir = x.clone();
            dir.push(0);
            let mut apex = vec![0u32; 6];
            apex[5] = 1;
            let line = LinearSubspaceParam::from_columns(&ext, vec![dir.clone(), apex])?;
            for e in &eqs {
                if !e.restrict_to_subspace(&line)?.is_zero() {
                    return Err(Error::Inconsistency("direction does not span a line on the model".into()));
                }
            }
            let jac: Vec<Vec<u32>> = all.iter().map(|g| g.gradient_at(&x)).collect::<Result<_>>()?;
            let transverse = crate::arith::ExactMatrix::from_rows(&ext, jac)?.rank() == 4;
            if transverse {
                total += 1;
            } else {
                non_transverse += 1;
            }
            let in_tangent_space = tangent_ext.iter().all(|g| {
                g.iter()
                    .zip(&dir)
                    .fold(0, |acc, (a, b)| ext.add_fast(acc, ext.mul_fast(*a, *b)))
                    == 0
            });
            let defined_over_degree = (1..=ext.k())
                .find(|&d| ext.k() % d == 0 && x.iter().all(|&c| ext.in_subfield(c, d)))
                .expect("degree k always works");
            lines.push(LineThroughNode {
                direction: x.iter().map(|c| ext.format(c)).collect(),
                field: ext.spec(),
                defined_over_degree,
                multiplicity: transverse.then_some(1),
                in_tangent_space,
            });
        }
        per_extension.push(ExtensionCount {
            field: ext.spec(),
            lines: lines.len(),
        });
        result = LineCount {
            per_extension: per_extension.clone(),
            bezout_bound,
            total_with_multiplicity: total,
            non_transverse,
            stabilized: non_transverse == 0 && total == bezout_bound,
            lines,
        };
        if result.stabilized {
            break;
        }
        s += 1;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::quartic::build_qqlc;

    fn sample(g: &Gf, qp: &str) -> QuarticInput<Gf> {
        let p = |s: &str| parse_poly(g, s, 5).unwrap();
        build_qqlc(
            p("x0*x1 + x2^2 - x3*x4"),
            p(qp),
            p("x0 + x4"),
            p("x1^3 + x2*x3*x4 + x0^2*x3 - x4^3"),
        )
        .unwrap()
    }

    #[test]
    fn models_and_lift() {
        let g = Gf::prime(11).unwrap();
        let inp = sample(&g, "x1^2 + x0*x3 + 2*x4^2 + x2^2");
        let (y, y2) = birational_models(&inp).unwrap();
        assert!(!y.primed && y2.primed);
        let space = crate::enumerate::ProjectiveSpace::new(&g, 4).unwrap();
        let d = inp.decomposition.as_ref().unwrap();
        let pts = space.par_filter(|x| inp.f.eval(x).unwrap() == 0 && d.l.eval(x).unwrap() != 0);
        assert!(pts.len() > 100);
        for x in pts.iter().take(50) {
            for m in [&y, &y2] {
                let p = m.lift(x).unwrap().unwrap();
                assert!(m.equations.iter().all(|e| e.eval(&p).unwrap() == 0));
            }
        }
    }

    #[test]
    fn node_criterion() {
        let g = Gf::prime(11).unwrap();
        let (y, _) = birational_models(&sample(&g, "x0^2 + x1^2 + x2^2 + x3^2 + x4^2")).unwrap();
        let r = node_on_y(&y).unwrap();
        assert!(r.lowest_terms_match && r.is_node);
        assert_eq!((r.rank_q_low, r.rank_restricted), (5, 4));
        let (y, _) = birational_models(&sample(&g, "x0^2 + x1^2 + x2^2")).unwrap();
        let r = node_on_y(&y).unwrap();
        assert!(!r.is_node && r.rank_q_low == 3);
    }
}
