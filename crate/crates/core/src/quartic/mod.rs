//! Quartic threefolds in `P^4`: nodes, planes and quadric surfaces on them,
//! plane sections, and the family `Q Q' - L C` with its models in `P^5`.

mod generate;
mod input;
mod lines;
mod planes;
mod quadric_surface;
mod singular;

use serde::Serialize;

use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::projgeo::ProjPoint;

pub use generate::{generate_example, generate_with_nodes, GeneratedExample, GenerationLog};
pub use input::{parse_quartic_input, render_quartic_input};
pub use lines::{
    birational_models, lines_through_node, node_on_y, ExtensionCount, LineCount, LineThroughNode, ModelY, NodeOnY,
};
pub use planes::{classify_plane_section, contains_plane, plane_among, plane_count, PlaneSearch, PlaneSection};
pub use quadric_surface::{contains_quadric_surface, ideal_membership, QuadricMembership, QuadricSearch};
pub use singular::{singular_points_enumerate, SingularSearch};

/// `F = Q Q' - L C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<F: Field> {
    pub q: MultiPoly<F>,
    pub q_prime: MultiPoly<F>,
    pub l: MultiPoly<F>,
    pub c: MultiPoly<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuarticInput<F: Field> {
    pub f: MultiPoly<F>,
    pub decomposition: Option<Decomposition<F>>,
    /// Reasons the decomposition is degenerate; empty when it is not.
    pub degenerate: Vec<String>,
}

impl<F: Field> QuarticInput<F> {
    pub fn new(f: MultiPoly<F>) -> Result<Self> {
        check_form(&f, 4, "F")?;
        Ok(QuarticInput {
            f,
            decomposition: None,
            degenerate: Vec::new(),
        })
    }

    pub fn field(&self) -> &F {
        self.f.field()
    }
}

fn check_form<F: Field>(p: &MultiPoly<F>, degree: u32, name: &str) -> Result<()> {
    if p.nvars() != 5 {
        return Err(Error::dimension(format!("{name} must be a form in x0..x4, has {} variables", p.nvars())));
    }
    if p.degree() != degree {
        return Err(Error::Degree(format!("{name} must have degree {degree}, has degree {}", p.degree())));
    }
    Ok(())
}

/// Builds `F = Q Q' - L C`; degenerate decompositions are accepted and flagged.
pub fn build_qqlc<F: Field>(
    q: MultiPoly<F>,
    q_prime: MultiPoly<F>,
    l: MultiPoly<F>,
    c: MultiPoly<F>,
) -> Result<QuarticInput<F>> {
    check_form(&q, 2, "Q")?;
    check_form(&q_prime, 2, "Q'")?;
    check_form(&l, 1, "L")?;
    check_form(&c, 3, "C")?;
    let f = q.mul(&q_prime)?.sub(&l.mul(&c)?)?;
    let mut degenerate = Vec::new();
    if l.is_zero() {
        degenerate.push("L is zero".to_string());
    } else {
        let coeffs: Vec<F::Elem> = (0..5).map(|i| l.coefficient(&crate::poly::Exponent::unit(5, i))).collect();
        let h = crate::poly::LinearSubspaceParam::hyperplane(q.field(), &coeffs)?;
        if q.restrict_to_subspace(&h)?.is_zero() {
            degenerate.push("L divides Q, so F is reducible".to_string());
        }
        if q_prime.restrict_to_subspace(&h)?.is_zero() {
            degenerate.push("L divides Q', so F is reducible".to_string());
        }
    }
    if f.is_zero() {
        degenerate.push("F vanishes identically".to_string());
    }
    Ok(QuarticInput {
        f,
        decomposition: Some(Decomposition { q, q_prime, l, c }),
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord<F: Field> {
    pub point: ProjPoint<F>,
    pub gradient_zero: bool,
    pub hessian_rank: usize,
    pub is_node: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeRecordJson {
    pub point: Vec<String>,
    pub gradient_zero: bool,
    pub hessian_rank: usize,
    pub is_node: bool,
}

impl<F: Field> NodeRecord<F> {
    pub fn to_json(&self, field: &F) -> NodeRecordJson {
        NodeRecordJson {
            point: self.point.coords().iter().map(|c| field.format(c)).collect(),
            gradient_zero: self.gradient_zero,
            hessian_rank: self.hessian_rank,
            is_node: self.is_node,
        }
    }
}

/// Gradient and Hessian test at `x`; a node has zero gradient and Hessian
/// rank one less than the number of variables.
pub fn certify_node<F: Field>(f: &MultiPoly<F>, x: &ProjPoint<F>) -> Result<NodeRecord<F>> {
    let field = f.field();
    let ch = field.characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::UnsupportedField(format!(
            "{}: the Hessian test needs characteristic prime to 6",
            field.spec()
        )));
    }
    if x.coords().len() != f.nvars() {
        return Err(Error::dimension(format!(
            "point has {} coordinates, form has {} variables",
            x.coords().len(),
            f.nvars()
        )));
    }
    let gradient_zero = f.gradient_at(x.coords())?.iter().all(|g| field.is_zero(g));
    let hessian_rank = f.hessian_matrix(x.coords())?.rank();
    if gradient_zero {
        if !field.is_zero(&f.eval(x.coords())?) {
            return Err(Error::Inconsistency(format!(
                "gradient vanishes at {} but the form does not",
                x.format(field)
            )));
        }
        if hessian_rank == f.nvars() {
            return Err(Error::Inconsistency(format!(
                "full-rank Hessian at the singular point {}",
                x.format(field)
            )));
        }
    }
    Ok(NodeRecord {
        point: x.clone(),
        gradient_zero,
        hessian_rank,
        is_node: gradient_zero && hessian_rank + 1 == f.nvars(),
    })
}
