//! Evaluation matrices of degree-`d` monomials at a point set, the defect
//! of the set, separating forms and the factoriality decision tree.

use serde::Serialize;

use crate::arith::{ExactMatrix, Field, FieldSpec};
use crate::error::{Error, Result};
use crate::poly::{monomial_basis, Exponent, MultiPoly};
use crate::projgeo::PointConfig;

/// Rows are indexed by points, columns by degree-`d` monomials in graded-lex order.
#[derive(Clone, Debug)]
pub struct EvaluationMatrix<F: Field> {
    matrix: ExactMatrix<F>,
    monomials: Vec<Exponent>,
    d: u32,
}

impl<F: Field> EvaluationMatrix<F> {
    pub fn matrix(&self) -> &ExactMatrix<F> {
        &self.matrix
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Linear relations among the rows: each vector `l` has `sum l_i row_i = 0`.
    pub fn row_dependencies(&self) -> Vec<Vec<F::Elem>> {
        self.matrix.transpose().kernel_basis()
    }
}

pub fn evaluation_matrix<F: Field>(cfg: &PointConfig<F>, d: u32) -> Result<EvaluationMatrix<F>> {
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    Ok(EvaluationMatrix {
        matrix: cfg.evaluation_rows(&cfg.all_indices(), d)?,
        monomials: monomial_basis(cfg.ambient_dim() + 1, d),
        d,
    })
}

/// Number of points minus the rank of their evaluation matrix.
pub fn defect_of_points<F: Field>(cfg: &PointConfig<F>, d: u32) -> Result<usize> {
    if cfg.is_empty() {
        return Ok(0);
    }
    Ok(cfg.len() - evaluation_matrix(cfg, d)?.rank())
}

/// A degree-`d` form vanishing at every point except the `i`-th.
pub fn separating_form<F: Field>(cfg: &PointConfig<F>, i: usize, d: u32) -> Result<Option<MultiPoly<F>>> {
    if i >= cfg.len() {
        return Err(Error::invalid(format!("index {i} out of range for {} points", cfg.len())));
    }
    let f = cfg.field();
    let ev = evaluation_matrix(cfg, d)?;
    let mut rhs = vec![f.zero(); cfg.len()];
    rhs[i] = f.one();
    let Some(coeffs) = ev.matrix.solve(&rhs)? else {
        return Ok(None);
    };
    let form = MultiPoly::from_coefficients(f, cfg.ambient_dim() + 1, d, &coeffs);
    for (j, p) in cfg.points().iter().enumerate() {
        if f.is_zero(&form.eval(p.coords())?) != (j != i) {
            return Err(Error::Inconsistency(format!("separating form misbehaves at point {j}")));
        }
    }
    Ok(Some(form))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremPath {
    QFactorial,
    ExceptionCase,
    OutsideHypotheses,
}

/// Containment facts feeding the decision tree; `None` means not established.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictInputs {
    pub contains_plane: Option<bool>,
    pub contains_quadric: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictWitnesses {
    /// Why the decision tree took its branch.
    pub rule: String,
    /// Basis of row relations of the degree-3 evaluation matrix.
    pub dependencies: Vec<Vec<String>>,
    /// Points admitting no separating cubic.
    pub unseparated: Vec<usize>,
    /// Set only when the defect is positive.
    pub evidence: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorialityVerdict {
    pub s: usize,
    pub theorem_path: TheoremPath,
    pub citation: Option<String>,
    pub defect: usize,
    pub field: FieldSpec,
    pub consistent: bool,
    pub witnesses: VerdictWitnesses,
}

pub const CITE_AT_MOST_8: &str = "Thm1.1-s≤8";
pub const CITE_NINE_NO_PLANE: &str = "Thm1.1-s=9-noplane";
pub const CITE_AT_MOST_11: &str = "Thm1.3-s≤11";
pub const CITE_TWELVE_NO_QUADRIC: &str = "Thm1.3-s=12-noquadric";
pub const CITE_TWELVE_QUADRIC: &str = "Thm1.3-s=12-quadric";

fn decide(s: usize, inputs: VerdictInputs) -> (TheoremPath, Option<&'static str>, String) {
    use TheoremPath::*;
    if s <= 8 {
        return (QFactorial, Some(CITE_AT_MOST_8), format!("{s} nodes, at most 8"));
    }
    if s > 12 {
        return (OutsideHypotheses, None, format!("{s} nodes, more than 12"));
    }
    match inputs.contains_plane {
        None => return (OutsideHypotheses, None, "plane containment not established".into()),
        Some(true) => return (OutsideHypotheses, None, "the quartic contains a plane".into()),
        Some(false) => {}
    }
    match s {
        9 => (QFactorial, Some(CITE_NINE_NO_PLANE), "9 nodes, no plane".into()),
        10 | 11 => (QFactorial, Some(CITE_AT_MOST_11), format!("{s} nodes, no plane")),
        _ => match inputs.contains_quadric {
            Some(false) => (
                QFactorial,
                Some(CITE_TWELVE_NO_QUADRIC),
                "12 nodes, no plane, no quadric surface".into(),
            ),
            Some(true) => (
                ExceptionCase,
                Some(CITE_TWELVE_QUADRIC),
                "12 nodes, no plane, contains a quadric surface".into(),
            ),
            None => (
                OutsideHypotheses,
                None,
                "12 nodes, no plane, quadric-surface containment not established".into(),
            ),
        },
    }
}

/// Runs the decision tree on `s` nodes and cross-checks it against the cubic defect.
pub fn factoriality_verdict<F: Field>(
    s: usize,
    inputs: VerdictInputs,
    nodes: &PointConfig<F>,
) -> Result<FactorialityVerdict> {
    if s != nodes.len() {
        return Err(Error::invalid(format!(
            "node count {s} does not match the {} supplied points",
            nodes.len()
        )));
    }
    let (path, citation, rule) = decide(s, inputs);
    let f = nodes.field();
    let (defect, dependencies) = if nodes.is_empty() {
        (0, Vec::new())
    } else {
        let ev = evaluation_matrix(nodes, 3)?;
        (s - ev.rank(), ev.row_dependencies())
    };
    let unseparated = (0..s)
        .filter(|&i| dependencies.iter().any(|l| !f.is_zero(&l[i])))
        .collect();
    let evidence = (defect > 0).then(|| {
        format!("defect evidence: the nodes fail to impose independent conditions on cubics (defect {defect}), so the quartic is not Q-factorial")
    });
    Ok(FactorialityVerdict {
        s,
        theorem_path: path,
        citation: citation.map(str::to_owned),
        defect,
        field: f.spec(),
        consistent: !(path == TheoremPath::QFactorial && defect > 0),
        witnesses: VerdictWitnesses {
            rule,
            dependencies: dependencies
                .iter()
                .map(|l| l.iter().map(|c| f.format(c)).collect())
                .collect(),
            unseparated,
            evidence,
        },
    })
}
