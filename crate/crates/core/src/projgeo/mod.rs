//! Finite point configurations in projective space.

mod points_file;
mod twisted;

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use itertools::Itertools;
use serde::Serialize;

use crate::arith::{binomial, ExactMatrix, Field};
use crate::error::{Error, Result};
use crate::poly::{monomial_basis, LinearSubspaceParam};

pub use points_file::{parse_points, read_field_header};
pub use twisted::{twisted_cubic_test, TwistedCubicVerdict};

/// A point of `P^n`, normalized so its first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct ProjPoint<F: Field> {
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(field: &F, mut coords: Vec<F::Elem>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::dimension("a point needs at least one coordinate"));
        }
        if coords.iter().any(|c| !field.contains(c)) {
            return Err(Error::ForeignElement(field.spec()));
        }
        let lead = coords
            .iter()
            .position(|c| !field.is_zero(c))
            .ok_or_else(|| Error::invalid("the zero vector is not a projective point"))?;
        let inv = field.inv(&coords[lead]).expect("nonzero");
        for c in coords[lead..].iter_mut() {
            *c = field.mul(c, &inv);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(field: &F, coords: &[i64]) -> Result<Self> {
        Self::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    /// Dimension `n` of the ambient `P^n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn format(&self, field: &F) -> String {
        format!("({})", self.coords.iter().map(|c| field.format(c)).join(":"))
    }
}

impl<F: Field> PartialEq for ProjPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl<F: Field> Eq for ProjPoint<F> {}

impl<F: Field> Hash for ProjPoint<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl<F: Field> PartialOrd for ProjPoint<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for ProjPoint<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

/// An ordered list of pairwise distinct points of `P^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig<F: Field> {
    field: F,
    n: usize,
    points: Vec<ProjPoint<F>>,
}

impl<F: Field> PointConfig<F> {
    pub fn new(field: &F, n: usize, points: Vec<ProjPoint<F>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.dim() != n {
                return Err(Error::dimension(format!(
                    "point {i} lives in P^{} but the configuration is in P^{n}",
                    p.dim()
                )));
            }
            if let Some(j) = points[..i].iter().position(|q| q == p) {
                return Err(Error::invalid(format!(
                    "points {j} and {i} coincide: {}",
                    p.format(field)
                )));
            }
        }
        Ok(PointConfig {
            field: field.clone(),
            n,
            points,
        })
    }

    pub fn from_coords(field: &F, n: usize, coords: Vec<Vec<F::Elem>>) -> Result<Self> {
        let points = coords
            .into_iter()
            .map(|c| ProjPoint::new(field, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, n, points)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint<F>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ProjPoint<F> {
        &self.points[i]
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    fn check_indices(&self, subset: &[usize]) -> Result<()> {
        if let Some(&i) = subset.iter().find(|&&i| i >= self.len()) {
            return Err(Error::invalid(format!(
                "index {i} out of range for {} points",
                self.len()
            )));
        }
        Ok(())
    }

    pub fn subset(&self, subset: &[usize]) -> Result<Self> {
        self.check_indices(subset)?;
        let points = subset.iter().map(|&i| self.points[i].clone()).collect();
        Self::new(&self.field, self.n, points)
    }

    /// Rows are the coordinate vectors of the chosen points.
    pub fn coordinate_matrix(&self, subset: &[usize]) -> Result<ExactMatrix<F>> {
        self.check_indices(subset)?;
        let rows = subset
            .iter()
            .map(|&i| self.points[i].coords.clone())
            .collect();
        ExactMatrix::from_rows_with_cols(&self.field, rows, self.n + 1)
    }

    /// Rows are the degree-`d` monomials (graded-lex) evaluated at the chosen points.
    pub fn evaluation_rows(&self, subset: &[usize], d: u32) -> Result<ExactMatrix<F>> {
        self.check_indices(subset)?;
        let basis = monomial_basis(self.n + 1, d);
        let rows = subset
            .iter()
            .map(|&i| {
                basis
                    .iter()
                    .map(|e| e.eval(&self.field, &self.points[i].coords))
                    .collect()
            })
            .collect();
        ExactMatrix::from_rows_with_cols(&self.field, rows, basis.len())
    }

    /// Re-expresses the chosen points in a basis of a `dim`-dimensional
    /// subspace containing their span. The basis starts with the reduced
    /// spanning rows and is completed by standard vectors in index order.
    pub fn frame(&self, subset: &[usize], dim: usize) -> Result<(LinearSubspaceParam<F>, PointConfig<F>)> {
        let span = self.span_dim(subset)?;
        if span > dim as i64 || dim > self.n {
            return Err(Error::dimension(format!(
                "points span a P^{span}, which does not fit in a P^{dim} inside P^{}",
                self.n
            )));
        }
        let rref = self.coordinate_matrix(subset)?.rref();
        let f = &self.field;
        let mut cols: Vec<Vec<F::Elem>> = (0..rref.pivots.len())
            .map(|r| rref.matrix.row(r).to_vec())
            .collect();
        for i in 0..=self.n {
            if cols.len() == dim + 1 {
                break;
            }
            let mut e = vec![f.zero(); self.n + 1];
            e[i] = f.one();
            let mut trial = cols.clone();
            trial.push(e.clone());
            if crate::arith::rank(&ExactMatrix::from_rows(f, trial)?) == cols.len() + 1 {
                cols.push(e);
            }
        }
        let param = LinearSubspaceParam::from_columns(f, cols)?;
        let coords = subset
            .iter()
            .map(|&i| {
                param
                    .coordinates_of(&self.points[i].coords)?
                    .ok_or_else(|| Error::Inconsistency("point outside its own span".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let local = PointConfig::from_coords(f, dim, coords)?;
        Ok((param, local))
    }

    /// Projective dimension of the span of the chosen points.
    pub fn span_dim(&self, subset: &[usize]) -> Result<i64> {
        if subset.is_empty() {
            return Err(Error::invalid("span of an empty subset"));
        }
        Ok(self.coordinate_matrix(subset)?.rank() as i64 - 1)
    }
}

/// Count of points in a best `k`-plane, with the points realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceMax {
    pub k: usize,
    pub count: usize,
    pub witness: Vec<usize>,
}

/// Maximum number of configuration points on a `k`-dimensional subspace.
///
/// Ties are broken by the lexicographically first spanning subset.
pub fn max_in_subspace<F: Field>(cfg: &PointConfig<F>, k: usize) -> Result<SubspaceMax> {
    if k == 0 || k > cfg.ambient_dim() {
        return Err(Error::invalid(format!(
            "subspace dimension {k} outside 1..={}",
            cfg.ambient_dim()
        )));
    }
    let all = cfg.all_indices();
    if cfg.is_empty() || cfg.span_dim(&all)? <= k as i64 {
        return Ok(SubspaceMax {
            k,
            count: cfg.len(),
            witness: all,
        });
    }
    let mut best = SubspaceMax {
        k,
        count: 0,
        witness: Vec::new(),
    };
    for subset in (0..cfg.len()).combinations(k + 1) {
        let m = cfg.coordinate_matrix(&subset)?;
        if m.rank() != k + 1 {
            continue;
        }
        let forms = m.kernel_basis();
        let on: Vec<usize> = all
            .iter()
            .copied()
            .filter(|&i| on_linear_forms(cfg.field(), &forms, cfg.point(i).coords()))
            .collect();
        if on.len() > best.count {
            best.count = on.len();
            best.witness = on;
        }
    }
    Ok(best)
}

/// Whether `x` is annihilated by every linear form in `forms`.
pub(crate) fn on_linear_forms<F: Field>(f: &F, forms: &[Vec<F::Elem>], x: &[F::Elem]) -> bool {
    forms.iter().all(|l| {
        let v = l
            .iter()
            .zip(x)
            .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
        f.is_zero(&v)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceBound {
    pub k: usize,
    pub max: usize,
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EisenbudKohReport {
    pub d: u32,
    pub passed: bool,
    pub bounds: Vec<SubspaceBound>,
    /// First violated dimension, with the points on the offending subspace.
    pub violation: Option<SubspaceMax>,
}

/// Checks that every `k`-plane holds at most `dk+1` points, for `k = 1..=n`.
pub fn eisenbud_koh_check<F: Field>(cfg: &PointConfig<F>, d: u32) -> Result<EisenbudKohReport> {
    if d == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let mut bounds = Vec::new();
    let mut violation = None;
    for k in 1..=cfg.ambient_dim() {
        let m = max_in_subspace(cfg, k)?;
        let bound = d as usize * k + 1;
        bounds.push(SubspaceBound {
            k,
            max: m.count,
            bound,
        });
        if m.count > bound && violation.is_none() {
            violation = Some(m);
        }
    }
    Ok(EisenbudKohReport {
        d,
        passed: violation.is_none(),
        bounds,
        violation,
    })
}

/// Dimension of the space of degree-`d` forms vanishing at the chosen points.
pub fn vanishing_system_dim<F: Field>(cfg: &PointConfig<F>, subset: &[usize], d: u32) -> Result<usize> {
    let total = binomial(cfg.ambient_dim() + d as usize, d as usize);
    if subset.is_empty() {
        return Ok(total);
    }
    Ok(total - cfg.evaluation_rows(subset, d)?.rank())
}

/// Basis of the degree-`d` forms vanishing at the chosen points, as
/// coefficient vectors over `monomial_basis(n+1, d)`.
pub fn vanishing_forms<F: Field>(cfg: &PointConfig<F>, subset: &[usize], d: u32) -> Result<Vec<Vec<F::Elem>>> {
    if subset.is_empty() {
        let total = binomial(cfg.ambient_dim() + d as usize, d as usize);
        return Ok(ExactMatrix::identity(cfg.field(), total).to_rows());
    }
    Ok(cfg.evaluation_rows(subset, d)?.kernel_basis())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum QuadricVerdict {
    NoCommonP3 { span_dim: i64 },
    NoQuadric,
    UniqueQuadric,
    Pencil { dim: usize },
}

/// Quadrics through the configuration inside the `P^3` it spans.
pub fn pencil_of_quadrics_test<F: Field>(cfg: &PointConfig<F>) -> Result<QuadricVerdict> {
    if cfg.is_empty() {
        return Err(Error::invalid("empty configuration"));
    }
    let all = cfg.all_indices();
    let span = cfg.span_dim(&all)?;
    if span > 3 || cfg.ambient_dim() < 3 {
        return Ok(QuadricVerdict::NoCommonP3 { span_dim: span });
    }
    let (_, local) = cfg.frame(&all, 3)?;
    Ok(match vanishing_system_dim(&local, &all, 2)? {
        0 => QuadricVerdict::NoQuadric,
        1 => QuadricVerdict::UniqueQuadric,
        dim => QuadricVerdict::Pencil { dim },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SixPointsReport {
    pub line_with_4: bool,
    pub line_witness: Option<Vec<usize>>,
    pub plane_with_7: bool,
    pub plane_witness: Option<Vec<usize>>,
    pub twisted_cubic_with_10: TriState,
    pub twisted_cubic_witness: Option<Vec<usize>>,
    /// Ten-point subsets inside a `P^3` whose test was inconclusive.
    pub twisted_cubic_undecided: Vec<Vec<usize>>,
    pub coplanar_six: Vec<Vec<usize>>,
}

/// Incidence report on lines, planes and twisted cubics for a configuration in `P^4`.
pub fn lemma_six_points_report<F: Field>(cfg: &PointConfig<F>, budget: u128) -> Result<SixPointsReport> {
    if cfg.ambient_dim() != 4 {
        return Err(Error::dimension(format!(
            "expected points of P^4, got P^{}",
            cfg.ambient_dim()
        )));
    }
    let line = max_in_subspace(cfg, 1)?;
    let plane = max_in_subspace(cfg, 2)?;
    let mut tc = TriState::No;
    let mut tc_witness = None;
    let mut undecided = Vec::new();
    for subset in (0..cfg.len()).combinations(10) {
        if cfg.span_dim(&subset)? > 3 {
            continue;
        }
        match twisted_cubic_test(cfg, &subset, budget)? {
            TwistedCubicVerdict::Yes { .. } => {
                tc = TriState::Yes;
                tc_witness = Some(subset);
                break;
            }
            TwistedCubicVerdict::No { .. } => {}
            TwistedCubicVerdict::Indeterminate { .. } => {
                tc = TriState::Indeterminate;
                undecided.push(subset);
            }
        }
    }
    let coplanar_six = (0..cfg.len())
        .combinations(6)
        .filter(|s| cfg.span_dim(s).map(|d| d <= 2).unwrap_or(false))
        .collect();
    Ok(SixPointsReport {
        line_with_4: line.count >= 4,
        line_witness: (line.count >= 4).then_some(line.witness),
        plane_with_7: plane.count >= 7,
        plane_witness: (plane.count >= 7).then_some(plane.witness),
        twisted_cubic_with_10: tc,
        twisted_cubic_witness: tc_witness,
        twisted_cubic_undecided: undecided,
        coplanar_six,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Gf, Rationals};

    fn cfg_i64<F: Field>(f: &F, n: usize, pts: &[&[i64]]) -> PointConfig<F> {
        let points = pts.iter().map(|p| ProjPoint::from_i64(f, p).unwrap()).collect();
        PointConfig::new(f, n, points).unwrap()
    }

    fn simplex<F: Field>(f: &F) -> PointConfig<F> {
        let rows: Vec<Vec<i64>> = (0..5)
            .map(|i| (0..5).map(|j| i64::from(i == j)).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        cfg_i64(f, 4, &refs)
    }

    #[test]
    fn normalization_and_duplicates() {
        let f = Rationals;
        let p = ProjPoint::from_i64(&f, &[0, 2, 4]).unwrap();
        assert_eq!(p.format(&f), "(0:1:2)");
        assert!(ProjPoint::from_i64(&f, &[0, 0]).is_err());
        let q = ProjPoint::from_i64(&f, &[0, 1, 2]).unwrap();
        assert!(PointConfig::new(&f, 2, vec![p, q]).is_err());
    }

    #[test]
    fn span_dims() {
        let f = Rationals;
        let c = cfg_i64(&f, 2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(c.span_dim(&[0]).unwrap(), 0);
        assert_eq!(c.span_dim(&[0, 1, 2]).unwrap(), 1);
        assert!(c.span_dim(&[]).is_err());
    }

    #[test]
    fn simplex_planes_hold_three() {
        let f = Gf::prime(7).unwrap();
        let c = simplex(&f);
        assert_eq!(max_in_subspace(&c, 2).unwrap().count, 3);
        assert_eq!(max_in_subspace(&c, 2).unwrap().witness, vec![0, 1, 2]);
    }

    #[test]
    fn collinear_points_violate_the_line_bound() {
        let f = Rationals;
        let c = cfg_i64(&f, 2, &[&[1, 0, 0], &[1, 1, 0], &[1, 2, 0], &[1, 3, 0], &[1, 4, 0]]);
        let r = eisenbud_koh_check(&c, 3).unwrap();
        assert!(!r.passed);
        let v = r.violation.unwrap();
        assert_eq!((v.k, v.count), (1, 5));
    }

    #[test]
    fn vanishing_dims() {
        let f = Rationals;
        let c = cfg_i64(&f, 3, &[&[1, 2, 3, 4]]);
        assert_eq!(vanishing_system_dim(&c, &[], 2).unwrap(), 10);
        assert_eq!(vanishing_system_dim(&c, &[0], 2).unwrap(), 9);
        assert_eq!(vanishing_forms(&c, &[0], 2).unwrap().len(), 9);
    }

    #[test]
    fn frame_preserves_incidence() {
        let f = Gf::prime(11).unwrap();
        let c = cfg_i64(&f, 4, &[&[1, 0, 0, 0, 2], &[0, 1, 0, 0, 3], &[1, 1, 0, 0, 5], &[0, 0, 1, 0, 1]]);
        let (param, local) = c.frame(&c.all_indices(), 3).unwrap();
        assert_eq!(param.params(), 4);
        assert_eq!(local.span_dim(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(local.span_dim(&local.all_indices()).unwrap(), 2);
    }

    #[test]
    fn six_point_report_flags_a_line() {
        let f = Gf::prime(13).unwrap();
        let c = cfg_i64(
            &f,
            4,
            &[
                &[1, 0, 0, 0, 0],
                &[1, 1, 0, 0, 0],
                &[1, 2, 0, 0, 0],
                &[1, 3, 0, 0, 0],
                &[0, 0, 1, 0, 0],
                &[0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 1],
            ],
        );
        let r = lemma_six_points_report(&c, 1 << 20).unwrap();
        assert!(r.line_with_4);
        assert_eq!(r.line_witness, Some(vec![0, 1, 2, 3]));
        assert!(!r.plane_with_7);
        assert_eq!(r.twisted_cubic_with_10, TriState::No);
    }
}
