use itertools::Itertools;
use serde::Serialize;

use crate::arith::{Field, FieldSpec, Gf, MAX_FIELD_ORDER};
use crate::enumerate::{normalize_gf, CompiledForm, ProjectiveSpace};
use crate::error::{Error, Result};
use crate::poly::{Exponent, LinearSubspaceParam, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PlaneSearch {
    /// `basis` holds three points spanning a plane on which the form vanishes.
    Found {
        search_field: FieldSpec,
        planes_checked: u128,
        basis: Vec<Vec<String>>,
    },
    /// No plane defined over `search_field` lies on the hypersurface.
    NotFound {
        search_field: FieldSpec,
        planes_checked: u128,
    },
    BudgetExceeded {
        required: Option<u128>,
        budget: u128,
        reason: String,
    },
}

impl PlaneSearch {
    pub fn contains_plane(&self) -> Option<bool> {
        match self {
            PlaneSearch::Found { .. } => Some(true),
            PlaneSearch::NotFound { .. } => Some(false),
            PlaneSearch::BudgetExceeded { .. } => None,
        }
    }
}

/// The smallest field among `GF(p)` and the field of `f` holding all
/// coefficients, with `f` moved there. Prime-field elements share their
/// encoding with their images in any extension.
pub(crate) fn coefficient_field<F: Field>(f: &MultiPoly<F>) -> Option<(Gf, MultiPoly<Gf>)> {
    let gf = f.field().as_finite()?.clone();
    let vals: Vec<u32> = f.terms().map(|(_, c)| f.field().to_finite_elem(c).expect("finite")).collect();
    let small = if gf.k() > 1 && vals.iter().all(|&v| v < gf.p()) {
        Gf::prime(gf.p() as u64).ok()?
    } else {
        gf
    };
    let g = f.map_coefficients(&small, |c| f.field().to_finite_elem(c).expect("finite"));
    Some((small, g))
}

/// Number of 2-planes in `P^4(GF(q))`.
pub fn plane_count(q: u128) -> u128 {
    (q.pow(5) - 1) * (q.pow(4) - 1) / ((q * q - 1) * (q - 1))
}

/// Exhaustive search over the planes of `P^4` defined over the coefficient field.
pub fn contains_plane<F: Field>(f: &MultiPoly<F>, budget: u128) -> Result<PlaneSearch> {
    if f.nvars() != 5 {
        return Err(Error::dimension("plane search needs a form in x0..x4"));
    }
    let Some((small, g)) = coefficient_field(f) else {
        return Ok(PlaneSearch::BudgetExceeded {
            required: None,
            budget,
            reason: format!("no exhaustive plane search over {}", f.field().spec()),
        });
    };
    let q = small.order() as u128;
    let space = ProjectiveSpace::new(&small, 4)?;
    let required = plane_count(q) + space.size() as u128;
    if required > budget {
        return Ok(PlaneSearch::BudgetExceeded {
            required: Some(required),
            budget,
            reason: format!("{} planes over {}", plane_count(q), small.spec()),
        });
    }
    let form = CompiledForm::new(&g);
    let on_x: Vec<bool> = {
        let mut v = vec![false; space.size() as usize];
        for p in space.par_filter(|x| form.eval(&small, x) == 0) {
            v[space.index_of(&p) as usize] = true;
        }
        v
    };
    let plane_points = ProjectiveSpace::new(&small, 2)?;
    let coeffs: Vec<Vec<u32>> = (0..plane_points.size()).map(|i| plane_points.point(i)).collect();
    let mut checked = 0u128;
    let mut x = [0u32; 5];
    for pivots in (0..5).combinations(3) {
        let free: Vec<(usize, usize)> = (0..3)
            .flat_map(|r| ((pivots[r] + 1)..5).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for code in 0..total {
            checked += 1;
            let mut rows = [[0u32; 5]; 3];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = (c % q as u64) as u32;
                c /= q as u64;
            }
            let all_on = coeffs.iter().all(|abc| {
                for (j, xj) in x.iter_mut().enumerate() {
                    let mut acc = 0;
                    for r in 0..3 {
                        acc = small.add_fast(acc, small.mul_fast(abc[r], rows[r][j]));
                    }
                    *xj = acc;
                }
                normalize_gf(&small, &mut x);
                on_x[space.index_of(&x) as usize]
            });
            if !all_on {
                continue;
            }
            let plane = LinearSubspaceParam::from_columns(&small, rows.iter().map(|r| r.to_vec()).collect())?;
            if g.restrict_to_subspace(&plane)?.is_zero() {
                return Ok(PlaneSearch::Found {
                    search_field: small.spec(),
                    planes_checked: checked,
                    basis: rows.iter().map(|r| r.iter().map(|c| small.format(c)).collect()).collect(),
                });
            }
        }
    }
    Ok(PlaneSearch::NotFound {
        search_field: small.spec(),
        planes_checked: checked,
    })
}

/// Whether the form vanishes on one of the given planes; index of the first such.
pub fn plane_among<F: Field>(f: &MultiPoly<F>, planes: &[LinearSubspaceParam<F>]) -> Result<Option<usize>> {
    for (i, p) in planes.iter().enumerate() {
        if f.restrict_to_subspace(p)?.is_zero() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneSection {
    PlaneContained,
    DoubleConic {
        conic: String,
    },
    /// Lines and intersection points are written over `extension`.
    FourLines {
        extension: FieldSpec,
        lines: Vec<String>,
        intersections: Vec<Vec<String>>,
        distinct_intersections: usize,
    },
    Other,
    Indeterminate {
        reason: String,
    },
}

/// Classifies `F` restricted to a plane: double conic, four distinct lines, or neither.
pub fn classify_plane_section<F: Field>(f: &MultiPoly<F>, plane: &LinearSubspaceParam<F>) -> Result<PlaneSection> {
    if plane.params() != 3 {
        return Err(Error::dimension(format!("expected a plane, got {} parameters", plane.params())));
    }
    let g = f.restrict_to_subspace(plane)?;
    if g.is_zero() {
        return Ok(PlaneSection::PlaneContained);
    }
    if let Some(h) = g.monic().sqrt() {
        return Ok(PlaneSection::DoubleConic { conic: h.to_string() });
    }
    let Some(base) = f.field().as_finite() else {
        return Ok(PlaneSection::Indeterminate {
            reason: "splitting into lines is only searched over finite fields".into(),
        });
    };
    let g = g.map_coefficients(base, |c| f.field().to_finite_elem(c).expect("finite"));
    for d in (1..=4).filter(|d| d % base.k() == 0) {
        if (base.p() as u64).pow(d) > MAX_FIELD_ORDER as u64 {
            break;
        }
        let ext = Gf::new(base.p() as u64, d)?;
        let emb = ext.embedding_from(base)?;
        let ge = g.map_coefficients(&ext, |c| emb.map(*c));
        if let Some(lines) = four_lines(&ext, &ge)? {
            let mut intersections = Vec::new();
            for (a, b) in lines.iter().tuple_combinations() {
                let mut x = cross(&ext, a, b);
                normalize_gf(&ext, &mut x);
                intersections.push(x);
            }
            let distinct = intersections.iter().unique().count();
            return Ok(PlaneSection::FourLines {
                extension: ext.spec(),
                lines: lines
                    .iter()
                    .map(|l| linear_form(&ext, l).to_string())
                    .collect(),
                intersections: intersections
                    .iter()
                    .map(|x| x.iter().map(|c| ext.format(c)).collect())
                    .collect(),
                distinct_intersections: distinct,
            });
        }
    }
    Ok(PlaneSection::Other)
}

fn cross(f: &Gf, a: &[u32], b: &[u32]) -> Vec<u32> {
    let m = |i: usize, j: usize| f.sub_fast(f.mul_fast(a[i], b[j]), f.mul_fast(a[j], b[i]));
    vec![m(1, 2), m(2, 0), m(0, 1)]
}

fn linear_form(f: &Gf, l: &[u32]) -> MultiPoly<Gf> {
    let mut out = MultiPoly::zero(f, 3, 1);
    for (i, c) in l.iter().enumerate() {
        out = out.add(&MultiPoly::var(f, 3, i).scale(c)).expect("same ring");
    }
    out
}

/// Points of the line `{n . y = 0}` where `g` vanishes, when there are four distinct ones.
fn four_roots(f: &Gf, g: &MultiPoly<Gf>, n: &[u32]) -> Result<Option<Vec<Vec<u32>>>> {
    let line = LinearSubspaceParam::hyperplane(f, n)?;
    let h = g.restrict_to_subspace(&line)?;
    if h.is_zero() {
        return Ok(None);
    }
    // h(1, t) = sum c[i] t^i
    let d = h.degree() as u16;
    let c: Vec<u32> = (0..=d).map(|i| h.coefficient(&Exponent(vec![d - i, i]))).collect();
    let (u, v) = (line.column(0), line.column(1));
    let mut roots = Vec::new();
    if c[d as usize] == 0 {
        roots.push(v.clone());
    }
    for t in 0..f.order() {
        let val = c.iter().rev().fold(0, |acc, &ci| f.add_fast(f.mul_fast(acc, t), ci));
        if val == 0 {
            roots.push((0..3).map(|i| f.add_fast(u[i], f.mul_fast(t, v[i]))).collect());
            if roots.len() > 4 {
                return Ok(None);
            }
        }
    }
    if roots.len() != 4 {
        return Ok(None);
    }
    Ok(Some(roots))
}

/// Linear forms `l_1..l_4`, pairwise non-proportional, with `g` proportional to their product.
fn four_lines(f: &Gf, g: &MultiPoly<Gf>) -> Result<Option<Vec<Vec<u32>>>> {
    let p = f.p().min(9);
    let normals: Vec<Vec<u32>> = (0..p)
        .cartesian_product(0..p)
        .map(|(a, b)| vec![1, a, b])
        .chain([vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 1]])
        .collect();
    let mut good: Vec<Vec<Vec<u32>>> = Vec::new();
    for n in &normals {
        let Some(roots) = four_roots(f, g, n)? else { continue };
        if let Some(prev) = good.iter().find(|r| r.iter().all(|a| !roots.contains(a))) {
            let mut lines: Vec<Vec<u32>> = Vec::new();
            for a in prev {
                for b in &roots {
                    let seg = LinearSubspaceParam::from_columns(f, vec![a.clone(), b.clone()])?;
                    if g.restrict_to_subspace(&seg)?.is_zero() {
                        let mut l = cross(f, a, b);
                        normalize_gf(f, &mut l);
                        if !lines.contains(&l) {
                            lines.push(l);
                        }
                    }
                }
            }
            if lines.len() != 4 {
                return Ok(None);
            }
            let product = lines
                .iter()
                .map(|l| linear_form(f, l))
                .reduce(|a, b| a.mul(&b).expect("same ring"))
                .expect("four factors");
            return Ok(product.is_proportional_to(g).then_some(lines));
        }
        good.push(roots);
        if good.len() > 12 {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use crate::poly::parse_poly;

    fn coordinate_plane<F: Field>(field: &F) -> LinearSubspaceParam<F> {
        let e = |i: usize| (0..5).map(|j| if i == j { field.one() } else { field.zero() }).collect();
        LinearSubspaceParam::from_columns(field, vec![e(0), e(1), e(2)]).unwrap()
    }

    #[test]
    fn plane_in_ideal_is_found() {
        let g = Gf::prime(5).unwrap();
        let f = parse_poly(&g, "x0*x1^3 + x1*x2^3 + x0*x4^3 - x1*x3*x4^2", 5).unwrap();
        match contains_plane(&f, u128::MAX).unwrap() {
            PlaneSearch::Found { basis, .. } => {
                let plane = LinearSubspaceParam::from_columns(
                    &g,
                    basis.iter().map(|r| r.iter().map(|c| c.parse().unwrap()).collect()).collect(),
                )
                .unwrap();
                assert!(f.restrict_to_subspace(&plane).unwrap().is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fermat_quartic_over_gf5_has_no_rational_plane() {
        let g = Gf::prime(5).unwrap();
        let f = parse_poly(&g, "x0^4 + x1^4 + x2^4 + x3^4 + 2*x4^4 + x0*x1*x2*x3", 5).unwrap();
        assert_eq!(contains_plane(&f, u128::MAX).unwrap().contains_plane(), Some(false));
        assert_eq!(plane_count(5), 20306);
    }

    #[test]
    fn rationals_need_candidates() {
        let f = parse_poly(&Rationals, "x0*x3^3 + x1*x4^3", 5).unwrap();
        assert!(matches!(contains_plane(&f, u128::MAX).unwrap(), PlaneSearch::BudgetExceeded { .. }));
        assert_eq!(plane_among(&f, &[coordinate_plane(&Rationals)]).unwrap(), Some(0));
    }

    #[test]
    fn section_types() {
        let g = Gf::prime(11).unwrap();
        let plane = coordinate_plane(&g);
        let dc = parse_poly(&g, "(x0*x1 - x2^2)^2 + x3*x4^3", 5).unwrap();
        assert!(matches!(classify_plane_section(&dc, &plane).unwrap(), PlaneSection::DoubleConic { .. }));
        let fl = parse_poly(&g, "x0*x1*(x0 + x1)*(x0 + 2*x2) + x3^4", 5).unwrap();
        match classify_plane_section(&fl, &plane).unwrap() {
            PlaneSection::FourLines { intersections, distinct_intersections, .. } => {
                assert_eq!(intersections.len(), 6);
                assert_eq!(distinct_intersections, 4);
            }
            other => panic!("{other:?}"),
        }
        let generic = parse_poly(&g, "x0^4 + x1^4 + 3*x2^4 + x0*x1*x2^2 + x4^4", 5).unwrap();
        assert_eq!(classify_plane_section(&generic, &plane).unwrap(), PlaneSection::Other);
        let contained = parse_poly(&g, "x3*x0^3 + x4^4", 5).unwrap();
        assert_eq!(classify_plane_section(&contained, &plane).unwrap(), PlaneSection::PlaneContained);
    }

    #[test]
    fn lines_over_an_extension() {
        let g = Gf::prime(7).unwrap();
        let plane = coordinate_plane(&g);
        // x0^2 + x1^2 splits only over GF(49)
        let f = parse_poly(&g, "(x0^2 + x1^2)*(x0 - x2)*(x1 - 3*x2)", 5).unwrap();
        match classify_plane_section(&f, &plane).unwrap() {
            PlaneSection::FourLines { extension, distinct_intersections, .. } => {
                assert_eq!(extension, FieldSpec::Finite { p: 7, k: 2 });
                assert_eq!(distinct_intersections, 6);
            }
            other => panic!("{other:?}"),
        }
    }
}
