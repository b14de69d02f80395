use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{build_qqlc, certify_node, render_quartic_input, singular_points_enumerate, NodeRecord, QuarticInput};
use crate::arith::{ExactMatrix, Field, Gf};
use crate::enumerate::CommonZeros;
use crate::error::{Error, Result};
use crate::poly::{monomial_basis, LinearSubspaceParam, MultiPoly};
use crate::projgeo::ProjPoint;

const MAX_ATTEMPTS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationLog {
    pub seed: u64,
    pub p: u64,
    pub attempts: u32,
    /// Points of the curve `{L = Q = Q' = 0}` over `GF(p)` and `GF(p^2)`.
    pub curve_points: Option<(usize, usize)>,
    /// Frobenius orbits of the 11 chosen nodes: fixed points and pairs.
    pub chosen_orbits: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct GeneratedExample {
    /// Coefficients lie in `GF(p)`; the field is `GF(p^2)`, where every node is rational.
    pub input: QuarticInput<Gf>,
    pub nodes: Vec<NodeRecord<Gf>>,
    pub log: GenerationLog,
}

impl GeneratedExample {
    pub fn render(&self) -> String {
        render_quartic_input(&self.input, &format!("field p={},k=2", self.log.p))
    }
}

fn random_form<R: Rng>(field: &Gf, nvars: usize, degree: u32, rng: &mut R) -> MultiPoly<Gf> {
    let coeffs: Vec<u32> = monomial_basis(nvars, degree).iter().map(|_| field.random(rng)).collect();
    MultiPoly::from_coefficients(field, nvars, degree, &coeffs)
}

/// Seeded search for `F = Q Q' - L C` over `GF(p)` whose 12 nodes are all
/// `GF(p^2)`-rational.
///
/// The nodes are `{L = Q = Q' = C = 0}`: an elliptic quartic curve in the
/// hyperplane `{L = 0}` cut by a cubic. The cubic is taken through a
/// Frobenius-stable set of 11 curve points over `GF(p^2)`, which forces the
/// residual 12th point to be fixed by Frobenius.
pub fn generate_example(seed: u64, p: u64, budget: u128) -> Result<GeneratedExample> {
    if p < 5 {
        return Err(Error::UnsupportedField(format!("p = {p}: need an odd prime at least 5")));
    }
    let ext = Gf::new(p, 2)?;
    let base = Gf::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        if let Some((input, nodes, curve_points, chosen_orbits)) = attempt_once(&base, &ext, budget, &mut rng)? {
            return Ok(GeneratedExample {
                input,
                nodes,
                log: GenerationLog {
                    seed,
                    p,
                    attempts: attempt,
                    curve_points: Some(curve_points),
                    chosen_orbits: Some(chosen_orbits),
                },
            });
        }
    }
    Err(Error::SearchFailed(format!(
        "no example after {MAX_ATTEMPTS} attempts over GF({p}); try a larger p"
    )))
}

type Attempt = (QuarticInput<Gf>, Vec<NodeRecord<Gf>>, (usize, usize), (usize, usize));

fn attempt_once(base: &Gf, ext: &Gf, budget: u128, rng: &mut ChaCha8Rng) -> Result<Option<Attempt>> {
    let mut l_coeffs: Vec<u32> = (0..5).map(|_| base.random(rng)).collect();
    if l_coeffs.iter().all(|&c| c == 0) {
        l_coeffs[0] = 1;
    }
    let j = l_coeffs.iter().position(|&c| c != 0).expect("nonzero");
    let h = LinearSubspaceParam::hyperplane(ext, &l_coeffs)?;
    // restrictions to {L = 0} are lifted through the coordinates other than x_j
    let coords: Vec<MultiPoly<Gf>> = (0..5).filter(|&i| i != j).map(|i| MultiPoly::var(ext, 5, i)).collect();
    let l = (0..5).fold(MultiPoly::zero(ext, 5, 1), |acc, i| {
        acc.add(&MultiPoly::var(ext, 5, i).scale(&l_coeffs[i])).expect("same ring")
    });
    // prime-field elements keep their encoding in GF(p^2)
    let up = |f: MultiPoly<Gf>| f.map_coefficients(ext, |c| *c);
    let q1 = up(random_form(base, 4, 2, &mut *rng));
    let q2 = up(random_form(base, 4, 2, &mut *rng));
    let curve = CommonZeros::new(ext, 4, &[q1.clone(), q2.clone()])?.run(budget)?;
    let (fixed, moving): (Vec<Vec<u32>>, Vec<Vec<u32>>) =
        curve.iter().cloned().partition(|x| x.iter().all(|&c| ext.in_subfield(c, 1)));
    let mut pairs: Vec<[Vec<u32>; 2]> = Vec::new();
    for x in &moving {
        let mut fx: Vec<u32> = x.iter().map(|&c| ext.frobenius(c)).collect();
        crate::enumerate::normalize_gf(ext, &mut fx);
        if x < &fx {
            pairs.push([x.clone(), fx]);
        }
    }
    let curve_points = (fixed.len(), curve.len());
    let max_fixed = fixed.len().min(11);
    let odd: Vec<usize> = (1..=max_fixed).step_by(2).filter(|s| (11 - s) / 2 <= pairs.len()).collect();
    let Some(&n_fixed) = odd.choose(rng) else {
        return Ok(None);
    };
    let mut fixed = fixed;
    fixed.shuffle(rng);
    pairs.shuffle(rng);
    let n_pairs = (11 - n_fixed) / 2;
    let chosen: Vec<Vec<u32>> = fixed[..n_fixed]
        .iter()
        .cloned()
        .chain(pairs[..n_pairs].iter().flat_map(|p| p.iter().cloned()))
        .collect();

    // GF(p)-rational cubics through the chosen points: each GF(p^2) condition
    // splits into two GF(p) conditions
    let cubic_basis = monomial_basis(4, 3);
    let mut rows = Vec::new();
    for x in &chosen {
        let vals: Vec<Vec<u32>> = cubic_basis.iter().map(|e| ext.coefficients(e.eval(ext, x))).collect();
        for part in 0..2 {
            rows.push(vals.iter().map(|v| v.get(part).copied().unwrap_or(0)).collect());
        }
    }
    let kernel = ExactMatrix::from_rows_with_cols(base, rows, cubic_basis.len())?.kernel_basis();
    let mut ideal: Vec<Vec<u32>> = Vec::new();
    for q in [&q1, &q2] {
        for i in 0..4 {
            ideal.push(q.mul(&MultiPoly::var(ext, 4, i))?.coefficient_vector());
        }
    }
    let ideal_rank = ExactMatrix::from_rows(base, ideal.clone())?.rank();
    if ideal_rank != 8 || kernel.len() != 9 {
        return Ok(None);
    }
    let weights: Vec<u32> = kernel.iter().map(|_| base.random(rng)).collect();
    let coeffs: Vec<u32> = (0..cubic_basis.len())
        .map(|m| {
            kernel
                .iter()
                .zip(&weights)
                .fold(0, |acc, (k, w)| base.add_fast(acc, base.mul_fast(k[m], *w)))
        })
        .collect();
    let mut with_c = ideal;
    with_c.push(coeffs.clone());
    if ExactMatrix::from_rows(base, with_c)?.rank() != 9 {
        return Ok(None);
    }
    let c3 = MultiPoly::from_coefficients(ext, 4, 3, &coeffs);
    let lift = |f: &MultiPoly<Gf>| f.compose_linear(&coords);
    let q = lift(&q1)?.add(&l.mul(&up(random_form(base, 5, 1, &mut *rng)))?)?;
    let q_prime = lift(&q2)?.add(&l.mul(&up(random_form(base, 5, 1, &mut *rng)))?)?;
    let c = lift(&c3)?.add(&l.mul(&up(random_form(base, 5, 2, &mut *rng)))?)?;
    let input = build_qqlc(q, q_prime, l, c)?;
    if !input.degenerate.is_empty() {
        return Ok(None);
    }
    let d = input.decomposition.as_ref().expect("decomposed");

    // cheap check on the expected nodes before the full enumeration
    let expected: Vec<Vec<u32>> = curve.iter().filter(|t| c3.eval(t).map(|v| v == 0).unwrap_or(false)).cloned().collect();
    if expected.len() != 12 {
        return Ok(None);
    }
    for t in &expected {
        let x = ProjPoint::new(ext, h.point(t)?)?;
        if !certify_node(&input.f, &x)?.is_node {
            return Ok(None);
        }
    }
    let nodes = singular_points_enumerate(&input.f, budget)?;
    let on_base_locus = |x: &[u32]| {
        [&d.q, &d.q_prime, &d.l, &d.c]
            .iter()
            .all(|g| g.eval(x).map(|v| v == 0).unwrap_or(false))
    };
    if nodes.len() != 12 || !nodes.iter().all(|n| n.is_node && on_base_locus(n.point.coords())) {
        return Ok(None);
    }
    Ok(Some((input, nodes, curve_points, (n_fixed, n_pairs))))
}

/// A quartic over `GF(p)` singular exactly at `s` seeded random
/// `GF(p)`-points, each a node, with no further singular point over `GF(p^2)`.
pub fn generate_with_nodes(seed: u64, p: u64, s: usize, budget: u128) -> Result<GeneratedExample> {
    if s == 0 || s > 13 {
        return Err(Error::invalid(format!("s = {s}: expected 1..=13 nodes")));
    }
    if p < 5 {
        return Err(Error::UnsupportedField(format!("p = {p}: need an odd prime at least 5")));
    }
    let base = Gf::prime(p)?;
    let ext = Gf::new(p, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = monomial_basis(5, 4);
    for attempt in 1..=MAX_ATTEMPTS {
        let mut pts: Vec<Vec<u32>> = Vec::new();
        while pts.len() < s {
            let mut x: Vec<u32> = (0..5).map(|_| base.random(&mut rng)).collect();
            if crate::enumerate::normalize_gf(&base, &mut x) && !pts.contains(&x) {
                pts.push(x);
            }
        }
        pts.sort();
        // G is singular at x iff every partial derivative vanishes there
        let mut rows = Vec::new();
        for x in &pts {
            for v in 0..5 {
                rows.push(
                    basis
                        .iter()
                        .map(|e| {
                            if e.0[v] == 0 {
                                return 0;
                            }
                            let mut d = e.clone();
                            d.0[v] -= 1;
                            base.mul_fast(base.from_i64(e.0[v] as i64), d.eval(&base, x))
                        })
                        .collect(),
                );
            }
        }
        let kernel = ExactMatrix::from_rows_with_cols(&base, rows, basis.len())?.kernel_basis();
        let weights: Vec<u32> = kernel.iter().map(|_| base.random(&mut rng)).collect();
        let coeffs: Vec<u32> = (0..basis.len())
            .map(|m| {
                kernel
                    .iter()
                    .zip(&weights)
                    .fold(0, |acc, (k, w)| base.add_fast(acc, base.mul_fast(k[m], *w)))
            })
            .collect();
        let f = MultiPoly::from_coefficients(&ext, 5, 4, &coeffs);
        if f.is_zero() {
            continue;
        }
        let nodes = singular_points_enumerate(&f, budget)?;
        let found: Vec<&[u32]> = nodes.iter().map(|n| n.point.coords()).collect();
        let expected: Vec<&[u32]> = pts.iter().map(|x| x.as_slice()).collect();
        if found == expected && nodes.iter().all(|n| n.is_node) {
            return Ok(GeneratedExample {
                input: QuarticInput::new(f)?,
                nodes,
                log: GenerationLog {
                    seed,
                    p,
                    attempts: attempt,
                    curve_points: None,
                    chosen_orbits: None,
                },
            });
        }
    }
    Err(Error::SearchFailed(format!("no quartic with exactly {s} nodes from seed {seed} over GF({p})")))
}
