//! Reference arithmetic written without the library, for cross-checking.

#![allow(dead_code)]

/// `GF(p^2)` as pairs `a + b t` with `t^2 = -m1 t - m0`.
///
/// Prime-field elements have `b = 0`, so the same type serves `GF(p)`.
#[derive(Clone, Copy, Debug)]
pub struct Fq2 {
    pub p: u64,
    m0: u64,
    m1: u64,
}

pub type E = (u64, u64);

impl Fq2 {
    /// `modulus` lists `m0, m1, 1`; any pair works when only `GF(p)` is used.
    pub fn new(p: u64, modulus: &[u32]) -> Self {
        let (m0, m1) = match modulus {
            [m0, m1, 1] => (*m0 as u64, *m1 as u64),
            _ => (0, 0),
        };
        Fq2 { p, m0, m1 }
    }

    /// Decodes the library's element encoding `c0 + c1 p`.
    pub fn decode(&self, c: u32) -> E {
        (c as u64 % self.p, c as u64 / self.p)
    }

    pub fn add(&self, x: E, y: E) -> E {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    pub fn sub(&self, x: E, y: E) -> E {
        ((x.0 + self.p - y.0) % self.p, (x.1 + self.p - y.1) % self.p)
    }

    pub fn mul(&self, x: E, y: E) -> E {
        let p = self.p;
        let c0 = x.0 * y.0 % p;
        let c1 = (x.0 * y.1 + x.1 * y.0) % p;
        let c2 = x.1 * y.1 % p;
        // t^2 = -m1 t - m0
        let r0 = (c0 + p * p - c2 * self.m0 % p) % p;
        let r1 = (c1 + p * p - c2 * self.m1 % p) % p;
        (r0, r1)
    }

    pub fn pow(&self, mut x: E, mut e: u64) -> E {
        let mut r = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, x: E) -> E {
        assert!(x != (0, 0));
        self.pow(x, self.p * self.p - 2)
    }

    pub fn is_zero(x: E) -> bool {
        x == (0, 0)
    }
}

/// Row rank by plain Gaussian elimination.
pub fn rank(f: &Fq2, mut rows: Vec<Vec<E>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !Fq2::is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]);
        let pivot_row: Vec<E> = rows[r].iter().map(|&v| f.mul(v, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !Fq2::is_zero(row[c]) {
                let k = row[c];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = f.sub(*v, f.mul(k, *pv));
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

/// Exponent vectors of all monomials of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|a| {
            monomials(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// Rank of the degree-`d` evaluation matrix of points given as library codes.
pub fn evaluation_rank(f: &Fq2, points: &[Vec<u32>], d: u32) -> usize {
    let mons = monomials(points[0].len(), d);
    let rows = points
        .iter()
        .map(|x| {
            let x: Vec<E> = x.iter().map(|&c| f.decode(c)).collect();
            mons.iter()
                .map(|m| m.iter().zip(&x).fold((1, 0), |acc, (&e, &xi)| f.mul(acc, f.pow(xi, e as u64))))
                .collect()
        })
        .collect();
    rank(f, rows)
}

/// Pairing `a^T G b` in exact integers.
pub fn int_pairing(a: [i64; 3], b: [i64; 3], g: [[i64; 3]; 3]) -> i128 {
    let mut s = 0i128;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i] as i128 * g[i][j] as i128 * b[j] as i128;
        }
    }
    s
}

pub fn int_mat_mul(a: [[i64; 3]; 3], b: [[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut c = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Coefficients `(c0, c1, c2)` of `m -> (a + m b)^2`, recovered by interpolation at `m = -1, 0, 1`.
pub fn int_expansion(a: [i64; 3], b: [i64; 3], g: [[i64; 3]; 3]) -> (i128, i128, i128) {
    let at = |m: i64| {
        let v = [a[0] + m * b[0], a[1] + m * b[1], a[2] + m * b[2]];
        int_pairing(v, v, g)
    };
    let (vm, v0, vp) = (at(-1), at(0), at(1));
    (v0, (vp - vm) / 2, (vp + vm) / 2 - v0)
}

/// `h^0(F_r, O(a s + b f))` via Riemann-Roch, valid when higher cohomology vanishes.
pub fn h0_by_riemann_roch(r: i64, a: i64, b: i64) -> i64 {
    // D.D and D.K with K = -2s - (r+2)f, s^2 = -r, s.f = 1, f^2 = 0
    let dd = -r * a * a + 2 * a * b;
    let (ka, kb) = (-2, -(r + 2));
    let dk = -r * a * ka + a * kb + ka * b;
    1 + (dd - dk) / 2
}

/// A form as `(exponents, coefficient)` terms, evaluated without the library.
pub struct Terms {
    pub terms: Vec<(Vec<u32>, E)>,
}

impl Terms {
    fn eval_derivative(&self, f: &Fq2, x: &[E], order: &[usize]) -> E {
        let mut acc = (0, 0);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let mut k = *c;
            for &i in order {
                if e[i] == 0 {
                    k = (0, 0);
                    break;
                }
                k = f.mul(k, (e[i] as u64 % f.p, 0));
                e[i] -= 1;
            }
            if Fq2::is_zero(k) {
                continue;
            }
            let v = e.iter().zip(x).fold(k, |a, (&ei, &xi)| f.mul(a, f.pow(xi, ei as u64)));
            acc = f.add(acc, v);
        }
        acc
    }

    pub fn gradient(&self, f: &Fq2, x: &[E]) -> Vec<E> {
        (0..x.len()).map(|i| self.eval_derivative(f, x, &[i])).collect()
    }

    pub fn hessian_rank(&self, f: &Fq2, x: &[E]) -> usize {
        let n = x.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.eval_derivative(f, x, &[i, j])).collect())
            .collect();
        rank(f, rows)
    }
}

use nodal_quartic::arith::{ExactMatrix, Field, Gf};
use nodal_quartic::enumerate::normalize_gf;
use nodal_quartic::poly::{monomial_basis, MultiPoly};
use nodal_quartic::projgeo::{PointConfig, ProjPoint};
use rand::Rng;

/// Up to 13 distinct points in `P^4`, often with many on a low-dimensional
/// subspace or on a rational normal curve of a subspace.
pub fn random_configuration<R: Rng>(field: &Gf, rng: &mut R) -> PointConfig<Gf> {
    let s = rng.gen_range(1..=13);
    let special = rng.gen_range(0..=s);
    let k = rng.gen_range(1..=4usize);
    let on_curve = rng.gen_bool(0.5);
    let basis: Vec<Vec<u32>> = (0..=k).map(|_| (0..5).map(|_| field.random(rng)).collect()).collect();
    let mut pts: Vec<Vec<u32>> = Vec::new();
    let mut guard = 0;
    while pts.len() < s && guard < 10_000 {
        guard += 1;
        let weights: Vec<u32> = if pts.len() >= special {
            Vec::new()
        } else if on_curve {
            let t = field.random(rng);
            (0..=k).map(|i| field.pow_fast(t, i as u64)).collect()
        } else {
            (0..=k).map(|_| field.random(rng)).collect()
        };
        let mut x: Vec<u32> = if weights.is_empty() {
            (0..5).map(|_| field.random(rng)).collect()
        } else {
            (0..5)
                .map(|j| {
                    basis
                        .iter()
                        .zip(&weights)
                        .fold(0, |acc, (b, w)| field.add_fast(acc, field.mul_fast(b[j], *w)))
                })
                .collect()
        };
        if normalize_gf(field, &mut x) && !pts.contains(&x) {
            pts.push(x);
        }
    }
    let points = pts.into_iter().map(|x| ProjPoint::new(field, x).unwrap()).collect();
    PointConfig::new(field, 4, points).unwrap()
}

/// A random quartic over `field` whose gradient vanishes at every given point.
pub fn quartic_singular_at<R: Rng>(field: &Gf, points: &[Vec<u32>], rng: &mut R) -> MultiPoly<Gf> {
    let basis = monomial_basis(5, 4);
    let mut rows = Vec::new();
    for x in points {
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
                        field.mul_fast(field.from_i64(e.0[v] as i64), d.eval(field, x))
                    })
                    .collect(),
            );
        }
    }
    let kernel = ExactMatrix::from_rows_with_cols(field, rows, basis.len()).unwrap().kernel_basis();
    let weights: Vec<u32> = kernel.iter().map(|_| field.random(rng)).collect();
    let coeffs: Vec<u32> = (0..basis.len())
        .map(|m| {
            kernel
                .iter()
                .zip(&weights)
                .fold(0, |acc, (k, w)| field.add_fast(acc, field.mul_fast(k[m], *w)))
        })
        .collect();
    MultiPoly::from_coefficients(field, 5, 4, &coeffs)
}

/// Converts a library form over `GF(p)` or `GF(p^2)` to oracle terms.
pub fn to_terms(f: &Fq2, g: &MultiPoly<Gf>) -> Terms {
    Terms {
        terms: g
            .terms()
            .map(|(e, c)| (e.0.iter().map(|&v| v as u32).collect(), f.decode(*c)))
            .collect(),
    }
}
