//! Exact fields and dense linear algebra over them.

mod field;
mod gf;
mod matrix;
mod rational;
pub(crate) mod upoly;

pub use field::{Field, FieldSpec};
pub use gf::{Embedding, Gf, MAX_FIELD_ORDER};
pub use matrix::{kernel_basis, rank, solve_linear, ExactMatrix, Rref};
pub use rational::Rationals;

/// `binomial(n, k)` as a `usize`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of points of `P^n` over a field with `q` elements.
pub fn projective_space_size(q: u128, n: u32) -> u128 {
    (0..=n).map(|i| q.pow(i)).sum()
}
