use super::MultiPoly;
use crate::arith::{ExactMatrix, Field};
use crate::error::{Error, Result};

/// Linear map `t -> B t` from `K^m` into `K^n` with `B` of full column rank;
/// projectively, an `(m-1)`-dimensional subspace of `P^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspaceParam<F: Field> {
    basis: ExactMatrix<F>,
}

impl<F: Field> LinearSubspaceParam<F> {
    /// `basis` is `n x m`; its columns must be linearly independent.
    pub fn new(basis: ExactMatrix<F>) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::invalid(format!(
                "parametrization has rank {} < {} columns",
                basis.rank(),
                basis.cols()
            )));
        }
        Ok(LinearSubspaceParam { basis })
    }

    /// Columns given as ambient vectors.
    pub fn from_columns(field: &F, columns: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        let rows = ExactMatrix::from_rows_with_cols(field, columns, n)?;
        Self::new(rows.transpose())
    }

    /// The hyperplane `{sum c_i x_i = 0}`; columns are `e_i - (c_i/c_j) e_j`
    /// for `i != j`, where `j` is the first index with `c_j != 0`.
    pub fn hyperplane(field: &F, coeffs: &[F::Elem]) -> Result<Self> {
        let j = coeffs
            .iter()
            .position(|c| !field.is_zero(c))
            .ok_or_else(|| Error::invalid("zero linear form has no hyperplane"))?;
        let cj_inv = field.inv(&coeffs[j]).expect("nonzero");
        let n = coeffs.len();
        let cols = (0..n)
            .filter(|&i| i != j)
            .map(|i| {
                let mut v = vec![field.zero(); n];
                v[i] = field.one();
                v[j] = field.neg(&field.mul(&coeffs[i], &cj_inv));
                v
            })
            .collect();
        Self::from_columns(field, cols)
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn params(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ExactMatrix<F> {
        &self.basis
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.ambient()).map(|i| self.basis.get(i, j).clone()).collect()
    }

    /// Ambient coordinates of the parameter vector `t`.
    pub fn point(&self, t: &[F::Elem]) -> Result<Vec<F::Elem>> {
        self.basis.mul_vec(t)
    }

    /// Parameters of an ambient vector in the subspace, or `None` when it is outside.
    pub fn coordinates_of(&self, x: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        self.basis.solve(x)
    }

    /// `x_i = sum_j B_ij t_j` as linear forms in the parameters.
    pub fn linear_forms(&self) -> Vec<MultiPoly<F>> {
        let f = self.field();
        let m = self.params();
        (0..self.ambient())
            .map(|i| {
                let mut l = MultiPoly::zero(f, m, 1);
                for j in 0..m {
                    l = l
                        .add(&MultiPoly::var(f, m, j).scale(self.basis.get(i, j)))
                        .expect("same ring");
                }
                l
            })
            .collect()
    }

    /// `self` after `inner`: parameters of `inner` feed `self`.
    pub fn compose(&self, inner: &LinearSubspaceParam<F>) -> Result<Self> {
        Self::new(self.basis.mul(&inner.basis)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Gf;
    use crate::poly::parse_poly;

    #[test]
    fn hyperplane_lies_in_kernel() {
        let f = Gf::prime(11).unwrap();
        let l = [0u32, 3, 5, 0, 1];
        let h = LinearSubspaceParam::hyperplane(&f, &l).unwrap();
        assert_eq!(h.params(), 4);
        for j in 0..4 {
            let col = h.column(j);
            let dot = col.iter().zip(&l).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let f = Gf::prime(7).unwrap();
        let cols = vec![vec![1, 2, 3], vec![2, 4, 6]];
        assert!(LinearSubspaceParam::from_columns(&f, cols).is_err());
    }

    #[test]
    fn restriction_is_functorial() {
        let f = Gf::prime(13).unwrap();
        let poly = parse_poly(&f, "x0^2*x1 + 3*x1*x2^2 - x0*x1*x2 + 5*x2^3", 3).unwrap();
        let outer = LinearSubspaceParam::from_columns(&f, vec![vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 1]]).unwrap();
        let inner = LinearSubspaceParam::from_columns(&f, vec![vec![1, 0, 2], vec![5, 1, 0]]).unwrap();
        let lhs = poly.restrict_to_subspace(&outer.compose(&inner).unwrap()).unwrap();
        let rhs = poly
            .restrict_to_subspace(&outer)
            .unwrap()
            .restrict_to_subspace(&inner)
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
