use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct ExactMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: ExactMatrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            data: vec![field.zero(); rows * cols],
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows; rejects ragged input and entries that are not
    /// canonical members of `field`.
    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but fixes the column count, which
    /// matters when there are no rows.
    pub fn from_rows_with_cols(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for x in row {
                if !field.contains(&x) {
                    return Err(Error::ForeignElement(field.spec()));
                }
                data.push(x);
            }
        }
        Ok(ExactMatrix {
            field: field.clone(),
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F::Elem) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first nonzero
    /// entry at or below the current row.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than a full rref.
        let f = &self.field;
        let mut m = self.clone();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
            for r in row + 1..m.rows {
                let factor = f.mul(m.get(r, col), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            row += 1;
        }
        row
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::dimension(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            if !f.contains(&b[r]) {
                return Err(Error::ForeignElement(f.spec()));
            }
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<F: Field> fmt::Debug for ExactMatrix<F> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(fmt, "{}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            writeln!(fmt, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn rank<F: Field>(m: &ExactMatrix<F>) -> usize {
    m.rank()
}

pub fn kernel_basis<F: Field>(m: &ExactMatrix<F>) -> Vec<Vec<F::Elem>> {
    m.kernel_basis()
}

pub fn solve_linear<F: Field>(m: &ExactMatrix<F>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
    m.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Gf, Rationals};

    #[test]
    fn identity_and_proportional_rows() {
        let q = Rationals;
        assert_eq!(ExactMatrix::identity(&q, 3).rank(), 3);
        let m = ExactMatrix::from_i64(&q, &[&[1, 2, 3], &[2, 4, 6]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let q = Rationals;
        assert!(ExactMatrix::identity(&q, 2).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(&q, 2, 3).kernel_basis().len(), 3);
        let m = ExactMatrix::from_i64(&q, &[&[1, 1, 0]]).unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| q.is_zero(x)));
        }
    }

    #[test]
    fn solve_examples() {
        let q = Rationals;
        let id = ExactMatrix::identity(&q, 3);
        let b: Vec<_> = [4, -1, 7].iter().map(|&x| q.from_i64(x)).collect();
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));

        let m = ExactMatrix::from_i64(&q, &[&[1, 1]]).unwrap();
        let x = m.solve(&[q.from_i64(2)]).unwrap().unwrap();
        assert_eq!(q.add(&x[0], &x[1]), q.from_i64(2));

        let m = ExactMatrix::from_i64(&q, &[&[1], &[1]]).unwrap();
        assert_eq!(m.solve(&[q.from_i64(0), q.from_i64(1)]).unwrap(), None);
        assert!(m.solve(&[q.from_i64(0)]).is_err());
    }

    #[test]
    fn foreign_entries_rejected() {
        let f = Gf::prime(7).unwrap();
        assert!(matches!(
            ExactMatrix::from_rows(&f, vec![vec![1, 9]]),
            Err(Error::ForeignElement(_))
        ));
        assert!(ExactMatrix::from_rows(&f, vec![vec![1, 2], vec![3]]).is_err());
        let g = Gf::prime(11).unwrap();
        let a = ExactMatrix::identity(&f, 2);
        let b = ExactMatrix::identity(&g, 2);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch { .. })));
    }
}
