//! Dense matrices over an exact field.

use std::ops::Index;

use crate::error::AlgebraError;
use crate::field::Field;

/// Row-major dense matrix; all entries live in `field`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Build from explicit rows. `cols` is needed for the zero-row case.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self, AlgebraError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("rectangular literal")
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
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
                t.set(c, r, self[(r, c)].clone());
            }
        }
        t
    }

    /// Stack blocks vertically; all blocks must have the same width.
    pub fn vstack(field: &F, cols: usize, blocks: &[Self]) -> Result<Self, AlgebraError> {
        let rows = blocks.iter().flat_map(|b| b.to_rows()).collect();
        if let Some(b) = blocks.iter().find(|b| b.cols != cols) {
            return Err(AlgebraError::DimensionMismatch(format!(
                "block with {} columns stacked onto width {cols}",
                b.cols
            )));
        }
        Self::from_rows(field, cols, rows)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.field.rank_of(self.to_rows(), self.cols)
    }

    /// Reduced row echelon form (nonzero rows only) and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let (rows, pivots) = self.field.rref(self.to_rows(), self.cols);
        let m = Self::from_rows(&self.field, self.cols, rows).expect("rref keeps width");
        (m, pivots)
    }

    /// Canonical kernel basis: one vector per non-pivot column `j` of the
    /// reduced echelon form, with a one in position `j`, zeros in the other
    /// free positions, and the negated echelon entries in pivot positions.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = vec![f.zero(); self.cols];
                v[j] = f.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(&r[(i, j)]);
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = rhs` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(rhs.len(), self.rows);
        let f = &self.field;
        let aug: Vec<Vec<F::Elem>> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        let (red, pivots) = f.rref(aug, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &p) in red.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }
}

impl<F: Field> Index<(usize, usize)> for DenseMatrix<F> {
    type Output = F::Elem;

    fn index(&self, (r, c): (usize, usize)) -> &F::Elem {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        Rationals.from_i64(v)
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(DenseMatrix::identity(&Rationals, 3).rank(), 3);
        assert_eq!(DenseMatrix::zeros(&Rationals, 4, 6).rank(), 0);
        assert_eq!(DenseMatrix::zeros(&Rationals, 4, 6).kernel_basis().len(), 6);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(DenseMatrix::identity(&Rationals, 2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_one_minus_one() {
        let m = DenseMatrix::from_i64(&Rationals, &[&[1, -1]]);
        assert_eq!(m.kernel_basis(), vec![vec![q(1), q(1)]]);
    }

    #[test]
    fn kernel_is_canonical_under_row_operations() {
        let a = DenseMatrix::from_i64(&Rationals, &[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let b = DenseMatrix::from_i64(&Rationals, &[&[3, 6, 10, 13], &[-1, -2, -4, -5], &[0, 0, 0, 0]]);
        assert_eq!(a.kernel_basis(), b.kernel_basis());
        assert_eq!(a.kernel_basis(), vec![vec![q(-2), q(1), q(0), q(0)], vec![q(-1), q(0), q(-1), q(1)]]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = DenseMatrix::from_i64(&Rationals, &[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve(&[q(3), q(1)]).unwrap(), vec![q(2), q(1)]);
        let s = DenseMatrix::from_i64(&Rationals, &[&[1, 1], &[2, 2]]);
        assert!(s.solve(&[q(1), q(3)]).is_none());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![q(1), q(2)], vec![q(3)]];
        assert!(DenseMatrix::from_rows(&Rationals, 2, rows).is_err());
    }

    fn int_matrix(entries: &[i64], rows: usize, cols: usize) -> Vec<Vec<i64>> {
        (0..rows).map(|r| entries[r * cols..(r + 1) * cols].to_vec()).collect()
    }

    fn build<F: Field>(f: &F, m: &[Vec<i64>], cols: usize) -> DenseMatrix<F> {
        let rows = m.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
        DenseMatrix::from_rows(f, cols, rows).unwrap()
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant_and_kernel_complements(
            entries in proptest::collection::vec(-3i64..=3, 42),
            rows in 1usize..=6,
            cols in 1usize..=7,
        ) {
            let m = build(&Rationals, &int_matrix(&entries, rows, cols), cols);
            let r = m.rank();
            prop_assert_eq!(r, m.transpose().rank());
            let ker = m.kernel_basis();
            prop_assert_eq!(r + ker.len(), cols);
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|x| Rationals.is_zero(x)));
            }
            let kmat = DenseMatrix::from_rows(&Rationals, cols, ker.clone()).unwrap();
            prop_assert_eq!(kmat.rank(), ker.len());
        }

        #[test]
        fn modular_rank_agrees_with_rational_rank(
            entries in proptest::collection::vec(-9i64..=9, 30),
            rows in 1usize..=5,
        ) {
            let cols = 30 / rows;
            let ints = int_matrix(&entries, rows, cols);
            let rq = build(&Rationals, &ints, cols).rank();
            // Hadamard bound (sqrt(5) * 9)^5 < 10^7 is below every prime used, so no
            // nonzero minor vanishes modulo p.
            for p in [crate::field::DEFAULT_PRIME, crate::field::SURVEY_PRIME, 1_000_000_007] {
                let fp = PrimeField::new(p).unwrap();
                prop_assert_eq!(build(&fp, &ints, cols).rank(), rq);
            }
        }
    }
}
