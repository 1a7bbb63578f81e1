//! CSR sparse matrices.

use super::{DenseMatrix, MathError};

/// Compressed sparse row matrix of 64-bit floats.
///
/// Column indices are strictly increasing within each row and no explicit
/// zeros are stored. Products accumulate in ascending column order per row,
/// so results are bit-reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from (row, col, value) triplets. Zero-valued triplets are
    /// dropped; a duplicate (row, col) is an error since every assembly path
    /// is expected to emit each coordinate once.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self, MathError> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(MathError::IndexOutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if !v.is_finite() {
                return Err(MathError::NonFinite {
                    op: "from_triplets".into(),
                });
            }
            if v != 0.0 {
                entries.push((r, c, v));
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(MathError::DuplicateEntry {
                    row: pair[0].0,
                    col: pair[0].1,
                });
            }
        }

        let mut row_ptr = vec![0usize; rows + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = entries.iter().map(|&(_, c, _)| c).collect();
        let values = entries.iter().map(|&(_, _, v)| v).collect();
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        let triplets: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        SparseMatrix::from_triplets(n, n, &triplets).expect("identity triplets are valid")
    }

    pub fn from_dense(dense: &DenseMatrix) -> Self {
        let mut triplets = Vec::new();
        for i in 0..dense.rows() {
            for j in 0..dense.cols() {
                let v = dense.get(i, j);
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(dense.rows(), dense.cols(), &triplets)
            .expect("dense entries are unique and in range")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.row_entries(i) {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of one row in ascending column order.
    pub fn row_entries(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        self.col_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// All stored entries as (row, col, value), row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for (j, v) in self.row_entries(i) {
                out.push((i, j, v));
            }
        }
        out
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let lo = self.row_ptr[row];
        let hi = self.row_ptr[row + 1];
        match self.col_idx[lo..hi].binary_search(&col) {
            Ok(pos) => self.values[lo + pos],
            Err(_) => 0.0,
        }
    }

    /// Weighted row sums.
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row_entries(i).map(|(_, v)| v).sum())
            .collect()
    }

    /// Exact structural and numeric symmetry.
    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for (j, v) in self.row_entries(i) {
                if self.get(j, i) != v {
                    return false;
                }
            }
        }
        true
    }

    /// Sparse-dense product `self * h`. Each output row accumulates its
    /// terms in ascending column-index order.
    pub fn spmm(&self, h: &DenseMatrix) -> Result<DenseMatrix, MathError> {
        if self.cols != h.rows() {
            return Err(MathError::DimensionMismatch {
                op: "spmm".into(),
                detail: format!("sparse cols {} vs dense rows {}", self.cols, h.rows()),
            });
        }
        let mut out = DenseMatrix::zeros(self.rows, h.cols());
        for i in 0..self.rows {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let out_row = &mut out.data_mut()[i * h.cols()..(i + 1) * h.cols()];
            for k in lo..hi {
                let j = self.col_idx[k];
                let v = self.values[k];
                let h_row = h.row(j);
                for (o, &x) in out_row.iter_mut().zip(h_row) {
                    *o += v * x;
                }
            }
        }
        out.ensure_finite("spmm")?;
        Ok(out)
    }

    /// Scale entry (i, j) by `f(i) * f(j)`; used for degree normalization.
    pub(crate) fn scale_symmetric(&self, f: &[f64]) -> SparseMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            for k in lo..hi {
                out.values[k] = self.values[k] * f[i] * f[self.col_idx[k]];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Rng;

    /// Naive triple-loop dense multiply, kept independent of the CSR path.
    fn dense_matmul_oracle(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = 0.0;
                for k in 0..a.cols() {
                    acc += a.get(i, k) * b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn random_dense(rows: usize, cols: usize, density: f64, rng: &mut Rng) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.bernoulli(density) {
                    m.set(i, j, rng.uniform(-2.0, 2.0));
                }
            }
        }
        m
    }

    #[test]
    fn spmm_identity_returns_input() {
        let h = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let eye = SparseMatrix::identity(2);
        assert_eq!(eye.spmm(&h).unwrap(), h);
    }

    #[test]
    fn spmm_permutation_swaps_rows() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        let h = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let out = a.spmm(&h).unwrap();
        assert_eq!(out.data(), &[3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn spmm_hand_multiplied_case() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 0.5), (0, 1, 0.5), (1, 0, 0.5), (1, 1, 0.5)],
        )
        .unwrap();
        let h = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![3.0, 2.0]]).unwrap();
        let out = a.spmm(&h).unwrap();
        assert_eq!(out.data(), &[2.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn spmm_dimension_mismatch_is_an_error() {
        let a = SparseMatrix::identity(3);
        let h = DenseMatrix::zeros(2, 2);
        assert!(a.spmm(&h).is_err());
    }

    #[test]
    fn duplicate_triplet_is_an_error() {
        let r = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (0, 1, 2.0)]);
        assert!(matches!(r, Err(MathError::DuplicateEntry { row: 0, col: 1 })));
    }

    #[test]
    fn explicit_zeros_are_dropped() {
        let a = SparseMatrix::from_triplets(2, 2, &[(0, 0, 0.0), (1, 1, 2.0)]).unwrap();
        assert_eq!(a.nnz(), 1);
    }

    #[test]
    fn spmm_matches_dense_oracle_on_random_symmetric_inputs() {
        let mut rng = Rng::new(17);
        for trial in 0..20 {
            let n = 2 + rng.below(7);
            let mut upper = random_dense(n, n, 0.5, &mut rng);
            // Symmetrize.
            for i in 0..n {
                for j in 0..i {
                    upper.set(i, j, upper.get(j, i));
                }
            }
            let sparse = SparseMatrix::from_dense(&upper);
            assert!(sparse.is_symmetric(), "trial {trial}");
            let h = random_dense(n, 3, 1.0, &mut rng);
            let got = sparse.spmm(&h).unwrap();
            let want = dense_matmul_oracle(&upper, &h);
            assert!(got.max_abs_diff(&want) < 1e-12, "trial {trial}");
        }
    }

    #[test]
    fn spmm_composes_like_matrix_product() {
        // spmm(A, spmm(B, H)) == spmm(A*B, H) on dense-convertible instances.
        let mut rng = Rng::new(23);
        for _ in 0..10 {
            let n = 2 + rng.below(5);
            let a_dense = random_dense(n, n, 0.6, &mut rng);
            let b_dense = random_dense(n, n, 0.6, &mut rng);
            let h = random_dense(n, 2, 1.0, &mut rng);
            let a = SparseMatrix::from_dense(&a_dense);
            let b = SparseMatrix::from_dense(&b_dense);
            let ab = SparseMatrix::from_dense(&dense_matmul_oracle(&a_dense, &b_dense));
            let nested = a.spmm(&b.spmm(&h).unwrap()).unwrap();
            let flat = ab.spmm(&h).unwrap();
            assert!(nested.max_abs_diff(&flat) < 1e-12);
        }
    }

    #[test]
    fn dense_round_trip_preserves_entries() {
        let mut rng = Rng::new(31);
        let d = random_dense(5, 4, 0.4, &mut rng);
        assert_eq!(SparseMatrix::from_dense(&d).to_dense(), d);
    }
}
