//! Row-major dense matrices of 64-bit floats.

use super::{MathError, Rng};

/// Dense row-major matrix. All public constructors and products keep every
/// entry finite; operations that could produce NaN/Inf validate their output.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, MathError> {
        if data.len() != rows * cols {
            return Err(MathError::DimensionMismatch {
                op: "from_vec".into(),
                detail: format!("{} values for {rows}x{cols}", data.len()),
            });
        }
        let m = DenseMatrix { rows, cols, data };
        m.ensure_finite("from_vec")?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MathError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(MathError::DimensionMismatch {
                op: "from_rows".into(),
                detail: "ragged rows".into(),
            });
        }
        Self::from_vec(n_rows, n_cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    fn check_mul(&self, rhs_rows: usize, op: &str) -> Result<(), MathError> {
        if self.cols != rhs_rows {
            return Err(MathError::DimensionMismatch {
                op: op.into(),
                detail: format!("lhs cols {} vs rhs rows {rhs_rows}", self.cols),
            });
        }
        Ok(())
    }

    /// `self * rhs`. Accumulation order over the inner index is fixed.
    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, MathError> {
        self.check_mul(rhs.rows, "matmul")?;
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out.ensure_finite("matmul")?;
        Ok(out)
    }

    /// `self * rhs^T` without materializing the transpose.
    pub fn matmul_transpose_b(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, MathError> {
        self.check_mul(rhs.cols, "matmul_transpose_b")?;
        let mut out = DenseMatrix::zeros(self.rows, rhs.rows);
        for i in 0..self.rows {
            let a_row = self.row(i);
            for j in 0..rhs.rows {
                let b_row = rhs.row(j);
                let mut acc = 0.0;
                for (&a, &b) in a_row.iter().zip(b_row) {
                    acc += a * b;
                }
                out.data[i * rhs.rows + j] = acc;
            }
        }
        out.ensure_finite("matmul_transpose_b")?;
        Ok(out)
    }

    /// `self^T * rhs` without materializing the transpose.
    pub fn matmul_transpose_a(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, MathError> {
        if self.rows != rhs.rows {
            return Err(MathError::DimensionMismatch {
                op: "matmul_transpose_a".into(),
                detail: format!("lhs rows {} vs rhs rows {}", self.rows, rhs.rows),
            });
        }
        let mut out = DenseMatrix::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = rhs.row(k);
            for (i, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out.ensure_finite("matmul_transpose_a")?;
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &DenseMatrix, op: &str) -> Result<(), MathError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MathError::DimensionMismatch {
                op: op.into(),
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        Ok(())
    }

    /// Element-wise product.
    pub fn hadamard(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, MathError> {
        self.check_same_shape(rhs, "hadamard")?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a * b)
            .collect();
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self + alpha * rhs`.
    pub fn add_scaled(&self, rhs: &DenseMatrix, alpha: f64) -> Result<DenseMatrix, MathError> {
        self.check_same_shape(rhs, "add_scaled")?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a + alpha * b)
            .collect();
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, alpha: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| alpha * a).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn relu(&self) -> DenseMatrix {
        self.map(|x| if x > 0.0 { x } else { 0.0 })
    }

    /// Numerically stable softmax over each row.
    pub fn row_softmax(&self) -> Result<DenseMatrix, MathError> {
        let mut out = self.clone();
        for i in 0..self.rows {
            let row = out.row_mut(i);
            let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut sum = 0.0;
            for v in row.iter_mut() {
                *v = (*v - max).exp();
                sum += *v;
            }
            for v in row.iter_mut() {
                *v /= sum;
            }
        }
        out.ensure_finite("row_softmax")?;
        Ok(out)
    }

    /// Sum of element-wise products (Frobenius inner product).
    pub fn frobenius_dot(&self, rhs: &DenseMatrix) -> Result<f64, MathError> {
        self.check_same_shape(rhs, "frobenius_dot")?;
        Ok(self.data.iter().zip(&rhs.data).map(|(&a, &b)| a * b).sum())
    }

    /// Largest absolute element-wise difference; only meaningful for equal shapes.
    pub fn max_abs_diff(&self, rhs: &DenseMatrix) -> f64 {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn ensure_finite(&self, op: &str) -> Result<(), MathError> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(MathError::NonFinite { op: op.into() })
        }
    }
}

/// Glorot-uniform initialization: i.i.d. entries in [-a, a] with
/// a = sqrt(6 / (rows + cols)).
pub fn glorot_init(rows: usize, cols: usize, rng: &mut Rng) -> Result<DenseMatrix, MathError> {
    if rows == 0 || cols == 0 {
        return Err(MathError::EmptyDimension {
            op: "glorot_init".into(),
        });
    }
    let a = (6.0 / (rows + cols) as f64).sqrt();
    let data = (0..rows * cols).map(|_| rng.uniform(-a, a)).collect();
    DenseMatrix::from_vec(rows, cols, data)
}

/// Inverted dropout mask: each entry is 0 with probability `rate`, otherwise
/// 1/(1-rate), so the mask preserves expectations and evaluation needs no
/// rescaling.
pub fn dropout_mask(
    rows: usize,
    cols: usize,
    rate: f64,
    rng: &mut Rng,
) -> Result<DenseMatrix, MathError> {
    if !(0.0..1.0).contains(&rate) {
        return Err(MathError::InvalidProbability { value: rate });
    }
    let keep_scale = 1.0 / (1.0 - rate);
    let data = (0..rows * cols)
        .map(|_| if rng.bernoulli(rate) { 0.0 } else { keep_scale })
        .collect();
    DenseMatrix::from_vec(rows, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_rejects_wrong_length() {
        assert!(DenseMatrix::from_vec(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn from_vec_rejects_non_finite() {
        assert!(DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn matmul_small_case() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!(c.data(), &[19.0, 22.0, 43.0, 50.0]);
    }

    #[test]
    fn matmul_transpose_variants_agree_with_explicit_transpose() {
        let a = DenseMatrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![3.0, 4.0, -1.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![-1.0, 0.5, 2.0]]).unwrap();
        let via_t = a.matmul(&b.transpose()).unwrap();
        let direct = a.matmul_transpose_b(&b).unwrap();
        assert!(via_t.max_abs_diff(&direct) < 1e-15);

        let c = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let via_t = a.transpose().matmul(&c).unwrap();
        let direct = a.matmul_transpose_a(&c).unwrap();
        assert!(via_t.max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![-5.0, 0.0, 5.0]]).unwrap();
        let s = m.row_softmax().unwrap();
        for i in 0..2 {
            let sum: f64 = s.row(i).iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn glorot_respects_bound_and_seed() {
        let a = glorot_init(200, 300, &mut Rng::new(3)).unwrap();
        let bound = (6.0 / 500.0f64).sqrt();
        assert!(a.data().iter().all(|v| v.abs() <= bound));

        let b = glorot_init(200, 300, &mut Rng::new(3)).unwrap();
        assert_eq!(a, b);

        let single = glorot_init(1, 1, &mut Rng::new(11)).unwrap();
        assert!(single.get(0, 0).abs() <= 3.0f64.sqrt());

        assert!(glorot_init(0, 3, &mut Rng::new(0)).is_err());
    }

    #[test]
    fn dropout_rate_zero_is_all_ones() {
        let m = dropout_mask(4, 4, 0.0, &mut Rng::new(1)).unwrap();
        assert!(m.data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn dropout_mask_is_deterministic() {
        let a = dropout_mask(10, 10, 0.5, &mut Rng::new(8)).unwrap();
        let b = dropout_mask(10, 10, 0.5, &mut Rng::new(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dropout_mean_close_to_one() {
        // Inverted dropout preserves expectations; 1e6 samples keep the
        // sample mean within 1e-2 of 1.
        let m = dropout_mask(1000, 1000, 0.5, &mut Rng::new(21)).unwrap();
        let mean = m.data().iter().sum::<f64>() / 1e6;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn dropout_rejects_rate_one() {
        assert!(dropout_mask(2, 2, 1.0, &mut Rng::new(0)).is_err());
    }
}
