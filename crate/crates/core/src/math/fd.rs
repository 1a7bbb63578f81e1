//! Central finite differences, the gradient oracle used throughout the
//! test suites and the `gradcheck` command.

use super::{DenseMatrix, MathError};

/// Entry-wise central difference (f(X + h e_ij) - f(X - h e_ij)) / 2h.
///
/// `f` must be finite in a neighborhood of `x`; a non-finite evaluation is
/// reported as an error rather than silently propagated into the gradient.
pub fn finite_difference_grad<F>(
    mut f: F,
    x: &DenseMatrix,
    h: f64,
) -> Result<DenseMatrix, MathError>
where
    F: FnMut(&DenseMatrix) -> f64,
{
    if !(h > 0.0) {
        return Err(MathError::InvalidStep { step: h });
    }
    let mut grad = DenseMatrix::zeros(x.rows(), x.cols());
    let mut probe = x.clone();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let orig = probe.get(i, j);
            probe.set(i, j, orig + h);
            let plus = f(&probe);
            probe.set(i, j, orig - h);
            let minus = f(&probe);
            probe.set(i, j, orig);
            if !plus.is_finite() || !minus.is_finite() {
                return Err(MathError::NonFinite {
                    op: "finite_difference_grad".into(),
                });
            }
            grad.set(i, j, (plus - minus) / (2.0 * h));
        }
    }
    Ok(grad)
}
