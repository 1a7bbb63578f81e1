//! Row-wise matrix summarization operators (the GenVec family), their
//! rank-one fast paths and subgradients, and the bilinear pooling
//! transforms they compact.
//!
//! For a per-node auto-correlation matrix M = z z^T the generic summarizer
//! reads one row at a time; because M is rank one, every operator here
//! collapses to a scalar rescaling of z (or, for the diagonal, an
//! element-wise square), which is what the layer actually computes. The
//! explicit-M path is retained as a test oracle.

use thiserror::Error;

use crate::math::DenseMatrix;

/// Errors raised by the pooling operators.
#[derive(Debug, Error)]
pub enum PoolError {
    #[error("genvec requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("top-k count {k_prime} invalid for vectors of length {len}")]
    InvalidKPrime { k_prime: usize, len: usize },
    #[error("entry {value} at index {index} outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("factor matrix is {rows}x{cols} but the feature vector has length {len}")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
}

/// Row-wise summarization operator choice.
///
/// `UpperVec` is an analysis operator (a probabilistic upper bound on
/// `MaxVec`); it participates in the bound suites but is not accepted as a
/// trainable layer operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenVecOp {
    /// Row maximum; ties broken by lowest index.
    MaxVec,
    /// Row mean.
    MeanVec,
    /// Diagonal element (row i selects element i).
    DiagVec,
    /// Mean of the k' largest row entries; ties broken by lowest index.
    TopkVec { k_prime: usize },
    /// 1 - prod(1 - x_j); requires entries in [0, 1].
    UpperVec,
}

impl GenVecOp {
    /// Stable lowercase name, used in config files and reports.
    pub fn name(&self) -> &'static str {
        match self {
            GenVecOp::MaxVec => "max",
            GenVecOp::MeanVec => "mean",
            GenVecOp::DiagVec => "diag",
            GenVecOp::TopkVec { .. } => "topk",
            GenVecOp::UpperVec => "upper",
        }
    }

    /// Check that the operator can summarize length-`len` vectors.
    pub fn validate(&self, len: usize) -> Result<(), PoolError> {
        if let GenVecOp::TopkVec { k_prime } = *self {
            if k_prime == 0 || k_prime > len {
                return Err(PoolError::InvalidKPrime { k_prime, len });
            }
        }
        Ok(())
    }

    /// The four operators usable inside a trainable layer.
    pub fn trainable(&self) -> bool {
        !matches!(self, GenVecOp::UpperVec)
    }
}

fn argmax(z: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in z.iter().enumerate().skip(1) {
        if v > z[best] {
            best = i;
        }
    }
    best
}

/// Indices of the k' largest entries, ordered ascending by index.
/// Selection ranks by (value desc, index asc) so ties resolve to the lowest
/// index; the returned set is summed in index order, which makes
/// k' = len reproduce a plain mean bit-exactly.
fn topk_indices(z: &[f64], k_prime: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| z[b].partial_cmp(&z[a]).unwrap().then(a.cmp(&b)));
    let mut picked = order[..k_prime].to_vec();
    picked.sort_unstable();
    picked
}

fn mean_at(z: &[f64], indices: &[usize]) -> f64 {
    indices.iter().map(|&i| z[i]).sum::<f64>() / indices.len() as f64
}

fn upper_of_slice(row: &[f64]) -> Result<f64, PoolError> {
    let mut prod = 1.0;
    for (index, &p) in row.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(PoolError::OutOfRange { index, value: p });
        }
        prod *= 1.0 - p;
    }
    Ok(1.0 - prod)
}

/// Apply `g` to every row of a square matrix: component i of the output is
/// `g(row_i(M))`. This is the reference definition; layers use
/// [`genvec_rank1`] instead.
pub fn genvec(m: &DenseMatrix, op: GenVecOp) -> Result<Vec<f64>, PoolError> {
    if m.rows() != m.cols() {
        return Err(PoolError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let k = m.rows();
    op.validate(k)?;
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let row = m.row(i);
        let value = match op {
            GenVecOp::MaxVec => row[argmax(row)],
            GenVecOp::MeanVec => row.iter().sum::<f64>() / k as f64,
            GenVecOp::DiagVec => row[i],
            GenVecOp::TopkVec { k_prime } => mean_at(row, &topk_indices(row, k_prime)),
            GenVecOp::UpperVec => upper_of_slice(row)?,
        };
        out.push(value);
    }
    Ok(out)
}

/// GenVec of the rank-one matrix z z^T without materializing it:
/// MaxVec -> max(z) z, MeanVec -> mean(z) z, TopkVec -> mean(topk'(z)) z,
/// DiagVec -> z (element-wise) z, UpperVec -> upper(z) z.
///
/// The rank-one identities are definitional for the layer even when z has
/// negative entries (where they diverge from the explicit-M reading).
/// UpperVec is evaluated without range checks here; it only appears in
/// analysis suites that already constrain z to [0, 1].
pub fn genvec_rank1(z: &[f64], op: GenVecOp) -> Vec<f64> {
    op.validate(z.len()).expect("operator validated at construction");
    match op {
        GenVecOp::DiagVec => z.iter().map(|&v| v * v).collect(),
        _ => {
            let s = rank1_scale(z, op);
            z.iter().map(|&v| s * v).collect()
        }
    }
}

/// The scalar s(z) with genvec_rank1(z) = s(z) * z for the non-diagonal ops.
fn rank1_scale(z: &[f64], op: GenVecOp) -> f64 {
    match op {
        GenVecOp::MaxVec => z[argmax(z)],
        GenVecOp::MeanVec => z.iter().sum::<f64>() / z.len() as f64,
        GenVecOp::TopkVec { k_prime } => mean_at(z, &topk_indices(z, k_prime)),
        GenVecOp::UpperVec => {
            let mut prod = 1.0;
            for &p in z {
                prod *= 1.0 - p;
            }
            1.0 - prod
        }
        GenVecOp::DiagVec => unreachable!("diag has no scalar form"),
    }
}

/// Exact (sub)gradient of z -> genvec_rank1(z, op) applied to `upstream`.
///
/// For max/top-k' the subgradient routes through the deterministically
/// tie-broken selection, matching the forward pass exactly.
pub fn genvec_rank1_backward(z: &[f64], op: GenVecOp, upstream: &[f64]) -> Vec<f64> {
    assert_eq!(z.len(), upstream.len());
    match op {
        GenVecOp::DiagVec => z
            .iter()
            .zip(upstream)
            .map(|(&zi, &ui)| 2.0 * zi * ui)
            .collect(),
        GenVecOp::MaxVec => {
            let m = argmax(z);
            let s = z[m];
            let dot: f64 = upstream.iter().zip(z).map(|(&u, &zi)| u * zi).sum();
            let mut grad: Vec<f64> = upstream.iter().map(|&u| s * u).collect();
            grad[m] += dot;
            grad
        }
        GenVecOp::MeanVec => {
            let k = z.len() as f64;
            let s = z.iter().sum::<f64>() / k;
            let dot: f64 = upstream.iter().zip(z).map(|(&u, &zi)| u * zi).sum();
            upstream.iter().map(|&u| s * u + dot / k).collect()
        }
        GenVecOp::TopkVec { k_prime } => {
            let selected = topk_indices(z, k_prime);
            let s = mean_at(z, &selected);
            let dot: f64 = upstream.iter().zip(z).map(|(&u, &zi)| u * zi).sum();
            let mut grad: Vec<f64> = upstream.iter().map(|&u| s * u).collect();
            for &i in &selected {
                grad[i] += dot / k_prime as f64;
            }
            grad
        }
        GenVecOp::UpperVec => {
            // d upper / d z_i = prod_{j != i} (1 - z_j)
            let s = rank1_scale(z, op);
            let dot: f64 = upstream.iter().zip(z).map(|(&u, &zi)| u * zi).sum();
            (0..z.len())
                .map(|i| {
                    let mut partial = 1.0;
                    for (j, &zj) in z.iter().enumerate() {
                        if j != i {
                            partial *= 1.0 - zj;
                        }
                    }
                    s * upstream[i] + partial * dot
                })
                .collect()
        }
    }
}

/// Upper-triangular (including diagonal) vectorization of h h^T + eps I,
/// row-major over i <= j. Output length d(d+1)/2.
pub fn bilinear_pool(h: &[f64], eps: f64) -> Vec<f64> {
    let d = h.len();
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let mut v = h[i] * h[j];
            if i == j {
                v += eps;
            }
            out.push(v);
        }
    }
    out
}

/// Factorized bilinear transform: upper-triangular vectorization of
/// (W h)(W h)^T + eps I, length k(k+1)/2 for a k x d factor matrix.
pub fn fbp_transform(w: &DenseMatrix, h: &[f64], eps: f64) -> Result<Vec<f64>, PoolError> {
    if w.cols() != h.len() {
        return Err(PoolError::ShapeMismatch {
            rows: w.rows(),
            cols: w.cols(),
            len: h.len(),
        });
    }
    let z: Vec<f64> = (0..w.rows())
        .map(|i| w.row(i).iter().zip(h).map(|(&a, &b)| a * b).sum())
        .collect();
    Ok(bilinear_pool(&z, eps))
}

/// Probability that at least one of k independent events with probabilities
/// p_1..p_k occurs: 1 - prod(1 - p_j).
pub fn upper_bound(p: &[f64]) -> Result<f64, PoolError> {
    upper_of_slice(p)
}
