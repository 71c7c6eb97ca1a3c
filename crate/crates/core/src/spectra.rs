//! Deterministic symmetric eigensolver and truncated left-singular-vector
//! extraction. Determinism comes from a fixed cyclic sweep order, a fixed
//! tie-break on near-equal eigenvalues, and a fixed sign convention; no step
//! depends on scheduling.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;

/// Input must be symmetric to within this absolute entrywise tolerance.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this factor
/// times the Frobenius norm of the input.
pub const JACOBI_OFF_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues within `EIG_TIE_TOL · max(1, λ_max)` of each other count as
/// tied and are reordered by the tie-break rule.
pub const EIG_TIE_TOL: f64 = 1e-10;

/// Eigenpairs of a symmetric matrix, eigenvalues nonincreasing (exact except
/// for reorderings inside a tie group, which stay within the tie tolerance).
/// Column `j` of `vectors` belongs to `values[j]`. Bit-equal inputs produce
/// bit-equal results.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// The symmetrized Gram matrix (S + Sᵀ)/2 with S = m·mᵀ.
pub fn gram_left(m: &Matrix) -> Matrix {
    let s = m
        .matmul(&m.transpose())
        .expect("m·mᵀ dimensions always agree");
    Matrix::from_fn(m.rows(), m.rows(), |i, j| (s.get(i, j) + s.get(j, i)) / 2.0)
}

/// Cyclic-Jacobi eigendecomposition with deterministic ordering.
///
/// Eigenpairs are sorted by eigenvalue nonincreasing. Ties
/// (|λ_i − λ_j| ≤ EIG_TIE_TOL·max(1, λ_max)) are broken by preferring the
/// eigenvector whose largest-magnitude entry sits at the smaller row index.
/// Each eigenvector's sign is fixed so that its largest-magnitude entry
/// (ties toward the smaller index) is positive.
pub fn symmetric_eig_desc(s: &Matrix) -> Result<SpectralResult> {
    if s.rows() != s.cols() {
        return Err(TuckerError::DimensionMismatch {
            context: "symmetric_eig_desc",
            left: s.rows(),
            right: s.cols(),
        });
    }
    let n = s.rows();
    let mut max_asymmetry = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            max_asymmetry = max_asymmetry.max((s.get(i, j) - s.get(j, i)).abs());
        }
    }
    if max_asymmetry > SYMMETRY_TOL {
        return Err(TuckerError::NotSymmetric { max_asymmetry });
    }

    let mut a: Vec<f64> = s.data().to_vec();
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let input_norm = s.frobenius_norm_sq().sqrt();
    let stop = JACOBI_OFF_TOL * input_norm;

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off_sq += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off_sq.sqrt() <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = c * aip - sn * aiq;
                        a[p * n + i] = a[i * n + p];
                        a[i * n + q] = sn * aip + c * aiq;
                        a[q * n + i] = a[i * n + q];
                    }
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - sn * viq;
                    v[i * n + q] = sn * vip + c * viq;
                }
            }
        }
    }
    if !converged {
        return Err(TuckerError::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    // Sign fix, then record each column's pivot (row of largest magnitude,
    // first such row on magnitude ties).
    let mut pivots = vec![0usize; n];
    for j in 0..n {
        let mut pivot = 0;
        let mut best = -1.0f64;
        for i in 0..n {
            let mag = v[i * n + j].abs();
            if mag > best {
                best = mag;
                pivot = i;
            }
        }
        if v[pivot * n + j] < 0.0 {
            for i in 0..n {
                v[i * n + j] = -v[i * n + j];
            }
        }
        pivots[j] = pivot;
    }

    let eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let lambda_max = eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tie_tol = EIG_TIE_TOL * lambda_max.max(1.0);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eigenvalues[y].total_cmp(&eigenvalues[x]));
    // Chain consecutive near-equal eigenvalues into tie groups and reorder
    // each group by pivot row.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[order[end - 1]] - eigenvalues[order[end]]).abs() <= tie_tol {
            end += 1;
        }
        order[start..end].sort_by_key(|&j| pivots[j]);
        start = end;
    }

    let values: Vec<f64> = order.iter().map(|&j| eigenvalues[j]).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v[i * n + order[k]]);
    Ok(SpectralResult { values, vectors })
}

/// First `k` eigenvectors of `gram_left(m)` under `symmetric_eig_desc`
/// ordering, i.e. the deterministic top-k left singular vectors of `m`.
pub fn top_left_singular_vectors(m: &Matrix, k: usize) -> Result<Matrix> {
    if k == 0 || k > m.rows() {
        return Err(TuckerError::BadTruncation {
            requested: k,
            rows: m.rows(),
        });
    }
    let eig = symmetric_eig_desc(&gram_left(m))?;
    Ok(Matrix::from_fn(m.rows(), k, |i, j| eig.vectors.get(i, j)))
}
