//! Truncated Tucker algorithms: HOSVD, sequentially truncated HOSVD, and
//! higher-order orthogonal iteration. All three inherit bitwise determinism
//! from the spectral backend.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;
use crate::spectra::top_left_singular_vectors;
use crate::tensor::DenseTensor;
use crate::tucker::{optimal_core, reconstruction_error_sq, MultilinearRank, TuckerDecomposition};

/// Which decomposition seeds the HOOI factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HooiInit {
    Hosvd,
    StHosvd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HooiConfig {
    /// Cap on outer iterations (each updates every mode once). Must be ≥ 1.
    pub max_iterations: usize,
    /// Converged when |err²_k − err²_{k+1}| ≤ tolerance · max(1, err²_k).
    pub tolerance: f64,
    pub init: HooiInit,
}

impl Default for HooiConfig {
    fn default() -> Self {
        HooiConfig {
            max_iterations: 100,
            tolerance: 1e-12,
            init: HooiInit::Hosvd,
        }
    }
}

/// HOOI result plus its convergence history. `errors_sq[0]` is the error of
/// the initialization; entry k+1 follows outer iteration k. `iterations_run`
/// counts completed outer iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct HooiTrace {
    pub decomposition: TuckerDecomposition,
    pub errors_sq: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
}

/// Higher-order SVD: factor n is the top-Rₙ left singular block of the
/// mode-n unfolding of the original tensor, all modes independent.
pub fn hosvd(tensor: &DenseTensor, rank: &MultilinearRank) -> Result<TuckerDecomposition> {
    rank.validate_for(tensor.shape())?;
    let mut factors = Vec::with_capacity(tensor.order());
    for (mode, &r) in rank.dims().iter().enumerate() {
        let unfolded = tensor.unfold(mode)?;
        factors.push(top_left_singular_vectors(&unfolded, r)?);
    }
    let core = optimal_core(tensor, &factors)?;
    TuckerDecomposition::new(core, factors)
}

/// Sequentially truncated HOSVD. Modes are processed in `mode_order`
/// (default ascending); after each factor is extracted from the current
/// partially contracted tensor, that mode is immediately contracted:
/// X ← X ×ₙ A⁽ⁿ⁾ᵀ. The final contracted tensor is the core.
pub fn st_hosvd(
    tensor: &DenseTensor,
    rank: &MultilinearRank,
    mode_order: Option<&[usize]>,
) -> Result<TuckerDecomposition> {
    rank.validate_for(tensor.shape())?;
    let n = tensor.order();
    let default_order: Vec<usize> = (0..n).collect();
    let order = mode_order.unwrap_or(&default_order);
    let mut seen = vec![false; n];
    for &m in order {
        if m >= n || seen[m] {
            return Err(TuckerError::BadModeOrder {
                order: order.to_vec(),
            });
        }
        seen[m] = true;
    }
    if order.len() != n {
        return Err(TuckerError::BadModeOrder {
            order: order.to_vec(),
        });
    }

    let mut current = tensor.clone();
    let mut factors: Vec<Option<Matrix>> = vec![None; n];
    for &mode in order {
        let unfolded = current.unfold(mode)?;
        let factor = top_left_singular_vectors(&unfolded, rank.dims()[mode])?;
        current = current.mode_n_product(&factor.transpose(), mode)?;
        factors[mode] = Some(factor);
    }
    let factors: Vec<Matrix> = factors
        .into_iter()
        .map(|f| f.expect("every mode visited exactly once"))
        .collect();
    TuckerDecomposition::new(current, factors)
}

/// Higher-order orthogonal iteration.
///
/// Each outer iteration visits modes in ascending order. For mode n it forms
/// B = X contracted with every other current factor transposed (ascending),
/// takes the top-Rₙ left singular block of B's mode-n unfolding as a
/// candidate, and keeps the current factor whenever the candidate spans the
/// same subspace (projectors A·Aᵀ equal value-by-value); the objective only
/// depends on the span, so swapping in a reordered basis would change bits
/// without changing the error. Otherwise the candidate replaces the factor.
pub fn hooi(tensor: &DenseTensor, rank: &MultilinearRank, config: &HooiConfig) -> Result<HooiTrace> {
    rank.validate_for(tensor.shape())?;
    if config.max_iterations < 1 {
        return Err(TuckerError::InvalidParameter(
            "max_iterations must be at least 1".into(),
        ));
    }
    if !config.tolerance.is_finite() || config.tolerance < 0.0 {
        return Err(TuckerError::InvalidParameter(format!(
            "tolerance must be finite and nonnegative, got {}",
            config.tolerance
        )));
    }

    let init = match config.init {
        HooiInit::Hosvd => hosvd(tensor, rank)?,
        HooiInit::StHosvd => st_hosvd(tensor, rank, None)?,
    };
    let mut factors: Vec<Matrix> = init.factors().to_vec();
    let mut decomposition = init;
    let mut errors_sq = vec![reconstruction_error_sq(tensor, &decomposition)?];
    let mut iterations_run = 0;
    let mut converged = false;

    let n = tensor.order();
    for _ in 0..config.max_iterations {
        for mode in 0..n {
            // Contract every mode except `mode` through the corresponding
            // factor transpose, ascending.
            let mut b = tensor.clone();
            for (m, factor) in factors.iter().enumerate() {
                if m == mode {
                    continue;
                }
                b = b.mode_n_product(&factor.transpose(), m)?;
            }
            let unfolded = b.unfold(mode)?;
            let candidate = top_left_singular_vectors(&unfolded, rank.dims()[mode])?;
            let current = &factors[mode];
            let same_span = {
                let p_current = current.matmul(&current.transpose())?;
                let p_candidate = candidate.matmul(&candidate.transpose())?;
                p_current == p_candidate
            };
            if !same_span {
                factors[mode] = candidate;
            }
        }
        let core = optimal_core(tensor, &factors)?;
        decomposition = TuckerDecomposition::new(core, factors.clone())?;
        let err = reconstruction_error_sq(tensor, &decomposition)?;
        let prev = *errors_sq.last().expect("seeded with the init error");
        errors_sq.push(err);
        iterations_run += 1;
        if (prev - err).abs() <= config.tolerance * prev.max(1.0) {
            converged = true;
            break;
        }
    }

    Ok(HooiTrace {
        decomposition,
        errors_sq,
        iterations_run,
        converged,
    })
}
