//! Tucker model: multilinear ranks, validated decompositions, optimal cores,
//! reconstruction, and the unfolding identity.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;
use crate::tensor::DenseTensor;

/// Factor matrices must satisfy ‖AᵀA − I‖_max ≤ this bound.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Target multilinear rank (R₁, …, R_N), one entry per mode, each ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearRank(Vec<usize>);

impl MultilinearRank {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        if ranks.is_empty() || ranks.contains(&0) {
            return Err(TuckerError::InvalidParameter(format!(
                "multilinear rank must be nonempty with positive entries, got {ranks:?}"
            )));
        }
        Ok(MultilinearRank(ranks))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    /// Checks Rₙ ≤ Iₙ against a concrete tensor shape. Rₙ = Iₙ is legal and
    /// selects a full basis for that mode.
    pub fn validate_for(&self, shape: &[usize]) -> Result<()> {
        if self.0.len() != shape.len() {
            return Err(TuckerError::DimensionMismatch {
                context: "rank order vs tensor order",
                left: self.0.len(),
                right: shape.len(),
            });
        }
        for (mode, (&rank, &extent)) in self.0.iter().zip(shape).enumerate() {
            if rank > extent {
                return Err(TuckerError::RankOutOfRange { mode, rank, extent });
            }
        }
        Ok(())
    }
}

/// A core tensor together with one columnwise-orthonormal factor per mode.
/// Factor `n` has shape Iₙ × Rₙ where Rₙ is the core's extent along mode `n`;
/// the represented tensor is core ×₁ A⁽¹⁾ ⋯ ×_N A⁽N⁾.
#[derive(Debug, Clone, PartialEq)]
pub struct TuckerDecomposition {
    core: DenseTensor,
    factors: Vec<Matrix>,
}

impl TuckerDecomposition {
    pub fn new(core: DenseTensor, factors: Vec<Matrix>) -> Result<Self> {
        if factors.len() != core.order() {
            return Err(TuckerError::DimensionMismatch {
                context: "factor count vs core order",
                left: factors.len(),
                right: core.order(),
            });
        }
        for (n, factor) in factors.iter().enumerate() {
            if factor.cols() != core.shape()[n] {
                return Err(TuckerError::DimensionMismatch {
                    context: "factor columns vs core extent",
                    left: factor.cols(),
                    right: core.shape()[n],
                });
            }
            if factor.rows() < factor.cols() {
                return Err(TuckerError::DimensionMismatch {
                    context: "factor rows vs columns",
                    left: factor.rows(),
                    right: factor.cols(),
                });
            }
            let defect = factor.orthonormality_defect();
            if defect > ORTHONORMALITY_TOL {
                return Err(TuckerError::FactorNotOrthonormal {
                    index: n,
                    max_deviation: defect,
                });
            }
        }
        Ok(TuckerDecomposition { core, factors })
    }

    pub fn core(&self) -> &DenseTensor {
        &self.core
    }

    pub fn factors(&self) -> &[Matrix] {
        &self.factors
    }

    /// Shape (I₁, …, I_N) of the represented tensor.
    pub fn output_shape(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.rows()).collect()
    }

    /// core ×₁ A⁽¹⁾ ⋯ ×_N A⁽N⁾, applied in ascending mode order.
    pub fn reconstruct(&self) -> DenseTensor {
        let mut out = self.core.clone();
        for (mode, factor) in self.factors.iter().enumerate() {
            out = out
                .mode_n_product(factor, mode)
                .expect("validated factors always contract");
        }
        out
    }
}

/// The error-minimizing core for fixed factors: X ×₁ A⁽¹⁾ᵀ ⋯ ×_N A⁽N⁾ᵀ,
/// contracted in ascending mode order.
pub fn optimal_core(tensor: &DenseTensor, factors: &[Matrix]) -> Result<DenseTensor> {
    if factors.len() != tensor.order() {
        return Err(TuckerError::DimensionMismatch {
            context: "factor count vs tensor order",
            left: factors.len(),
            right: tensor.order(),
        });
    }
    for (n, factor) in factors.iter().enumerate() {
        if factor.rows() != tensor.shape()[n] {
            return Err(TuckerError::DimensionMismatch {
                context: "factor rows vs tensor extent",
                left: factor.rows(),
                right: tensor.shape()[n],
            });
        }
    }
    let mut out = tensor.clone();
    for (mode, factor) in factors.iter().enumerate() {
        out = out.mode_n_product(&factor.transpose(), mode)?;
    }
    Ok(out)
}

/// Squared Frobenius distance ‖X − reconstruct(D)‖², computed from the
/// explicit residual.
pub fn reconstruction_error_sq(tensor: &DenseTensor, dec: &TuckerDecomposition) -> Result<f64> {
    let rebuilt = dec.reconstruct();
    let diff = tensor.sub(&rebuilt)?;
    Ok(diff.frobenius_norm_sq())
}

/// Mode-n unfolding of the represented tensor without materializing it:
/// A⁽ⁿ⁾ · G₍ₙ₎ · (A⁽ᵐ⁾ ⊗ ⋯ over m ≠ n, ascending)ᵀ. The ascending Kronecker
/// order matches the lexicographic column layout of `DenseTensor::unfold`.
pub fn tucker_unfolding(dec: &TuckerDecomposition, mode: usize) -> Result<Matrix> {
    let order = dec.core.order();
    if mode >= order {
        return Err(TuckerError::ModeOutOfRange { mode, order });
    }
    let core_unfolded = dec.core.unfold(mode)?;
    let mut kron: Option<Matrix> = None;
    for (m, factor) in dec.factors.iter().enumerate() {
        if m == mode {
            continue;
        }
        kron = Some(match kron {
            None => factor.clone(),
            Some(k) => k.kron(factor),
        });
    }
    let left = dec.factors[mode].matmul(&core_unfolded)?;
    match kron {
        Some(k) => left.matmul(&k.transpose()),
        None => Ok(left),
    }
}

/// The orthogonal projector A·Aᵀ onto the column span of a columnwise-
/// orthonormal matrix.
pub fn projector(a: &Matrix) -> Result<Matrix> {
    let defect = a.orthonormality_defect();
    if defect > ORTHONORMALITY_TOL {
        return Err(TuckerError::NotOrthonormal {
            max_deviation: defect,
        });
    }
    a.matmul(&a.transpose())
}
