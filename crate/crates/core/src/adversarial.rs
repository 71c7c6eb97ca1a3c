//! Worst-case instance generators. Both constructions stack a high-value
//! "top" entry against spread-out low-value components so that greedy
//! per-mode truncation keeps the wrong subspace in every mode, plus the
//! explicit axis-aligned competitor decomposition that witnesses how cheap
//! the instance really is.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;
use crate::tensor::DenseTensor;
use crate::tucker::{optimal_core, MultilinearRank, TuckerDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    Simple,
    Advanced,
}

impl ConstructionKind {
    pub fn token(self) -> &'static str {
        match self {
            ConstructionKind::Simple => "simple",
            ConstructionKind::Advanced => "advanced",
        }
    }

    pub fn parse_token(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(ConstructionKind::Simple),
            "advanced" => Ok(ConstructionKind::Advanced),
            other => Err(TuckerError::Parse(format!(
                "unknown construction kind {other:?}"
            ))),
        }
    }
}

/// A generated worst-case tensor split into its disjoint-support components:
/// `tensor` = `top` + `bottom` (+ `middle` for the advanced kind), exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionInstance {
    pub kind: ConstructionKind,
    pub order: usize,
    pub epsilon: f64,
    pub tensor: DenseTensor,
    pub top: DenseTensor,
    pub bottom: DenseTensor,
    pub middle: Option<DenseTensor>,
    pub target_rank: MultilinearRank,
}

fn validate_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(TuckerError::InvalidParameter(format!(
            "epsilon must be a positive finite real, got {epsilon}"
        )));
    }
    Ok(())
}

/// Cubical order-N tensor of extent 3 per mode:
/// - top component: one entry √(1+ε) at (0,…,0);
/// - bottom component: N entries of 1, each with index 1 in exactly one
///   mode and index 2 everywhere else.
///
/// Target rank (2,…,2). The high top value baits greedy mode-wise
/// truncation into keeping index 0, which costs the entire bottom component
/// in every mode; the competitor keeps the bottom instead and pays only 1+ε.
pub fn simple_construction(order: usize, epsilon: f64) -> Result<ConstructionInstance> {
    if order < 2 {
        return Err(TuckerError::InvalidParameter(format!(
            "simple construction needs order at least 2, got {order}"
        )));
    }
    validate_epsilon(epsilon)?;
    let shape = vec![3usize; order];
    // One square root, reused everywhere, so every nonzero of the top
    // component is the same bit pattern.
    let s = (1.0 + epsilon).sqrt();

    let mut top = DenseTensor::zeros(&shape)?;
    top.set(&vec![0; order], s);

    let mut bottom = DenseTensor::zeros(&shape)?;
    for n in 0..order {
        let mut index = vec![2usize; order];
        index[n] = 1;
        bottom.set(&index, 1.0);
    }

    let tensor = top.add(&bottom)?;
    Ok(ConstructionInstance {
        kind: ConstructionKind::Simple,
        order,
        epsilon,
        tensor,
        top,
        bottom,
        middle: None,
        target_rank: MultilinearRank::new(vec![2; order])?,
    })
}

/// Cubical order-N tensor of extent 4 per mode:
/// - top component: one entry √(1+ε) at (0,…,0);
/// - middle component: N entries of √(1+ε), index 2 in one mode, 1 elsewhere;
/// - bottom component: N entries of 1, index 3 in one mode, 2 elsewhere.
///
/// Target rank (3,…,3). The middle component keeps the bait alive through
/// sequential truncation: after each mode is projected, the remaining modes
/// still see a decoy spectrum that ranks the bottom component last.
pub fn advanced_construction(order: usize, epsilon: f64) -> Result<ConstructionInstance> {
    if order < 3 {
        return Err(TuckerError::InvalidParameter(format!(
            "advanced construction needs order at least 3, got {order}"
        )));
    }
    validate_epsilon(epsilon)?;
    let shape = vec![4usize; order];
    let s = (1.0 + epsilon).sqrt();

    let mut top = DenseTensor::zeros(&shape)?;
    top.set(&vec![0; order], s);

    let mut middle = DenseTensor::zeros(&shape)?;
    for n in 0..order {
        let mut index = vec![1usize; order];
        index[n] = 2;
        middle.set(&index, s);
    }

    let mut bottom = DenseTensor::zeros(&shape)?;
    for n in 0..order {
        let mut index = vec![2usize; order];
        index[n] = 3;
        bottom.set(&index, 1.0);
    }

    let tensor = top.add(&middle)?.add(&bottom)?;
    Ok(ConstructionInstance {
        kind: ConstructionKind::Advanced,
        order,
        epsilon,
        tensor,
        top,
        bottom,
        middle: Some(middle),
        target_rank: MultilinearRank::new(vec![3; order])?,
    })
}

/// The lower-bound witness: every factor selects the standard basis vectors
/// that span everything except index 0, so reconstruction keeps all
/// components but the top one and the error is exactly ‖top‖² = 1+ε.
pub fn competitor_decomposition(inst: &ConstructionInstance) -> TuckerDecomposition {
    let (extent, keep): (usize, &[usize]) = match inst.kind {
        ConstructionKind::Simple => (3, &[1, 2]),
        ConstructionKind::Advanced => (4, &[1, 2, 3]),
    };
    let factors: Vec<Matrix> = (0..inst.order)
        .map(|_| Matrix::basis_selection(extent, keep).expect("indices are in range and distinct"))
        .collect();
    let core =
        optimal_core(&inst.tensor, &factors).expect("factor rows match the instance extents");
    TuckerDecomposition::new(core, factors).expect("basis selections are orthonormal")
}
