//! Dense Tucker decomposition with a fully deterministic spectral backend.
//!
//! The crate provides the tensor algebra (unfoldings, n-mode products), a
//! cyclic-Jacobi eigensolver with pinned tie-breaking and sign conventions,
//! the three classical truncation algorithms (HOSVD, ST-HOSVD, HOOI),
//! generators for two worst-case tensor families on which greedy truncation
//! provably loses a factor close to the order N, and reporting utilities
//! that measure that gap against explicit competitor decompositions.
//!
//! Every operation is a pure function of its inputs; bit-equal inputs give
//! bit-equal outputs, including across processes.

pub mod adversarial;
pub mod algs;
pub mod error;
pub mod json;
pub mod matrix;
pub mod spectra;
pub mod tensor;
pub mod tucker;
pub mod verify;

pub use adversarial::{
    advanced_construction, competitor_decomposition, simple_construction, ConstructionInstance,
    ConstructionKind,
};
pub use algs::{hooi, hosvd, st_hosvd, HooiConfig, HooiInit, HooiTrace};
pub use error::{Result, TuckerError};
pub use matrix::Matrix;
pub use spectra::{gram_left, symmetric_eig_desc, top_left_singular_vectors, SpectralResult};
pub use tensor::{fold, DenseTensor};
pub use tucker::{
    optimal_core, projector, reconstruction_error_sq, tucker_unfolding, MultilinearRank,
    TuckerDecomposition,
};
pub use verify::{axis_aligned_oracle, ratio_report, tail_energy_bound, Algorithm, RatioReport};
