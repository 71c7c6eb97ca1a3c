//! Shared fixtures for the benchmark targets.

use tucker_core::{advanced_construction, simple_construction, DenseTensor, MultilinearRank};

pub fn simple_order4() -> (DenseTensor, MultilinearRank) {
    let inst = simple_construction(4, 0.1).expect("valid parameters");
    (inst.tensor, inst.target_rank)
}

pub fn advanced_order4() -> (DenseTensor, MultilinearRank) {
    let inst = advanced_construction(4, 0.1).expect("valid parameters");
    (inst.tensor, inst.target_rank)
}

/// Deterministic dense filler with entries in [-1, 1), no RNG dependency.
pub fn dense_tensor(shape: Vec<usize>) -> DenseTensor {
    let len: usize = shape.iter().product();
    let data: Vec<f64> = (0..len)
        .map(|i| ((i * 2654435761 % 4294967296) as f64) / 2147483648.0 - 1.0)
        .collect();
    DenseTensor::from_flat(&shape, data).expect("finite data of matching length")
}
