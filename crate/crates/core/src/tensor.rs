//! Dense order-N tensors with lexicographic flat storage, unfolding, folding,
//! n-mode products, inner products, and symmetry checks.

use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;

/// Dense real tensor. `data[k]` holds the entry at the multi-index whose
/// lexicographic position is `k` (first mode slowest, last mode fastest,
/// 0-based). Immutable after construction; all entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

fn checked_len(shape: &[usize]) -> Result<usize> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(TuckerError::BadShape {
            shape: shape.to_vec(),
        });
    }
    shape
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .ok_or(TuckerError::BadShape {
            shape: shape.to_vec(),
        })
}

impl DenseTensor {
    pub fn from_flat(shape: &[usize], data: Vec<f64>) -> Result<Self> {
        let expected = checked_len(shape)?;
        if data.len() != expected {
            return Err(TuckerError::LengthMismatch {
                expected,
                got: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(TuckerError::NonFinite { index });
        }
        Ok(Self {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn zeros(shape: &[usize]) -> Result<Self> {
        let len = checked_len(shape)?;
        Ok(Self {
            shape: shape.to_vec(),
            data: vec![0.0; len],
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn flat_index(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.order() || index.iter().zip(&self.shape).any(|(i, e)| i >= e) {
            return Err(TuckerError::IndexOutOfRange {
                index: index.to_vec(),
                shape: self.shape.clone(),
            });
        }
        Ok(index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &e)| acc * e + i))
    }

    pub fn get(&self, index: &[usize]) -> Result<f64> {
        Ok(self.data[self.flat_index(index)?])
    }

    pub(crate) fn set(&mut self, index: &[usize], value: f64) {
        let flat = self.flat_index(index).expect("index in range");
        self.data[flat] = value;
    }

    /// Mode-n unfolding: rows are indexed by the mode-`mode` coordinate,
    /// columns by the remaining coordinates in lexicographic order.
    pub fn unfold(&self, mode: usize) -> Result<Matrix> {
        if mode >= self.order() {
            return Err(TuckerError::ModeOutOfRange {
                mode,
                order: self.order(),
            });
        }
        let rows = self.shape[mode];
        let cols = self.len() / rows;
        let mut out = Matrix::zeros(rows, cols);
        let mut idx = vec![0usize; self.order()];
        for &v in &self.data {
            let mut col = 0;
            for (m, (&i, &e)) in idx.iter().zip(&self.shape).enumerate() {
                if m != mode {
                    col = col * e + i;
                }
            }
            out.set(idx[mode], col, v);
            increment(&mut idx, &self.shape);
        }
        Ok(out)
    }

    /// n-mode product: every mode-`mode` fiber is multiplied by `u`.
    /// Realized through the unfolding identity so that
    /// `unfold(result, mode) = u · unfold(self, mode)` holds by construction.
    pub fn mode_n_product(&self, u: &Matrix, mode: usize) -> Result<DenseTensor> {
        if mode >= self.order() {
            return Err(TuckerError::ModeOutOfRange {
                mode,
                order: self.order(),
            });
        }
        if u.cols() != self.shape[mode] {
            return Err(TuckerError::DimensionMismatch {
                context: "mode_n_product",
                left: u.cols(),
                right: self.shape[mode],
            });
        }
        let product = u.matmul(&self.unfold(mode)?)?;
        let mut new_shape = self.shape.clone();
        new_shape[mode] = u.rows();
        fold(&product, mode, &new_shape)
    }

    pub fn inner_product(&self, other: &DenseTensor) -> Result<f64> {
        if self.shape != other.shape {
            return Err(TuckerError::ShapeMismatch {
                expected: self.shape.clone(),
                got: other.shape.clone(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseTensor, f: impl Fn(f64, f64) -> f64) -> Result<DenseTensor> {
        if self.shape != other.shape {
            return Err(TuckerError::ShapeMismatch {
                expected: self.shape.clone(),
                got: other.shape.clone(),
            });
        }
        Ok(DenseTensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// True iff the tensor is cubical and invariant under index permutations
    /// up to `tol`. All N! permutations are checked for order ≤ 8; beyond
    /// that, adjacent transpositions suffice (they generate the full group).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.order();
        let extent = self.shape[0];
        if self.shape.iter().any(|&e| e != extent) {
            return false;
        }
        if n == 1 {
            return true;
        }
        let perms: Vec<Vec<usize>> = if n <= 8 {
            permutations(n)
        } else {
            (0..n - 1)
                .map(|k| {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.swap(k, k + 1);
                    p
                })
                .collect()
        };
        let mut idx = vec![0usize; n];
        let mut permuted = vec![0usize; n];
        for &v in &self.data {
            for p in &perms {
                for (m, &src) in p.iter().enumerate() {
                    permuted[m] = idx[src];
                }
                let flat = self
                    .flat_index(&permuted)
                    .expect("permuted index stays in range");
                if (v - self.data[flat]).abs() > tol {
                    return false;
                }
            }
            increment(&mut idx, &self.shape);
        }
        true
    }
}

/// Inverse of `unfold` for the same mode and shape.
pub fn fold(m: &Matrix, mode: usize, shape: &[usize]) -> Result<DenseTensor> {
    let len = checked_len(shape)?;
    if mode >= shape.len() {
        return Err(TuckerError::ModeOutOfRange {
            mode,
            order: shape.len(),
        });
    }
    let rows = shape[mode];
    let cols = len / rows;
    if m.rows() != rows || m.cols() != cols {
        return Err(TuckerError::DimensionMismatch {
            context: "fold",
            left: m.rows() * m.cols(),
            right: len,
        });
    }
    let mut out = DenseTensor::zeros(shape)?;
    let mut idx = vec![0usize; shape.len()];
    for k in 0..len {
        let mut col = 0;
        for (mm, (&i, &e)) in idx.iter().zip(shape).enumerate() {
            if mm != mode {
                col = col * e + i;
            }
        }
        out.data[k] = m.get(idx[mode], col);
        increment(&mut idx, shape);
    }
    Ok(out)
}

/// Advances a multi-index one lexicographic step (last mode fastest).
pub(crate) fn increment(idx: &mut [usize], shape: &[usize]) {
    for m in (0..idx.len()).rev() {
        idx[m] += 1;
        if idx[m] < shape[m] {
            return;
        }
        idx[m] = 0;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}
