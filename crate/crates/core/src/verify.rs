//! Quantitative checks: the spectral tail upper bound on HOSVD error, a
//! brute-force axis-aligned oracle giving independent upper bounds on the
//! optimal loss, and ratio reports that package a run's error against the
//! competitor witness.

use crate::adversarial::{competitor_decomposition, ConstructionInstance};
use crate::algs::{hooi, hosvd, st_hosvd, HooiConfig};
use crate::error::{Result, TuckerError};
use crate::spectra::{gram_left, symmetric_eig_desc};
use crate::tensor::DenseTensor;
use crate::tucker::{reconstruction_error_sq, MultilinearRank};

/// Cap on Π_n C(Iₙ, Rₙ) in the oracle enumeration.
pub const ORACLE_ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Hosvd,
    StHosvd,
    Hooi,
}

impl Algorithm {
    /// Stable token used in report JSON and CSV.
    pub fn token(self) -> &'static str {
        match self {
            Algorithm::Hosvd => "hosvd",
            Algorithm::StHosvd => "st_hosvd",
            Algorithm::Hooi => "hooi",
        }
    }

    pub fn parse_token(s: &str) -> Result<Self> {
        match s {
            "hosvd" => Ok(Algorithm::Hosvd),
            "st_hosvd" => Ok(Algorithm::StHosvd),
            "hooi" => Ok(Algorithm::Hooi),
            other => Err(TuckerError::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// One measured (instance, algorithm) pairing. `competitor_error_sq` is an
/// achieved objective value, so it upper-bounds the optimal loss and
/// `ratio_lower_bound` = error_sq / competitor_error_sq genuinely lower-
/// bounds the approximation ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub algorithm: Algorithm,
    pub order: usize,
    pub epsilon: f64,
    pub error_sq: f64,
    pub competitor_error_sq: f64,
    pub ratio_lower_bound: f64,
    pub tail_bound: f64,
}

/// Σ over modes of the squared singular values of unfold(t, n) past Rₙ.
/// Upper-bounds the HOSVD squared error.
pub fn tail_energy_bound(t: &DenseTensor, r: &MultilinearRank) -> Result<f64> {
    r.validate_for(t.shape())?;
    let mut total = 0.0;
    for (mode, &rank) in r.dims().iter().enumerate() {
        let eig = symmetric_eig_desc(&gram_left(&t.unfold(mode)?))?;
        for &value in &eig.values[rank..] {
            total += value;
        }
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = match out.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    out
}

/// Advances an ascending k-subset of {0,…,n−1} to its lexicographic
/// successor; false when `c` was the last subset.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive search over axis-aligned Tucker decompositions: every choice
/// of Rₙ standard basis vectors per mode. Returns the minimum error²
/// (energy outside the selected box) and the first minimizing subset tuple
/// in lexicographic order. The minimum upper-bounds the optimal loss.
pub fn axis_aligned_oracle(
    t: &DenseTensor,
    r: &MultilinearRank,
) -> Result<(f64, Vec<Vec<usize>>)> {
    r.validate_for(t.shape())?;
    let mut count: u128 = 1;
    for (&extent, &rank) in t.shape().iter().zip(r.dims()) {
        count = count
            .checked_mul(binomial(extent, rank))
            .unwrap_or(u128::MAX);
    }
    if count > ORACLE_ENUMERATION_LIMIT {
        return Err(TuckerError::EnumerationTooLarge {
            size: count,
            limit: ORACLE_ENUMERATION_LIMIT,
        });
    }

    let order = t.order();
    let total = t.frobenius_norm_sq();
    let mut subsets: Vec<Vec<usize>> = r.dims().iter().map(|&k| (0..k).collect()).collect();
    let mut best_error = f64::INFINITY;
    let mut best_subsets = subsets.clone();

    loop {
        // Energy inside the selected box, summed in lexicographic order.
        let mut inside = 0.0;
        let mut pos = vec![0usize; order];
        'box_scan: loop {
            let index: Vec<usize> = pos
                .iter()
                .zip(&subsets)
                .map(|(&p, subset)| subset[p])
                .collect();
            let v = t.get(&index).expect("subset indices are in range");
            inside += v * v;
            for axis in (0..order).rev() {
                pos[axis] += 1;
                if pos[axis] < subsets[axis].len() {
                    continue 'box_scan;
                }
                pos[axis] = 0;
            }
            break;
        }
        let error = total - inside;
        if error < best_error {
            best_error = error;
            best_subsets = subsets.clone();
        }

        // Lexicographic successor of the subset tuple: last mode fastest.
        let mut advanced = false;
        for axis in (0..order).rev() {
            if next_combination(&mut subsets[axis], t.shape()[axis]) {
                advanced = true;
                break;
            }
            subsets[axis] = (0..r.dims()[axis]).collect();
        }
        if !advanced {
            break;
        }
    }
    Ok((best_error, best_subsets))
}

/// Runs the algorithm at the instance's target rank with default settings
/// and packages the measured numbers.
pub fn ratio_report(inst: &ConstructionInstance, algorithm: Algorithm) -> Result<RatioReport> {
    let decomposition = match algorithm {
        Algorithm::Hosvd => hosvd(&inst.tensor, &inst.target_rank)?,
        Algorithm::StHosvd => st_hosvd(&inst.tensor, &inst.target_rank, None)?,
        Algorithm::Hooi => {
            hooi(&inst.tensor, &inst.target_rank, &HooiConfig::default())?.decomposition
        }
    };
    let error_sq = reconstruction_error_sq(&inst.tensor, &decomposition)?;
    let competitor = competitor_decomposition(inst);
    let competitor_error_sq = reconstruction_error_sq(&inst.tensor, &competitor)?;
    Ok(RatioReport {
        algorithm,
        order: inst.order,
        epsilon: inst.epsilon,
        error_sq,
        competitor_error_sq,
        ratio_lower_bound: error_sq / competitor_error_sq,
        tail_bound: tail_energy_bound(&inst.tensor, &inst.target_rank)?,
    })
}
