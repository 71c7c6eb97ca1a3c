//! File formats. Writing is done by hand so every float is emitted with 17
//! significant digits (bit-exact round trips and byte-identical reruns);
//! reading goes through serde_json into raw mirrors, then through the
//! validating constructors.

use serde::Deserialize;

use crate::adversarial::{
    advanced_construction, simple_construction, ConstructionInstance, ConstructionKind,
};
use crate::error::{Result, TuckerError};
use crate::matrix::Matrix;
use crate::tensor::DenseTensor;
use crate::tucker::TuckerDecomposition;
use crate::verify::{Algorithm, RatioReport};

/// 17 significant digits, enough to reproduce any f64 exactly on parse.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_f64_array(out: &mut String, data: &[f64]) {
    out.push('[');
    for (i, v) in data.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*v));
    }
    out.push(']');
}

fn push_usize_array(out: &mut String, data: &[usize]) {
    out.push('[');
    for (i, v) in data.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&v.to_string());
    }
    out.push(']');
}

pub fn tensor_to_json(t: &DenseTensor) -> String {
    let mut out = String::from("{\"shape\":");
    push_usize_array(&mut out, t.shape());
    out.push_str(",\"data\":");
    push_f64_array(&mut out, t.data());
    out.push('}');
    out
}

pub fn matrix_to_json(m: &Matrix) -> String {
    let mut out = format!("{{\"rows\":{},\"cols\":{},\"data\":", m.rows(), m.cols());
    push_f64_array(&mut out, m.data());
    out.push('}');
    out
}

pub fn decomposition_to_json(d: &TuckerDecomposition) -> String {
    let mut out = String::from("{\"core\":");
    out.push_str(&tensor_to_json(d.core()));
    out.push_str(",\"factors\":[");
    for (i, f) in d.factors().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&matrix_to_json(f));
    }
    out.push_str("]}");
    out
}

pub fn instance_to_json(inst: &ConstructionInstance) -> String {
    let mut out = format!(
        "{{\"kind\":\"{}\",\"order\":{},\"epsilon\":{},\"target_rank\":",
        inst.kind.token(),
        inst.order,
        fmt_f64(inst.epsilon)
    );
    push_usize_array(&mut out, inst.target_rank.dims());
    out.push_str(",\"tensor\":");
    out.push_str(&tensor_to_json(&inst.tensor));
    out.push('}');
    out
}

pub fn report_to_json(r: &RatioReport) -> String {
    format!(
        "{{\"algorithm\":\"{}\",\"order\":{},\"epsilon\":{},\"error_sq\":{},\"competitor_error_sq\":{},\"ratio_lower_bound\":{},\"tail_bound\":{}}}",
        r.algorithm.token(),
        r.order,
        fmt_f64(r.epsilon),
        fmt_f64(r.error_sq),
        fmt_f64(r.competitor_error_sq),
        fmt_f64(r.ratio_lower_bound),
        fmt_f64(r.tail_bound)
    )
}

pub const CSV_HEADER: &str =
    "algorithm,N,epsilon,error_sq,competitor_error_sq,ratio_lower_bound,tail_bound";

/// One header line plus one line per report, every line newline-terminated.
pub fn reports_to_csv(reports: &[RatioReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.algorithm.token(),
            r.order,
            fmt_f64(r.epsilon),
            fmt_f64(r.error_sq),
            fmt_f64(r.competitor_error_sq),
            fmt_f64(r.ratio_lower_bound),
            fmt_f64(r.tail_bound)
        ));
    }
    out
}

#[derive(Deserialize)]
struct RawTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDecomposition {
    core: RawTensor,
    factors: Vec<RawMatrix>,
}

#[derive(Deserialize)]
struct RawInstance {
    kind: String,
    order: usize,
    epsilon: f64,
    target_rank: Vec<usize>,
    tensor: RawTensor,
}

#[derive(Deserialize)]
struct RawReport {
    algorithm: String,
    order: usize,
    epsilon: f64,
    error_sq: f64,
    competitor_error_sq: f64,
    ratio_lower_bound: f64,
    tail_bound: f64,
}

fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| TuckerError::Parse(e.to_string()))
}

pub fn tensor_from_json(s: &str) -> Result<DenseTensor> {
    let raw: RawTensor = parse(s)?;
    DenseTensor::from_flat(&raw.shape, raw.data)
}

pub fn decomposition_from_json(s: &str) -> Result<TuckerDecomposition> {
    let raw: RawDecomposition = parse(s)?;
    let core = DenseTensor::from_flat(&raw.core.shape, raw.core.data)?;
    let factors = raw
        .factors
        .into_iter()
        .map(|m| Matrix::from_flat(m.rows, m.cols, m.data))
        .collect::<Result<Vec<_>>>()?;
    TuckerDecomposition::new(core, factors)
}

/// Parses instance metadata, regenerates the construction from it, and
/// insists the stored tensor and target rank match the regeneration
/// bit-for-bit; the returned instance therefore always carries consistent
/// components.
pub fn instance_from_json(s: &str) -> Result<ConstructionInstance> {
    let raw: RawInstance = parse(s)?;
    let kind = ConstructionKind::parse_token(&raw.kind)?;
    let inst = match kind {
        ConstructionKind::Simple => simple_construction(raw.order, raw.epsilon)?,
        ConstructionKind::Advanced => advanced_construction(raw.order, raw.epsilon)?,
    };
    if raw.target_rank != inst.target_rank.dims() {
        return Err(TuckerError::Parse(format!(
            "target_rank {:?} does not match the {} construction of order {}",
            raw.target_rank,
            kind.token(),
            raw.order
        )));
    }
    let stored = DenseTensor::from_flat(&raw.tensor.shape, raw.tensor.data)?;
    if stored != inst.tensor {
        return Err(TuckerError::Parse(
            "stored tensor does not match the construction regenerated from its metadata".into(),
        ));
    }
    Ok(inst)
}

pub fn report_from_json(s: &str) -> Result<RatioReport> {
    let raw: RawReport = parse(s)?;
    Ok(RatioReport {
        algorithm: Algorithm::parse_token(&raw.algorithm)?,
        order: raw.order,
        epsilon: raw.epsilon,
        error_sq: raw.error_sq,
        competitor_error_sq: raw.competitor_error_sq,
        ratio_lower_bound: raw.ratio_lower_bound,
        tail_bound: raw.tail_bound,
    })
}
