//! `tucker`: generate worst-case tensor instances, run Tucker
//! decompositions on tensor files, and emit verification reports.
//!
//! Exit codes: 0 success, 2 invalid parameters or malformed input,
//! 3 I/O failure. All output files are byte-identical across reruns with
//! the same flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tucker_core::json;
use tucker_core::{
    advanced_construction, hooi, hosvd, ratio_report, reconstruction_error_sq,
    simple_construction, st_hosvd, tail_energy_bound, Algorithm, ConstructionInstance,
    ConstructionKind, DenseTensor, HooiConfig, HooiInit, MultilinearRank, TuckerDecomposition,
    TuckerError,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<TuckerError> for CliError {
    fn from(e: TuckerError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Simple,
    Advanced,
}

impl From<KindArg> for ConstructionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Simple => ConstructionKind::Simple,
            KindArg::Advanced => ConstructionKind::Advanced,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgArg {
    Hosvd,
    Sthosvd,
    Hooi,
}

impl From<AlgArg> for Algorithm {
    fn from(a: AlgArg) -> Self {
        match a {
            AlgArg::Hosvd => Algorithm::Hosvd,
            AlgArg::Sthosvd => Algorithm::StHosvd,
            AlgArg::Hooi => Algorithm::Hooi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    Hosvd,
    Sthosvd,
}

impl From<InitArg> for HooiInit {
    fn from(i: InitArg) -> Self {
        match i {
            InitArg::Hosvd => HooiInit::Hosvd,
            InitArg::Sthosvd => HooiInit::StHosvd,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tucker",
    version,
    about = "Tucker decomposition worst-case generator and verifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a worst-case construction instance as JSON
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Tensor order N (simple: N >= 2, advanced: N >= 3)
        #[arg(long)]
        order: usize,
        /// Construction parameter epsilon > 0
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a decomposition on a tensor or instance file
    Decompose {
        #[arg(long, value_enum)]
        alg: AlgArg,
        /// Target multilinear rank R1,...,RN
        #[arg(long, value_delimiter = ',', required = true)]
        rank: Vec<usize>,
        /// Input file: tensor JSON or generated instance JSON
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Mode processing order p1,...,pN (1-based, sthosvd only)
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Initialization (hooi only)
        #[arg(long, value_enum)]
        init: Option<InitArg>,
        /// Outer iteration cap (hooi only)
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        /// Relative convergence threshold on error^2 (hooi only)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Re-derive an instance from its metadata and report the measured
    /// error, competitor error, ratio lower bound, and tail bound
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        alg: AlgArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate ratio reports over a grid of orders and epsilons
    Sweep {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum)]
        alg: AlgArg,
        /// Inclusive order range lo..hi
        #[arg(long)]
        orders: String,
        /// Epsilon values e1,e2,...
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long)]
        csv: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn build_instance(kind: ConstructionKind, order: usize, eps: f64) -> Result<ConstructionInstance, CliError> {
    let inst = match kind {
        ConstructionKind::Simple => simple_construction(order, eps)?,
        ConstructionKind::Advanced => advanced_construction(order, eps)?,
    };
    Ok(inst)
}

/// Accepts either a bare tensor file or a generated instance file.
fn load_tensor(path: &Path) -> Result<DenseTensor, CliError> {
    let text = read_file(path)?;
    match json::tensor_from_json(&text) {
        Ok(t) => Ok(t),
        Err(tensor_err) => match json::instance_from_json(&text) {
            Ok(inst) => Ok(inst.tensor),
            Err(_) => Err(CliError::Invalid(format!(
                "{}: not a tensor or instance file ({tensor_err})",
                path.display()
            ))),
        },
    }
}

fn parse_order_range(spec: &str) -> Result<(usize, usize), CliError> {
    let invalid = || CliError::Invalid(format!("invalid order range {spec:?}, expected lo..hi"));
    let (lo, hi) = spec.split_once("..").ok_or_else(invalid)?;
    let lo: usize = lo.trim().parse().map_err(|_| invalid())?;
    let hi: usize = hi.trim().parse().map_err(|_| invalid())?;
    if lo > hi {
        return Err(invalid());
    }
    Ok((lo, hi))
}

fn cmd_gen(kind: KindArg, order: usize, eps: f64, out: &Path) -> Result<(), CliError> {
    let kind = ConstructionKind::from(kind);
    let inst = build_instance(kind, order, eps)?;
    write_file(out, &format!("{}\n", json::instance_to_json(&inst)))?;
    println!(
        "wrote {} instance: N={order}, eps={eps:.6} -> {}",
        kind.token(),
        out.display()
    );
    Ok(())
}

struct DecomposeOutcome {
    decomposition: TuckerDecomposition,
    iterations: Option<usize>,
}

fn run_decomposition(
    alg: AlgArg,
    tensor: &DenseTensor,
    rank: &MultilinearRank,
    mode_order: Option<&[usize]>,
    init: Option<InitArg>,
    max_iter: Option<usize>,
    tol: Option<f64>,
) -> Result<DecomposeOutcome, CliError> {
    if !matches!(alg, AlgArg::Sthosvd) && mode_order.is_some() {
        return Err(CliError::Invalid(
            "--order applies only to --alg sthosvd".into(),
        ));
    }
    if !matches!(alg, AlgArg::Hooi) && (init.is_some() || max_iter.is_some() || tol.is_some()) {
        return Err(CliError::Invalid(
            "--init, --max-iter, and --tol apply only to --alg hooi".into(),
        ));
    }
    match alg {
        AlgArg::Hosvd => Ok(DecomposeOutcome {
            decomposition: hosvd(tensor, rank)?,
            iterations: None,
        }),
        AlgArg::Sthosvd => {
            let zero_based = match mode_order {
                None => None,
                Some(modes) => {
                    let mut converted = Vec::with_capacity(modes.len());
                    for &p in modes {
                        if p == 0 {
                            return Err(CliError::Invalid(
                                "--order uses 1-based mode numbers".into(),
                            ));
                        }
                        converted.push(p - 1);
                    }
                    Some(converted)
                }
            };
            Ok(DecomposeOutcome {
                decomposition: st_hosvd(tensor, rank, zero_based.as_deref())?,
                iterations: None,
            })
        }
        AlgArg::Hooi => {
            let mut config = HooiConfig::default();
            if let Some(k) = max_iter {
                config.max_iterations = k;
            }
            if let Some(t) = tol {
                config.tolerance = t;
            }
            if let Some(i) = init {
                config.init = i.into();
            }
            let trace = hooi(tensor, rank, &config)?;
            Ok(DecomposeOutcome {
                decomposition: trace.decomposition,
                iterations: Some(trace.iterations_run),
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_decompose(
    alg: AlgArg,
    rank: Vec<usize>,
    tensor_path: &Path,
    out: &Path,
    order: Option<Vec<usize>>,
    init: Option<InitArg>,
    max_iter: Option<usize>,
    tol: Option<f64>,
) -> Result<(), CliError> {
    let tensor = load_tensor(tensor_path)?;
    let rank = MultilinearRank::new(rank)?;
    let outcome = run_decomposition(alg, &tensor, &rank, order.as_deref(), init, max_iter, tol)?;
    let error_sq = reconstruction_error_sq(&tensor, &outcome.decomposition)?;
    let tail_bound = tail_energy_bound(&tensor, &rank)?;

    let mut summary = format!(
        "{{\"error_sq\":{},\"tail_bound\":{}",
        json::fmt_f64(error_sq),
        json::fmt_f64(tail_bound)
    );
    if let Some(iterations) = outcome.iterations {
        summary.push_str(&format!(",\"iterations\":{iterations}"));
    }
    summary.push('}');
    let payload = format!(
        "{{\"decomposition\":{},\"summary\":{summary}}}\n",
        json::decomposition_to_json(&outcome.decomposition)
    );
    write_file(out, &payload)?;

    let mut line = format!(
        "{}: error_sq={error_sq:.6}, tail_bound={tail_bound:.6}",
        Algorithm::from(alg).token()
    );
    if let Some(iterations) = outcome.iterations {
        line.push_str(&format!(", iterations={iterations}"));
    }
    println!("{line} -> {}", out.display());
    Ok(())
}

fn cmd_verify(instance_path: &Path, alg: AlgArg, out: &Path) -> Result<(), CliError> {
    let text = read_file(instance_path)?;
    let inst = json::instance_from_json(&text)?;
    let report = ratio_report(&inst, alg.into())?;
    write_file(out, &format!("{}\n", json::report_to_json(&report)))?;
    println!(
        "{} on {} N={} eps={:.6}: error_sq={:.6}, competitor={:.6}, ratio>={:.6}, tail={:.6}",
        report.algorithm.token(),
        inst.kind.token(),
        report.order,
        report.epsilon,
        report.error_sq,
        report.competitor_error_sq,
        report.ratio_lower_bound,
        report.tail_bound
    );
    Ok(())
}

fn cmd_sweep(
    kind: KindArg,
    alg: AlgArg,
    orders: &str,
    mut eps: Vec<f64>,
    csv: &Path,
) -> Result<(), CliError> {
    let (lo, hi) = parse_order_range(orders)?;
    for &e in &eps {
        if !e.is_finite() || e <= 0.0 {
            return Err(CliError::Invalid(format!(
                "epsilon values must be positive finite reals, got {e}"
            )));
        }
    }
    eps.sort_by(f64::total_cmp);
    let kind = ConstructionKind::from(kind);
    let mut reports = Vec::new();
    for order in lo..=hi {
        for &e in &eps {
            let inst = build_instance(kind, order, e)?;
            reports.push(ratio_report(&inst, alg.into())?);
        }
    }
    write_file(csv, &json::reports_to_csv(&reports))?;
    println!("wrote {} rows -> {}", reports.len(), csv.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen {
            kind,
            order,
            eps,
            out,
        } => cmd_gen(kind, order, eps, &out),
        Command::Decompose {
            alg,
            rank,
            tensor,
            out,
            order,
            init,
            max_iter,
            tol,
        } => cmd_decompose(alg, rank, &tensor, &out, order, init, max_iter, tol),
        Command::Verify {
            instance,
            alg,
            out,
        } => cmd_verify(&instance, alg, &out),
        Command::Sweep {
            kind,
            alg,
            orders,
            eps,
            csv,
        } => cmd_sweep(kind, alg, &orders, eps, &csv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
