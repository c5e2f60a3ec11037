//! `hardy`: command-line front end for hardy-core.
//!
//! Exit codes: `factor` returns 0 on success, 1 on I/O or parse errors and
//! 2 when the factorization fails or hits a singularity. Every other command
//! returns 0 on success, 1 on errors or failed checks and 2 on usage errors.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hardy_core::blaschke::BasisIndex;
use hardy_core::decomp::{decompose_blaschke, decompose_zn};
use hardy_core::experiment::{component_norms, maximal_k};
use hardy_core::factor::{b_inner_matrix_from, inner_outer, is_b_inner, n_inner_outer_factorize, FactorMethod, NFactorOptions, SV_THRESHOLD, TOL_B_INNER, TOL_FACTOR};
use hardy_core::invariance::{build_constrained, invariance_defect, span_invariant, verify_constrained, wandering_basis_with, ConstrainedSpec, PivotOrder, SubspaceBasis};
use hardy_core::io::{parse_json, FunctionFile};
use hardy_core::norms::check_gauge_axioms;
use hardy_core::verify::{constrained_truncation, run_suite, suite_ids, SuiteConfig};
use hardy_core::{BlaschkeSpec, CircleFunction, GaugeNormSpec, HardyError};

use config::RunConfig;
use output::Sink;

#[derive(Parser)]
#[command(name = "hardy", version, about = "Numerical toolkit for Hardy spaces on the unit circle")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub struct GlobalArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Grid size (power of two).
    #[arg(long = "nsamples", env = "HARDY_NSAMPLES", global = true)]
    n_samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,
    /// Threshold override, `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_parser = config::parse_tol)]
    tol: Vec<(String, f64)>,
}

#[derive(Subcommand)]
enum Command {
    /// Gauge-norm audits.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Finite Blaschke products.
    #[command(subcommand)]
    Blaschke(BlaschkeCmd),
    /// Split a function along z^n or a Blaschke product.
    Decompose(DecomposeArgs),
    /// Inner–outer and n-inner–outer factorizations.
    #[command(subcommand)]
    Factor(FactorCmd),
    /// Invariant subspaces of multiplication operators.
    #[command(subcommand)]
    Invariance(InvarianceCmd),
    /// Run a verification suite.
    Verify {
        /// Suite id; `hardy verify --list` prints the registry.
        id: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        list: bool,
    },
    /// Exploratory runs; they report, never assert.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum NormCmd {
    /// Randomized audit of the gauge-norm axioms.
    Audit {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum BlaschkeCmd {
    /// The family e_jm for j < n, m ≤ mmax.
    Basis {
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long, default_value_t = 6)]
        mmax: usize,
        /// Also report the Gram deviation; fails above 1e-8.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Zn,
    Blaschke,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long = "fn")]
    function: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, required_if_eq("mode", "zn"))]
    n: Option<usize>,
    #[arg(long, required_if_eq("mode", "blaschke"))]
    zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    mmax: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Wandering,
}

#[derive(Subcommand)]
enum FactorCmd {
    /// Classical inner–outer factorization.
    Classic {
        #[arg(long = "fn")]
        function: PathBuf,
        /// Replace |f| by |f| + 1e-12 instead of aborting at grid zeros.
        #[arg(long)]
        regularize: bool,
        /// CSV of θ, |I|, log|O| over the grid.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
    /// f = J_1 f_1 + ⋯ + J_r f_r with J z^n-inner and f_i n-outer.
    Ninner {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value_t = SV_THRESHOLD)]
        sv_threshold: f64,
        #[arg(long, value_enum, default_value = "spectral")]
        method: MethodArg,
        /// CSV of θ and |J_i| for each inner factor.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
    /// B-inner test for one function, B-inner matrix for several.
    CheckBinner {
        #[arg(long = "fn", required = true)]
        functions: Vec<PathBuf>,
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long, default_value_t = 8)]
        mmax: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    Svd,
    Forward,
    Reverse,
}

#[derive(Subcommand)]
enum InvarianceCmd {
    /// Orthonormal basis of span{T^k g : k ≤ kmax} truncated to bandwidth D.
    Span {
        /// JSON array of function files.
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        multiplier: PathBuf,
        #[arg(long, default_value_t = 16)]
        kmax: usize,
        #[arg(long)]
        bandwidth: usize,
    },
    /// Invariance defect of a subspace under a multiplier.
    Defect {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        multiplier: PathBuf,
    },
    /// Orthonormal basis of the wandering subspace M ⊖ TM.
    Wandering {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        multiplier: PathBuf,
        #[arg(long, value_enum, default_value = "svd")]
        pivot: PivotArg,
    },
    /// Build and check ⟨φ⟩ ⊕ B²[J H²(B)].
    Constrained {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        bandwidth: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Component norms α(z^i h_i)/α(f) under a gauge norm.
    ComponentNorms {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Which k ≤ 2r admit the constrained construction.
    MaximalK {
        #[arg(long)]
        r: usize,
    },
}

/// A failed command, with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn fail(code: u8, error: impl Into<anyhow::Error>) -> Failure {
    Failure { code, error: error.into() }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = RunConfig::resolve(&cli.global).map_err(Failure::from).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            if let Some(HardyError::Factorization(diag)) = f.error.downcast_ref::<HardyError>() {
                if let Ok(text) = hardy_core::io::to_json_string(diag) {
                    eprint!("{text}");
                }
            }
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(parse_json(&read(path)?, &path.display().to_string())?)
}

fn load_function(path: &Path, cfg: &RunConfig) -> Result<CircleFunction> {
    let file: FunctionFile = load(path)?;
    Ok(file.to_function(cfg.n_samples)?)
}

fn emit<T: Serialize>(value: &T, cfg: &RunConfig) -> Result<()> {
    Sink::new(cfg.output_path.as_deref()).write(&hardy_core::io::to_json_string(value)?)
}

fn run(command: Command, cfg: &RunConfig) -> Outcome {
    match command {
        Command::Norm(NormCmd::Audit { spec, trials }) => {
            let spec: GaugeNormSpec = load(&spec)?;
            let report = check_gauge_axioms(&spec, trials, cfg.seed, cfg.grid())?;
            emit(&report, cfg)?;
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Blaschke(BlaschkeCmd::Basis { zeros, mmax, check }) => blaschke_basis(&zeros, mmax, check, cfg),
        Command::Decompose(args) => {
            let f = load_function(&args.function, cfg)?;
            let result = match args.mode {
                Mode::Zn => decompose_zn(&f, args.n.expect("required by clap"))?,
                Mode::Blaschke => {
                    let spec: BlaschkeSpec = load(args.zeros.as_deref().expect("required by clap"))?;
                    decompose_blaschke(&f, &spec, args.mmax)?
                }
            };
            emit(&result, cfg)?;
            Ok(0)
        }
        Command::Factor(cmd) => factor(cmd, cfg),
        Command::Invariance(cmd) => invariance(cmd, cfg),
        Command::Verify { id, n, list } => verify(id, n, list, cfg),
        Command::Experiment(ExperimentCmd::ComponentNorms { spec, n, trials }) => {
            let spec: GaugeNormSpec = load(&spec)?;
            emit(&component_norms(&spec, n, trials, cfg.seed, cfg.grid())?, cfg)?;
            Ok(0)
        }
        Command::Experiment(ExperimentCmd::MaximalK { r }) => {
            emit(&maximal_k(r, cfg.seed, cfg.grid())?, cfg)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct BasisElement {
    j: usize,
    m: usize,
    function: CircleFunction,
}

#[derive(Serialize)]
struct BasisOutput {
    blaschke: BlaschkeSpec,
    m_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    gram_deviation: Option<f64>,
    basis: Vec<BasisElement>,
}

fn blaschke_basis(zeros: &Path, m_max: usize, check: bool, cfg: &RunConfig) -> Outcome {
    let spec: BlaschkeSpec = load(zeros)?;
    let n_samples = cfg.grid();
    let mut basis = Vec::new();
    for m in 0..=m_max {
        for j in 0..spec.degree() {
            basis.push(BasisElement { j, m, function: spec.basis_element(BasisIndex { j, m }, n_samples)? });
        }
    }
    let gram_deviation = if check { Some(spec.check_basis_orthonormality(m_max, n_samples)?) } else { None };
    let pass = gram_deviation.is_none_or(|d| d <= cfg.tol("gram deviation", 1e-8));
    emit(&BasisOutput { blaschke: spec, m_max, gram_deviation, basis }, cfg)?;
    Ok(if pass { 0 } else { 1 })
}

/// Numerical failures of a factorization exit with 2, everything else with 1.
fn numerical(e: HardyError) -> Failure {
    let code = match e {
        HardyError::Singularity { .. } | HardyError::Factorization(_) | HardyError::Truncation { .. } | HardyError::Rank(_) | HardyError::Domain(_) => 2,
        _ => 1,
    };
    fail(code, e)
}

fn factor(cmd: FactorCmd, cfg: &RunConfig) -> Outcome {
    match cmd {
        FactorCmd::Classic { function, regularize, emit_plot_data } => {
            let f = load_function(&function, cfg)?;
            let pair = inner_outer(&f, regularize).map_err(numerical)?;
            if let Some(path) = emit_plot_data.or_else(|| cfg.plot_path()) {
                let rows = (0..f.n_samples()).map(|k| {
                    vec![pair.inner.samples()[k].norm(), pair.outer.samples()[k].norm().ln()]
                });
                output::write_csv(&path, &["theta", "abs_inner", "log_abs_outer"], f.n_samples(), rows)?;
            }
            emit(&pair, cfg)?;
            let tol = cfg.tol("residual", TOL_FACTOR);
            if pair.residual > tol {
                return Err(fail(2, anyhow::anyhow!("residual {:.3e} exceeds {tol:.3e}", pair.residual)));
            }
            Ok(0)
        }
        FactorCmd::Ninner { function, n, kmax, sv_threshold, method, emit_plot_data } => {
            let f = load_function(&function, cfg)?;
            let opts = NFactorOptions {
                k_max: kmax,
                sv_threshold,
                method: match method {
                    MethodArg::Spectral => FactorMethod::Spectral,
                    MethodArg::Wandering => FactorMethod::Wandering,
                },
            };
            let bundle = n_inner_outer_factorize(&f, n, &opts).map_err(numerical)?;
            if let Some(path) = emit_plot_data.or_else(|| cfg.plot_path()) {
                let grid = bundle.inners.first().map_or(f.n_samples(), |j| j.n_samples());
                let header: Vec<String> = std::iter::once("theta".to_string())
                    .chain((1..=bundle.r).map(|i| format!("abs_inner_{i}")))
                    .collect();
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                let rows = (0..grid).map(|k| bundle.inners.iter().map(|j| j.samples()[k].norm()).collect());
                output::write_csv(&path, &header, grid, rows)?;
            }
            emit(&bundle, cfg)?;
            Ok(0)
        }
        FactorCmd::CheckBinner { functions, zeros, mmax } => {
            let spec: BlaschkeSpec = load(&zeros)?;
            let phis = functions.iter().map(|p| load_function(p, cfg)).collect::<Result<Vec<_>>>()?;
            if let [phi] = phis.as_slice() {
                emit(&is_b_inner(phi, &spec, mmax).map_err(numerical)?, cfg)?;
            } else {
                let tol = cfg.tol("b-inner", TOL_B_INNER);
                emit(&b_inner_matrix_from(&phis, &spec, mmax, tol).map_err(numerical)?, cfg)?;
            }
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct DefectOutput {
    dim: usize,
    defect: f64,
}

#[derive(Serialize)]
struct WanderingOutput {
    dim: usize,
    vectors: Vec<CircleFunction>,
}

#[derive(Serialize)]
struct ConstrainedOutput {
    report: hardy_core::invariance::ConstrainedReport,
    space: SubspaceBasis,
}

fn invariance(cmd: InvarianceCmd, cfg: &RunConfig) -> Outcome {
    match cmd {
        InvarianceCmd::Span { gens, multiplier, kmax, bandwidth } => {
            let files: Vec<FunctionFile> = load(&gens)?;
            let gens = files.iter().map(|f| f.to_function(cfg.n_samples)).collect::<hardy_core::Result<Vec<_>>>()?;
            let t = load_function(&multiplier, cfg)?;
            emit(&span_invariant(&gens, &t, kmax, bandwidth)?, cfg)?;
            Ok(0)
        }
        InvarianceCmd::Defect { space, multiplier } => {
            let space: SubspaceBasis = load(&space)?;
            let t = load_function(&multiplier, cfg)?;
            let defect = invariance_defect(&space, &t)?;
            emit(&DefectOutput { dim: space.dim(), defect }, cfg)?;
            Ok(0)
        }
        InvarianceCmd::Wandering { space, multiplier, pivot } => {
            let space: SubspaceBasis = load(&space)?;
            let t = load_function(&multiplier, cfg)?;
            let order = match pivot {
                PivotArg::Svd => PivotOrder::Svd,
                PivotArg::Forward => PivotOrder::Forward,
                PivotArg::Reverse => PivotOrder::Reverse,
            };
            let vectors = wandering_basis_with(&space, &t, order)?;
            emit(&WanderingOutput { dim: vectors.len(), vectors }, cfg)?;
            Ok(0)
        }
        InvarianceCmd::Constrained { spec, bandwidth, kmax } => {
            let spec: ConstrainedSpec = load(&spec)?;
            spec.validate()?;
            let n_samples = spec.inners[0].n_samples();
            let (d0, k0) = constrained_truncation(spec.blaschke.degree(), n_samples);
            let space = build_constrained(&spec, bandwidth.unwrap_or(d0), kmax.unwrap_or(k0))?;
            let report = verify_constrained(&space, &spec)?;
            let pass = report.pass;
            emit(&ConstrainedOutput { report, space }, cfg)?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn verify(id: Option<String>, n: Option<usize>, list: bool, cfg: &RunConfig) -> Outcome {
    if list {
        for (id, what) in hardy_core::verify::REGISTRY {
            println!("{id:<24} {what}");
        }
        return Ok(0);
    }
    let Some(id) = id else {
        return Err(fail(2, anyhow::anyhow!("missing suite id; known suites: {}", suite_ids().join(", "))));
    };
    let suite_cfg = SuiteConfig {
        n_samples: cfg.grid(),
        seed: cfg.seed,
        n,
        tol: cfg.tol.clone(),
    };
    let report = run_suite(&id, &suite_cfg).map_err(|e| match e {
        HardyError::Parameter(_) => fail(2, e),
        other => fail(1, other),
    })?;
    emit(&report, cfg)?;
    eprintln!("{}: {} in {:.3}s", report.suite, if report.pass { "pass" } else { "FAIL" }, report.wall_time.as_secs_f64());
    Ok(if report.pass { 0 } else { 1 })
}
