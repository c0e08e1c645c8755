//! Command-line front end: single runs, figure data, optimization and
//! oracle cross-checks.
//!
//! Exit codes: 0 success, 1 invalid input, 2 infeasible optimization.

mod config;
mod figures;

use cfcomm::optimizer::{
    baseline_min_total, minimize_total_approx, minimize_total_exact, OptimizationResult,
    OptimizeError, ScanBounds,
};
use cfcomm::oracle::{fock_simulate, monte_carlo_clicks};
use cfcomm::states::PhotonStatistics;
use cfcomm::{analytic, run, ProtocolParams, Scheme, Signal};
use clap::{Args, Parser, Subcommand};
use figures::fmt12;
use serde::Serialize;
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub struct CliError {
    msg: String,
    code: u8,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self {
            msg: msg.into(),
            code: 1,
        }
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Self {
            msg: msg.into(),
            code: 2,
        }
    }

    pub fn from_msg(e: impl std::fmt::Display) -> Self {
        Self::invalid(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "cfcomm",
    about = "Counterfactual communication through chained Mach-Zehnder interferometers: exact runs, figure data, resource optimization",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one configuration and print its outcome probabilities alongside
    /// the analytic comparisons
    Run(RunArgs),
    /// Write figure data (fig1b, fig1c, fig1d, fig1d-table, figD1) as CSV
    Figure(FigureArgs),
    /// Search for the minimum total cycle number T
    Optimize(OptimizeArgs),
    /// Cross-check the engine against the dense Fock-space simulator and a
    /// Monte Carlo click sampler
    Oracle(OracleArgs),
}

#[derive(Args, Default)]
struct SourceArgs {
    /// Coherent source with this mean photon number |α|²
    #[arg(long)]
    coherent: Option<f64>,
    /// Fock source with exactly this many photons
    #[arg(long)]
    fock: Option<u32>,
    /// Arbitrary photon-number weights w0,w1,... (must sum to 1)
    #[arg(long)]
    weights: Option<String>,
}

impl SourceArgs {
    fn fill(&mut self, map: &HashMap<String, String>) -> Result<(), CliError> {
        config::fill(&mut self.coherent, map, "coherent")?;
        config::fill(&mut self.fock, map, "fock")?;
        config::fill(&mut self.weights, map, "weights")
    }

    fn resolve(&self) -> Result<PhotonStatistics, CliError> {
        match (self.coherent, self.fock, &self.weights) {
            (Some(mean), None, None) => {
                PhotonStatistics::coherent(mean).map_err(CliError::from_msg)
            }
            (None, Some(v), None) => Ok(PhotonStatistics::Fock(v)),
            (None, None, Some(list)) => {
                let weights = list
                    .split(',')
                    .map(|w| w.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::invalid(format!("bad --weights entry: {e}")))?;
                PhotonStatistics::arbitrary(weights).map_err(CliError::from_msg)
            }
            _ => Err(CliError::invalid(
                "specify exactly one photon source: --coherent, --fock or --weights",
            )),
        }
    }
}

#[derive(Args, Default)]
struct ProtocolArgs {
    /// slaz | modified
    #[arg(long)]
    scheme: Option<String>,
    /// Outer cycle number M (sets the BS_M reflectivity cos²(π/2M))
    #[arg(long = "M")]
    outer: Option<u32>,
    /// Inner cycle number N
    #[arg(long = "N")]
    inner: Option<u32>,
    /// m_c: inner chain at which the modified scheme reads its detectors
    #[arg(long)]
    mc: Option<u32>,
    /// Bob's signal (0 = channel open, 1 = blocking detector active)
    #[arg(long)]
    s: Option<u8>,
}

impl ProtocolArgs {
    fn fill(&mut self, map: &HashMap<String, String>) -> Result<(), CliError> {
        config::fill(&mut self.scheme, map, "scheme")?;
        config::fill(&mut self.outer, map, "M")?;
        config::fill(&mut self.inner, map, "N")?;
        config::fill(&mut self.mc, map, "mc")?;
        config::fill(&mut self.s, map, "s")
    }

    fn resolve(&self) -> Result<ProtocolParams, CliError> {
        let scheme = self
            .scheme
            .as_deref()
            .ok_or_else(|| CliError::invalid("--scheme is required (slaz | modified)"))?;
        let outer = self
            .outer
            .ok_or_else(|| CliError::invalid("--M is required"))?;
        let inner = self
            .inner
            .ok_or_else(|| CliError::invalid("--N is required"))?;
        let signal = match self
            .s
            .ok_or_else(|| CliError::invalid("--s is required (0 or 1)"))?
        {
            0 => Signal::Zero,
            1 => Signal::One,
            other => {
                return Err(CliError::invalid(format!(
                    "--s must be 0 or 1, got {other}"
                )))
            }
        };
        match scheme {
            "slaz" => {
                if self.mc.is_some() {
                    return Err(CliError::invalid("--mc only applies to --scheme modified"));
                }
                ProtocolParams::slaz(outer, inner, signal).map_err(CliError::from_msg)
            }
            "modified" => {
                let mc = self
                    .mc
                    .ok_or_else(|| CliError::invalid("--mc is required for --scheme modified"))?;
                ProtocolParams::modified(outer, inner, mc, signal).map_err(CliError::from_msg)
            }
            other => Err(CliError::invalid(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Args, Default)]
struct RunArgs {
    /// Flat key = value file supplying any missing flag
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[command(flatten)]
    source: SourceArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1b | fig1c | fig1d | fig1d-table | figD1
    name: String,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $CFCOMM_OUT_DIR or the working directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mean photon number |α|² (default 10 for fig1b/fig1c, 200 otherwise)
    #[arg(long)]
    mean: Option<f64>,
    /// Outer-cycle grid start:end:step for fig1b/fig1c
    #[arg(long)]
    m_grid: Option<String>,
    /// Inner-cycle grid start:end:step for fig1b/fig1c
    #[arg(long)]
    n_grid: Option<String>,
    /// Success-probability grid start:end:step for fig1d/figD1
    #[arg(long)]
    targets: Option<String>,
    /// Delivered-photon budget k̄ for figD1's counterfactuality-only curve
    #[arg(long)]
    kbar: Option<f64>,
    /// Largest m_c the scans may use
    #[arg(long)]
    mc_max: Option<u32>,
    /// Largest M the exact scan may use
    #[arg(long)]
    m_max: Option<u32>,
    /// Largest N the exact scan may use
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Analytic design scan over m_c
    #[arg(long, conflicts_with_all = ["exact", "baseline"])]
    approx: bool,
    /// Integer search driven by the exact engine
    #[arg(long, conflicts_with = "baseline")]
    exact: bool,
    /// Single-photon baseline M′N′
    #[arg(long)]
    baseline: bool,
    /// Success-probability target (both signals)
    #[arg(long)]
    target: Option<f64>,
    /// Coherent mean photon number |α|²
    #[arg(long)]
    coherent: Option<f64>,
    #[arg(long)]
    mc_min: Option<u32>,
    #[arg(long)]
    mc_max: Option<u32>,
    #[arg(long)]
    m_min: Option<u32>,
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[command(flatten)]
    source: SourceArgs,
    /// Fock-space cutoff of the dense simulator
    #[arg(long, default_value_t = 25)]
    cutoff: usize,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() -> ExitCode {
    // die quietly when stdout is a closed pipe (e.g. `cfcomm run ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Run(args) => cmd_run(args),
        Cmd::Figure(args) => cmd_figure(args),
        Cmd::Optimize(args) => cmd_optimize(args),
        Cmd::Oracle(args) => cmd_oracle(args),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<HashMap<String, String>, CliError> {
    match path {
        Some(p) => config::load(p),
        None => Ok(HashMap::new()),
    }
}

fn describe_source(stats: &PhotonStatistics) -> String {
    match stats {
        PhotonStatistics::Fock(v) => format!("fock({v})"),
        PhotonStatistics::Coherent { mean_photons } => format!("coherent(mean = {mean_photons})"),
        PhotonStatistics::Arbitrary { weights } => format!("arbitrary({} weights)", weights.len()),
    }
}

fn cmd_run(mut args: RunArgs) -> Result<(), CliError> {
    let map = load_config(&args.config)?;
    args.protocol.fill(&map)?;
    args.source.fill(&map)?;
    let params = args.protocol.resolve()?;
    let stats = args.source.resolve()?;
    let out = run(&params, &stats);

    let s = params.signal.as_bit();
    println!(
        "scheme {:?}  s = {s}  M = {}  N = {}{}",
        params.scheme,
        params.outer,
        params.inner,
        params
            .cutoff
            .map(|mc| format!("  mc = {mc}"))
            .unwrap_or_default()
    );
    println!("source {}", describe_source(&stats));
    println!("P(only D0 clicks)       {}", fmt12(out.prob_only_d0));
    println!("P(only D1 clicks)       {}", fmt12(out.prob_only_d1));
    println!("P(channel click)        {}", fmt12(out.prob_leak));
    println!("P(other outcome)        {}", fmt12(out.prob_other));
    println!("p_counterfactual        {}", fmt12(out.p_counterfactual()));
    println!("{:<23} {}", format!("f_click(D{s})"), fmt12(out.f_click));
    println!("Ptilde = p*f            {}", fmt12(out.p_tilde()));
    println!(
        "max channel occupancy   {}",
        fmt12(out.max_channel_occupancy)
    );
    println!(
        "final amplitudes        ({}, {})",
        fmt12(out.final_amplitudes.beta0),
        fmt12(out.final_amplitudes.beta1)
    );

    match params.scheme {
        Scheme::Slaz => {
            let a = analytic::approx_probs_slaz(params.outer, params.inner, &stats);
            println!(
                "analytic photon sums    P0 {}  P1 {}",
                fmt12(a.sum_p0),
                fmt12(a.sum_p1)
            );
            println!(
                "analytic linearized     P0 {}  P1 {}",
                fmt12(a.linear_p0),
                fmt12(a.linear_p1)
            );
            if let PhotonStatistics::Coherent { mean_photons } = stats {
                let (p0, p1) =
                    analytic::slaz_coherent_exact(params.outer, params.inner, mean_photons);
                println!("analytic coherent exact P0 {}  P1 {}", fmt12(p0), fmt12(p1));
            }
            println!(
                "validity                M/scale = {:.2}, N/(M scale) = {:.2}  [{}]",
                a.validity.outer_ratio,
                a.validity.inner_ratio,
                if a.validity.is_met(analytic::MUCH_GREATER_DEFAULT) {
                    "ok"
                } else {
                    "out of regime"
                }
            );
        }
        Scheme::Modified => {
            if let PhotonStatistics::Coherent { mean_photons } = stats {
                let mc = params.cutoff.expect("modified params carry a cutoff");
                let p = analytic::modified_probs(
                    mean_photons,
                    f64::from(params.outer),
                    f64::from(params.inner),
                    mc,
                );
                println!(
                    "analytic Ptilde         P~0 {}  P~1 {}",
                    fmt12(p.p_tilde0),
                    fmt12(p.p_tilde1)
                );
                println!(
                    "analytic constituents   p0 {}  f0 {}  p1 {}  f1 {}  kbar {}",
                    fmt12(p.p0),
                    fmt12(p.f0),
                    fmt12(p.p1),
                    fmt12(p.f1),
                    fmt12(p.k_bar)
                );
                let (occ0, occ1) = analytic::modified_occupancy_maxima(
                    mean_photons,
                    f64::from(params.outer),
                    f64::from(params.inner),
                    mc,
                );
                println!(
                    "analytic occupancy max  s=0 {}  s=1 {}",
                    fmt12(occ0),
                    fmt12(occ1)
                );
                println!(
                    "validity                mean/kbar = {:.2}, N/mc^2 = {:.2}  [{}]",
                    p.validity.mean_ratio,
                    p.validity.zeno_ratio,
                    if p.validity.is_met(analytic::MUCH_GREATER_DEFAULT) {
                        "ok"
                    } else {
                        "out of regime"
                    }
                );
            }
        }
    }
    Ok(())
}

fn cmd_figure(mut args: FigureArgs) -> Result<(), CliError> {
    let map = load_config(&args.config)?;
    config::fill(&mut args.out, &map, "out")?;
    config::fill(&mut args.mean, &map, "mean")?;
    config::fill(&mut args.m_grid, &map, "m-grid")?;
    config::fill(&mut args.n_grid, &map, "n-grid")?;
    config::fill(&mut args.targets, &map, "targets")?;
    config::fill(&mut args.kbar, &map, "kbar")?;
    config::fill(&mut args.mc_max, &map, "mc-max")?;
    config::fill(&mut args.m_max, &map, "m-max")?;
    config::fill(&mut args.n_max, &map, "n-max")?;

    let out_dir = args
        .out
        .clone()
        .or_else(|| std::env::var_os("CFCOMM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let path = out_dir.join(format!("{}.csv", args.name));

    let bounds = ScanBounds {
        cutoff_min: 1,
        cutoff_max: args.mc_max.unwrap_or(200),
        outer_max: args.m_max.unwrap_or(5000),
        inner_max: args.n_max.unwrap_or(100_000),
        ..ScanBounds::default()
    };

    match args.name.as_str() {
        "fig1b" | "fig1c" => {
            let mean = args.mean.unwrap_or(10.0);
            let m_grid = figures::parse_int_grid(args.m_grid.as_deref().unwrap_or("50:500:50"))?;
            let n_grid =
                figures::parse_int_grid(args.n_grid.as_deref().unwrap_or("5000:50000:5000"))?;
            let signal = if args.name == "fig1b" {
                Signal::Zero
            } else {
                Signal::One
            };
            let rows = figures::success_grid_rows(mean, &m_grid, &n_grid, signal)?;
            figures::write_csv(&path, "M,N,P", &rows)?;
        }
        "fig1d" => {
            let mean = args.mean.unwrap_or(200.0);
            let targets =
                figures::parse_float_grid(args.targets.as_deref().unwrap_or("0.50:0.95:0.05"))?;
            let rows = figures::min_cycles_rows(mean, &targets, &bounds)?;
            figures::write_csv(&path, "Ptilde,log10T_approx,log10T_exact", &rows)?;
        }
        "fig1d-table" => {
            let mean = args.mean.unwrap_or(200.0);
            let targets =
                figures::parse_float_grid(args.targets.as_deref().unwrap_or("0.50:0.95:0.05"))?;
            let rows = figures::min_cycles_table_rows(mean, &targets, &bounds)?;
            figures::write_csv(&path, "Ptilde,M,N,mc,T", &rows)?;
        }
        "figD1" => {
            let mean = args.mean.unwrap_or(200.0);
            let k_bar = args.kbar.unwrap_or(2.0);
            let targets =
                figures::parse_float_grid(args.targets.as_deref().unwrap_or("0.50:0.95:0.05"))?;
            let rows = figures::baseline_comparison_rows(mean, k_bar, &targets, bounds.cutoff_max)?;
            figures::write_csv(&path, "Pprime,log10T_baseline,log10T_D34,log10T_eq8", &rows)?;
        }
        other => {
            return Err(CliError::invalid(format!(
                "unknown figure `{other}` (expected fig1b, fig1c, fig1d, fig1d-table or figD1)"
            )))
        }
    }
    println!("{}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct OptimizeReport {
    #[serde(flatten)]
    result: OptimizationResult,
    #[serde(rename = "engineP0", skip_serializing_if = "Option::is_none")]
    engine_p0: Option<f64>,
    #[serde(rename = "engineP1", skip_serializing_if = "Option::is_none")]
    engine_p1: Option<f64>,
}

fn cmd_optimize(mut args: OptimizeArgs) -> Result<(), CliError> {
    let map = load_config(&args.config)?;
    config::fill(&mut args.target, &map, "target")?;
    config::fill(&mut args.coherent, &map, "coherent")?;
    config::fill(&mut args.mc_min, &map, "mc-min")?;
    config::fill(&mut args.mc_max, &map, "mc-max")?;
    config::fill(&mut args.m_min, &map, "m-min")?;
    config::fill(&mut args.m_max, &map, "m-max")?;
    config::fill(&mut args.n_min, &map, "n-min")?;
    config::fill(&mut args.n_max, &map, "n-max")?;

    let target = args
        .target
        .ok_or_else(|| CliError::invalid("--target is required"))?;
    let modes = [args.approx, args.exact, args.baseline];
    if modes.iter().filter(|m| **m).count() != 1 {
        return Err(CliError::invalid(
            "pick exactly one of --approx, --exact, --baseline",
        ));
    }

    let opt_err = |e: OptimizeError| match e {
        OptimizeError::Infeasible { .. } => CliError::infeasible(e.to_string()),
        other => CliError::invalid(other.to_string()),
    };

    let result = if args.baseline {
        baseline_min_total(
            target,
            args.m_max.unwrap_or(1_000_000),
            args.n_max.unwrap_or(1_000_000_000),
        )
        .map_err(opt_err)?
    } else {
        let mean = args
            .coherent
            .ok_or_else(|| CliError::invalid("--coherent is required for this mode"))?;
        if args.approx {
            minimize_total_approx(target, target, mean, args.mc_max.unwrap_or(200))
                .map_err(opt_err)?
        } else {
            let defaults = ScanBounds::default();
            let bounds = ScanBounds {
                cutoff_min: args.mc_min.unwrap_or(defaults.cutoff_min),
                cutoff_max: args.mc_max.unwrap_or(defaults.cutoff_max),
                outer_min: args.m_min.unwrap_or(defaults.outer_min),
                outer_max: args.m_max.unwrap_or(defaults.outer_max),
                inner_min: args.n_min.unwrap_or(defaults.inner_min),
                inner_max: args.n_max.unwrap_or(defaults.inner_max),
            };
            minimize_total_exact(target, mean, &bounds).map_err(opt_err)?
        }
    };

    // Close the loop: anything with a modified-scheme configuration gets
    // re-evaluated by the exact engine before it is emitted.
    let (engine_p0, engine_p1) = match (result.cutoff, args.coherent) {
        (Some(mc), Some(mean)) => {
            let stats = PhotonStatistics::coherent(mean).map_err(CliError::from_msg)?;
            let p0 = run(
                &ProtocolParams::modified(result.outer, result.inner, mc, Signal::Zero)
                    .map_err(CliError::from_msg)?,
                &stats,
            );
            let p1 = run(
                &ProtocolParams::modified(result.outer, result.inner, mc, Signal::One)
                    .map_err(CliError::from_msg)?,
                &stats,
            );
            (Some(p0.p_tilde()), Some(p1.p_tilde()))
        }
        _ => (None, None),
    };

    let report = OptimizeReport {
        result,
        engine_p0,
        engine_p1,
    };
    let json = serde_json::to_string(&report)
        .map_err(|e| CliError::invalid(format!("serialization failed: {e}")))?;
    println!("{json}");
    Ok(())
}

fn cmd_oracle(mut args: OracleArgs) -> Result<(), CliError> {
    let map = load_config(&args.config)?;
    args.protocol.fill(&map)?;
    args.source.fill(&map)?;
    let params = args.protocol.resolve()?;
    let stats = args.source.resolve()?;

    let engine = run(&params, &stats);
    let dense = fock_simulate(&params, &stats, args.cutoff).map_err(CliError::from_msg)?;
    println!(
        "dense Fock simulator (cutoff {}, truncated source mass {})",
        args.cutoff,
        fmt12(dense.truncation_error)
    );
    println!("quantity            engine            dense             |diff|");
    for (name, e, d) in [
        (
            "P(only D0)",
            engine.prob_only_d0,
            dense.outcome.prob_only_d0,
        ),
        (
            "P(only D1)",
            engine.prob_only_d1,
            dense.outcome.prob_only_d1,
        ),
        (
            "P(channel click)",
            engine.prob_leak,
            dense.outcome.prob_leak,
        ),
        (
            "p_counterfactual",
            engine.p_counterfactual(),
            dense.outcome.p_counterfactual(),
        ),
        ("f_click", engine.f_click, dense.outcome.f_click),
        (
            "max occupancy",
            engine.max_channel_occupancy,
            dense.outcome.max_channel_occupancy,
        ),
    ] {
        println!(
            "{name:<19} {:<17} {:<17} {}",
            fmt12(e),
            fmt12(d),
            fmt12((e - d).abs())
        );
    }

    let tally = monte_carlo_clicks(&params, &stats, args.shots, args.seed);
    println!("\nmonte carlo: {} shots, seed {}", args.shots, args.seed);
    println!("outcome        frequency         engine            |diff|/3sigma");
    let probs = [
        ("only D0", engine.prob_only_d0),
        ("only D1", engine.prob_only_d1),
        ("channel leak", engine.prob_leak),
        ("other", engine.prob_other),
    ];
    let mut all_within = true;
    for ((name, p), freq) in probs.iter().zip(tally.frequencies()) {
        let sigma = (p * (1.0 - p) / args.shots as f64).sqrt();
        let pull = if sigma > 0.0 {
            (freq - p).abs() / (3.0 * sigma)
        } else {
            0.0
        };
        if pull > 1.0 {
            all_within = false;
        }
        println!(
            "{name:<14} {:<17} {:<17} {:.3}",
            fmt12(freq),
            fmt12(*p),
            pull
        );
    }
    println!(
        "{}",
        if all_within {
            "all outcomes within 3 sigma"
        } else {
            "outcome(s) outside 3 sigma"
        }
    );
    Ok(())
}
