use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use shor_noise::experiment::config::{layered, ConfigFile};
use shor_noise::experiment::output::{emit_threshold, render_csv, render_threshold_csv};
use shor_noise::experiment::threshold::DEFAULT_TARGET;
use shor_noise::experiment::{
    emit_dataset, emit_svg, parse_grid, run_figure, threshold_sweep, FigureSpec, OutputFormat,
    SvgOptions, TOOL_VERSION,
};
use shor_noise::shor::{
    run_trials, RecoveryPolicy, ShorInstance, SuccessEstimate, DEFAULT_BOOST_CAP,
};
use shor_noise::{selftest, Error, ErrorMode, ErrorModel};

const EXIT_INVALID: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "shor-noise",
    version,
    about = "Shor order finding under imperfect gates"
)]
struct Cli {
    /// Flat key-value config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output distributions of figures 1-4 (q = 128, r = 4 by default).
    Figure(FigureArgs),
    /// Monte Carlo success rate of full noisy order-finding runs.
    Shor(ShorArgs),
    /// Success rate over a grid of error magnitudes and the resulting threshold.
    Threshold(ThresholdArgs),
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number (1, 2, 3 or 4).
    id: u32,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Realizations averaged per random subfigure.
    #[arg(long)]
    trials: Option<u64>,
    /// Output file; `.json` selects JSON unless --format says otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Also write an SVG chart next to --out.
    #[arg(long)]
    svg: bool,
    /// Simulate the gate-level circuit instead of the per-term error model.
    #[arg(long)]
    gate_level: bool,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    delta0: Option<f64>,
    #[arg(long)]
    smax: Option<f64>,
    #[arg(long)]
    sigma0: Option<f64>,
}

#[derive(Args)]
struct ShorArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    y: Option<u64>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also try small multiples of the convergent denominator.
    #[arg(long)]
    boost: bool,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    y: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    /// `a:b:steps` or a comma-separated list of magnitudes.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    boost: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::LuckyFactor { .. } | Error::Degenerate(_) => EXIT_DEGENERATE,
        Error::Domain(_) | Error::Resource(_) | Error::Parse { .. } => EXIT_INVALID,
    }
}

fn output_format(explicit: Option<String>, path: Option<&Path>) -> Result<OutputFormat, Error> {
    match (explicit, path) {
        (Some(f), _) => f.parse(),
        (None, Some(p)) => Ok(OutputFormat::from_path(p)),
        (None, None) => Ok(OutputFormat::Csv),
    }
}

fn policy(boost: bool) -> RecoveryPolicy {
    if boost {
        RecoveryPolicy::Boosted {
            cap: DEFAULT_BOOST_CAP,
        }
    } else {
        RecoveryPolicy::Convergent
    }
}

fn figure(args: FigureArgs, cfg: &ConfigFile) -> Result<(), Error> {
    let mut spec = FigureSpec::standard(args.id)?;
    spec.q = layered(args.q, cfg.q, spec.q);
    spec.r = layered(args.r, cfg.r, spec.r);
    spec.l = layered(args.l, cfg.l, spec.l);
    spec.seed = layered(args.seed, cfg.seed, 0);
    let trials = layered(args.trials, cfg.trials, 1);
    spec.trials =
        u32::try_from(trials).map_err(|_| Error::Domain(format!("too many trials: {trials}")))?;
    spec.gate_level = args.gate_level || cfg.gate_level.unwrap_or(false);
    let svg = args.svg || cfg.svg.unwrap_or(false);
    let out = args.out.or(cfg.out.clone());
    let format = output_format(args.format.or(cfg.format.clone()), out.as_deref())?;

    let dataset = run_figure(&spec)?;
    match &out {
        Some(path) => emit_dataset(&dataset, format, path)?,
        None => match format {
            OutputFormat::Csv => print!("{}", render_csv(&dataset)),
            OutputFormat::Json => {
                print!("{}", shor_noise::experiment::output::render_json(&dataset))
            }
        },
    }
    if svg {
        let Some(path) = &out else {
            return Err(Error::Domain("--svg needs --out to place the chart".into()));
        };
        let opts = SvgOptions {
            title: Some(format!(
                "Figure {} (q = {}, r = {})",
                spec.figure, spec.q, spec.r
            )),
            ..SvgOptions::default()
        };
        emit_svg(&dataset, &path.with_extension("svg"), &opts)?;
    }
    Ok(())
}

fn error_model(args: &ModelArgs, cfg: &ConfigFile, seed: u64) -> Result<ErrorModel, Error> {
    let mode: ErrorMode = args
        .mode
        .clone()
        .or(cfg.mode.clone())
        .unwrap_or_else(|| "none".into())
        .parse()?;
    ErrorModel::new(
        mode,
        layered(args.delta0, cfg.delta0, 0.0),
        layered(args.smax, cfg.smax, 0.0),
        layered(args.sigma0, cfg.sigma0, 0.0),
        seed,
    )
}

#[derive(Serialize)]
struct ShorSummary<'a> {
    tool_version: &'a str,
    seed: u64,
    instance: &'a ShorInstance,
    model: &'a ErrorModel,
    policy: RecoveryPolicy,
    estimate: SuccessEstimate,
    /// Measured `c` → count, sorted by `c`.
    c_histogram: Vec<(usize, u64)>,
}

fn shor(args: ShorArgs, cfg: &ConfigFile) -> Result<(), Error> {
    let n = layered(args.n, cfg.n, 15);
    let y = layered(args.y, cfg.y, 7);
    let seed = layered(args.seed, cfg.seed, 0);
    let trials = layered(args.trials, cfg.trials, 1000);
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let model = error_model(&args.model, cfg, seed)?;
    let policy = policy(args.boost || cfg.boost.unwrap_or(false));
    let instance = ShorInstance::new(n, y)?;
    let results = run_trials(&instance, &model, policy, trials, seed)?;
    let successes = results.iter().filter(|t| t.success).count() as u64;
    let estimate = SuccessEstimate::from_counts(successes, trials);
    let mut hist = std::collections::BTreeMap::new();
    for t in &results {
        *hist.entry(t.measured_c).or_insert(0u64) += 1;
    }
    let summary = ShorSummary {
        tool_version: TOOL_VERSION,
        seed,
        instance: &instance,
        model: &model,
        policy,
        estimate,
        c_histogram: hist.into_iter().collect(),
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    match args.out.or(cfg.out.clone()) {
        Some(path) => std::fs::write(&path, text).map_err(|e| Error::Io { path, source: e })?,
        None => print!("{text}"),
    }
    eprintln!(
        "N = {n}, y = {y}, r = {}: success {:.4} (95% CI {:.4}..{:.4}) over {trials} trials",
        instance.order, estimate.p, estimate.ci_low, estimate.ci_high
    );
    Ok(())
}

fn threshold(args: ThresholdArgs, cfg: &ConfigFile) -> Result<(), Error> {
    let n = layered(args.n, cfg.n, 15);
    let y = layered(args.y, cfg.y, 7);
    let seed = layered(args.seed, cfg.seed, 0);
    let trials = layered(args.trials, cfg.trials, 1000);
    let target = layered(args.target, cfg.target, DEFAULT_TARGET);
    let mode: ErrorMode = args
        .mode
        .or(cfg.mode.clone())
        .unwrap_or_else(|| "em1".into())
        .parse()?;
    let grid = parse_grid(
        &args
            .grid
            .or(cfg.grid.clone())
            .unwrap_or_else(|| "0.001,0.002,0.005,0.01,0.02,0.05,0.1".into()),
    )?;
    let policy = policy(args.boost || cfg.boost.unwrap_or(false));
    let instance = ShorInstance::new(n, y)?;
    let report = threshold_sweep(&instance, mode, &grid, trials, target, seed, policy)?;
    let out = args.out.or(cfg.out.clone());
    match &out {
        Some(path) => {
            let format = output_format(args.format.or(cfg.format.clone()), Some(path))?;
            emit_threshold(&report, format, path)?;
        }
        None => print!("{}", render_threshold_csv(&report)),
    }
    match report.threshold {
        Some(t) => eprintln!("{mode} threshold for N = {n} (target {target}): {t}"),
        None => eprintln!("{mode}: no grid magnitude reaches the target {target}"),
    }
    Ok(())
}

fn run_selftest() -> ExitCode {
    let outcomes = selftest::run();
    let mut all = true;
    for o in &outcomes {
        all &= o.passed;
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if o.detail.is_empty() {
            println!("{tag}  {}", o.name);
        } else {
            println!("{tag}  {}  ({})", o.name, o.detail);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(exit_code(&e));
            }
        },
        None => ConfigFile::default(),
    };
    let result = match cli.command {
        Command::Figure(args) => figure(args, &cfg),
        Command::Shor(args) => shor(args, &cfg),
        Command::Threshold(args) => threshold(args, &cfg),
        Command::Selftest => return run_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Error::LuckyFactor { factor, n, .. } = &e {
                println!("lucky factor: {factor} divides {n}");
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
