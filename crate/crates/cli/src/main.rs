use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use safebai::config::{ExperimentConfig, Instance, InstanceFile};
use safebai::harness::{fmt_sig, run_trials, write_regret_csv, write_summary_csv, TrialConfig};
use safebai::theory::{linear_report, monotonic_report, TheoryReport};

#[derive(Parser)]
#[command(name = "safebai", version, about = "Safe best-arm identification simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write summary.csv and regret.csv.
    Run(RunArgs),
    /// Evaluate the closed-form complexity quantities for an instance.
    Theory(TheoryArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Use the experimental sample-size schedule for the monotonic algorithm.
    #[arg(long)]
    simplified_n: bool,
}

#[derive(Args)]
struct TheoryArgs {
    /// Experiment config or instance file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the JSON reports.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    delta: Option<f64>,
    /// Evaluate a single dimension instead of the config's sweep.
    #[arg(long)]
    d: Option<usize>,
    /// Lipschitz constant of the safety curves, enabling the closed-form epoch bounds.
    #[arg(long)]
    lipschitz: Option<f64>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Theory(args) => cmd_theory(args),
    });
    if let Err(e) = outcome {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SAFEBAI_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().with_context(|| format!("SAFEBAI_THREADS must be an integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(n) = args.trials {
        cfg.n_trials = n;
    }
    if let Some(delta) = args.delta {
        cfg.delta = delta;
    }
    cfg.simplified_n |= args.simplified_n;
    cfg.validate()?;
    let out = args.out.unwrap_or_else(|| cfg.output_dir.clone());

    let file = InstanceFile::load(&cfg.instance)?;
    let problems = cfg.problems(&file)?;
    let trial_cfg =
        TrialConfig { delta: cfg.delta, n_trials: cfg.n_trials, master_seed: cfg.master_seed, limits: cfg.limits() };

    let mut sets = Vec::with_capacity(problems.len());
    for problem in &problems {
        let set = run_trials(problem, &trial_cfg)?;
        let a = &set.aggregate;
        println!(
            "d={} algorithm={} trials={} mean_pulls={} std_pulls={} correct_rate={} unsafe_trials={}",
            set.d,
            set.algorithm.name(),
            a.n_trials,
            fmt_sig(a.mean_pulls),
            fmt_sig(a.std_pulls),
            fmt_sig(a.correct_rate),
            a.unsafe_trial_count
        );
        if a.inconclusive_count > 0 {
            eprintln!("warning: d={}: {} of {} trials were inconclusive", set.d, a.inconclusive_count, a.n_trials);
        }
        sets.push(set);
    }

    std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
    write_summary_csv(&out.join("summary.csv"), &sets)?;
    write_regret_csv(&out.join("regret.csv"), &sets)?;
    Ok(())
}

fn is_instance_file(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    Ok(value.get("model").is_some())
}

fn cmd_theory(args: TheoryArgs) -> Result<()> {
    let (file, dims, delta, default_out) = if is_instance_file(&args.config)? {
        let file = InstanceFile::load(&args.config)?;
        (file, vec![args.d], args.delta.unwrap_or(0.1), PathBuf::from("."))
    } else {
        let cfg = ExperimentConfig::load(&args.config)?;
        let dims = match (args.d, &cfg.d_sweep) {
            (Some(d), _) => vec![Some(d)],
            (None, Some(ds)) => ds.iter().map(|&d| Some(d)).collect(),
            (None, None) => vec![None],
        };
        (InstanceFile::load(&cfg.instance)?, dims, args.delta.unwrap_or(cfg.delta), cfg.output_dir)
    };
    if !(delta > 0.0 && delta < 1.0) {
        bail!("delta must lie in (0, 1), got {delta}");
    }
    let out = args.out.unwrap_or(default_out);
    std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;

    for d in dims {
        let report = match file.build(d)? {
            Instance::Linear(inst) => linear_report(&inst, delta)?,
            Instance::Monotonic(inst) => monotonic_report(&inst, delta, args.lipschitz)?,
        };
        print_report(&report);
        let path = out.join(format!("theory_d{}.json", report.d));
        std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), fmt_sig)
}

fn print_report(r: &TheoryReport) {
    println!("d={} delta={} best_arm={}", r.d, fmt_sig(r.delta), r.i_star + 1);
    let gaps: Vec<String> = r.gaps.iter().map(|&g| fmt_sig(g)).collect();
    println!("  gaps: [{}]", gaps.join(", "));
    println!("  min_gap: {}", fmt_sig(r.min_gap));
    let mut lb = fmt_opt(r.lower_bound);
    if r.lower_bound_warning {
        lb.push_str(" (delta too large for a positive bound)");
    }
    println!("  lower_bound: {lb}");
    if !r.cases.is_empty() {
        let cases: Vec<String> = r.cases.iter().map(|c| c.map_or_else(|| "-".into(), |c| c.to_string())).collect();
        println!("  cases: [{}]", cases.join(", "));
    }
    let epochs: Vec<String> =
        r.predicted_epochs.iter().map(|e| e.map_or_else(|| "inf".into(), |e| e.to_string())).collect();
    println!("  predicted_epochs: [{}]", epochs.join(", "));
    println!("  predicted_samples: {}", fmt_opt(r.predicted_samples));
}
