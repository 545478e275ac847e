use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use rpu_cli::certify::{
    certify_halfspace, certify_halfspace_mixed, certify_rect, certify_tree, CertReport,
};
use rpu_cli::experiment::{parse_constants, ClassKind, ExperimentSpec, Mode, Summary};

#[derive(Parser)]
#[command(name = "rpu", about = "Bounded-memory reliable-learner experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run trials at a single epsilon and emit one record per trial.
    Run(RunArgs),
    /// Run trials over a list of epsilons and fit query growth.
    Sweep(SweepArgs),
    /// Check module inference against the exhaustive consistency oracle.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Concept class: rect | tree | halfspace2d.
    #[arg(long)]
    class: ClassKind,
    /// Ambient dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Decision-tree leaf count (tree class only).
    #[arg(long, default_value_t = 0)]
    tree_size: usize,
    /// Failure probability delta.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Trials per (class, epsilon) cell.
    #[arg(long, default_value_t = 20)]
    trials: u64,
    /// Base seed; every byte of output is a pure function of the arguments.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Learner mode: bounded | passive | doubling.
    #[arg(long, default_value = "bounded")]
    mode: Mode,
    /// Constant overrides, e.g. "c1=8,c2=60,batch_factor=6".
    #[arg(long, default_value = "")]
    constants: String,
    /// Write records here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Target abstention mass.
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated epsilon list, e.g. "0.1,0.02,0.004".
    #[arg(long, value_delimiter = ',', required = true)]
    epsilon: Vec<f64>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Concept class: rect | tree | halfspace2d.
    #[arg(long)]
    class: ClassKind,
    /// Random (instance, sample) pairs to certify.
    #[arg(long, default_value_t = 200)]
    pairs: u64,
    /// Probe points per pair.
    #[arg(long, default_value_t = 100)]
    probes: usize,
    /// Largest dimension exercised (rect only).
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Also run the mixed-sign suite (halfspace2d only).
    #[arg(long, default_value_t = false)]
    mixed: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn spec_of(common: &CommonArgs, epsilons: Vec<f64>) -> Result<ExperimentSpec> {
    Ok(ExperimentSpec {
        class: common.class,
        dim: common.dim,
        tree_size: common.tree_size,
        epsilons,
        delta: common.delta,
        trials: common.trials,
        seed: common.seed,
        mode: common.mode,
        constants: parse_constants(&common.constants)?,
    })
}

fn print_summary(summary: &Summary, to_stderr: bool) {
    let mut lines = Vec::new();
    for c in &summary.cells {
        lines.push(format!(
            "cell epsilon={} trials={} failures={} mislabels={} median-queries={} \
             median-batch-queries={} median-samples={} mean-abstention={:.6} peak-points={}",
            c.epsilon,
            c.trials,
            c.failures,
            c.mislabels,
            c.median_queries,
            c.median_batch_queries,
            c.median_samples,
            c.mean_abstention,
            c.peak_points
        ));
    }
    lines.push(format!(
        "fit slope={:.3} r2={:.4} total-mislabels={}",
        summary.slope, summary.r2, summary.total_mislabels
    ));
    for l in lines {
        if to_stderr {
            eprintln!("{l}");
        } else {
            println!("{l}");
        }
    }
}

fn run_spec(common: &CommonArgs, epsilons: Vec<f64>) -> Result<ExitCode> {
    let spec = spec_of(common, epsilons)?;
    let summary = match &common.out {
        Some(path) => {
            let mut sink = BufWriter::new(File::create(path)?);
            let s = rpu_cli::experiment::run_experiment(&spec, &mut sink)?;
            sink.flush()?;
            print_summary(&s, false);
            s
        }
        None => {
            let stdout = io::stdout();
            let mut sink = BufWriter::new(stdout.lock());
            let s = rpu_cli::experiment::run_experiment(&spec, &mut sink)?;
            sink.flush()?;
            print_summary(&s, true);
            s
        }
    };
    if summary.total_mislabels > 0 {
        eprintln!("error: reliability breach ({} mislabels)", summary.total_mislabels);
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn report_line(name: &str, r: &CertReport) -> bool {
    println!(
        "certify {name}: pairs={} probes={} violations={} size-cap-breaches={} -> {}",
        r.pairs,
        r.probes_checked,
        r.violations,
        r.size_cap_breaches,
        if r.passed() { "ok" } else { "FAIL" }
    );
    r.passed()
}

fn run_certify(args: &CertifyArgs) -> Result<ExitCode> {
    let mut ok = true;
    match args.class {
        ClassKind::Rect => {
            let r = certify_rect(args.pairs, args.probes, args.dim.max(1), args.seed);
            ok &= report_line("rect", &r);
        }
        ClassKind::Tree => {
            let r = certify_tree(args.pairs, args.probes, args.seed);
            ok &= report_line("tree", &r);
        }
        ClassKind::Halfspace2d => {
            let r = certify_halfspace(args.pairs, args.probes, 1e-9, args.seed);
            ok &= report_line("halfspace2d", &r);
            if args.mixed {
                let r = certify_halfspace_mixed(args.pairs, args.probes, 1e-9, args.seed);
                ok &= report_line("halfspace2d-mixed", &r);
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    // Usage problems exit 1; clap's default would be 2, which we reserve for
    // reliability violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(a) => run_spec(&a.common, vec![a.epsilon]),
        Command::Sweep(a) => run_spec(&a.common, a.epsilon.clone()),
        Command::Certify(a) => run_certify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
