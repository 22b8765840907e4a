use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boolforge::boolfn::{is_balanced, is_rotation_symmetric, nonlinearity, walsh_transform};
use boolforge::evolution::LsMode;
use boolforge::fitness::fitness_nl;
use boolforge::harness::{
    emit_plot_data, emit_summary_csv, read_records, run_experiment, summarize, variant_label,
    write_records, Algorithm, Encoding, ExperimentConfig, RunRecord,
};
use boolforge::TruthTable;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "boolforge",
    version,
    about = "Evolve Boolean functions with high nonlinearity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign of independent optimization runs.
    Run(RunArgs),
    /// Print max/avg/std of the best fitness per variant in a results file.
    Summarize(SummarizeArgs),
    /// Report the properties of one truth table.
    Eval(EvalArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// tt, tt-ri, fp, gp, gp-part, gp-full or gp-scnd.
    #[arg(long)]
    encoding: Option<Encoding>,
    /// sst or fp-sst.
    #[arg(long)]
    algo: Option<Algorithm>,
    /// none, ls1, ls2 or ls3.
    #[arg(long)]
    ls: Option<LsMode>,
    #[arg(long)]
    runs: Option<usize>,
    /// Fitness evaluations per run.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit per run, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    p_mut: Option<f64>,
    /// Bits per coordinate for the fp encoding.
    #[arg(long)]
    dec: Option<u32>,
    /// Seed functions for gp-scnd, one truth table per line.
    #[arg(long)]
    seed_groups: Option<PathBuf>,
    /// Results are appended here; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SummarizeArgs {
    results: PathBuf,
    /// Also write the summary table as CSV.
    #[arg(long)]
    summary_out: Option<PathBuf>,
    /// Also write per-variant fitness lists for box plots.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// File holding a truth table in binary or hex.
    #[arg(long, conflicts_with = "tt")]
    tt_file: Option<PathBuf>,
    /// Truth table given inline.
    #[arg(long)]
    tt: Option<String>,
}

fn experiment_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_kv_text(&text)
            .with_context(|| format!("in {}", path.display()))?;
    }
    macro_rules! take {
        ($($field:ident => $target:ident),* $(,)?) => {
            $(if let Some(v) = args.$field.clone() { cfg.$target = v; })*
        };
    }
    take!(n => n, encoding => encoding, algo => algo, ls => ls, runs => runs, budget => budget,
          seed => seed, pop => pop_size, p_mut => p_mut, dec => dec, threads => threads);
    if args.time_limit.is_some() {
        cfg.time_limit = args.time_limit;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if args.seed_groups.is_some() {
        cfg.seed_groups = args.seed_groups.clone();
    }
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = experiment_config(&args)?;
    let records = run_experiment(&cfg)?;
    if cfg.out.is_none() {
        write_records(&records, std::io::stdout().lock())?;
    }
    let stats = summarize(&records)?;
    eprintln!(
        "{} n={} runs={} max={:.6} avg={:.6} std={:.6}",
        cfg.label(),
        cfg.n,
        stats.count,
        stats.max,
        stats.avg,
        stats.std
    );
    Ok(())
}

fn record_label(r: &RunRecord) -> String {
    let label = match (r.encoding.parse::<Encoding>(), r.ls.parse::<LsMode>()) {
        (Ok(e), Ok(ls)) => variant_label(e, ls),
        _ => format!("{}/{}/{}", r.encoding, r.algo, r.ls),
    };
    format!("n={} {}", r.n, label)
}

fn summarize_cmd(args: SummarizeArgs) -> Result<()> {
    let records = read_records(&args.results)?;
    if records.is_empty() {
        bail!("no records in {}", args.results.display());
    }
    let mut groups: BTreeMap<String, Vec<RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(record_label(&r)).or_default().push(r);
    }
    let mut rows = Vec::new();
    println!(
        "{:<28} {:>5} {:>12} {:>12} {:>10}",
        "variant", "runs", "max", "avg", "std"
    );
    for (label, recs) in &groups {
        let s = summarize(recs)?;
        println!(
            "{:<28} {:>5} {:>12.6} {:>12.6} {:>10.6}",
            label, s.count, s.max, s.avg, s.std
        );
        rows.push((label.clone(), s));
    }
    if let Some(path) = &args.summary_out {
        emit_summary_csv(&rows, path)?;
    }
    if let Some(path) = &args.plot_data {
        emit_plot_data(&groups.into_iter().collect::<Vec<_>>(), path)?;
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let text = match (&args.tt_file, &args.tt) {
        (Some(path), _) => {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        }
        (None, Some(tt)) => tt.clone(),
        (None, None) => bail!("give --tt-file or --tt"),
    };
    let compact: String = text.split_whitespace().collect();
    let tt: TruthTable = compact.parse()?;
    let spectrum = walsh_transform(&tt);
    let fitness = fitness_nl(&tt);
    println!("n: {}", tt.n());
    println!("nonlinearity: {}", nonlinearity(&spectrum));
    println!("balanced: {}", is_balanced(&tt));
    println!("fitness: {fitness}");
    println!(
        "max_abs_walsh: {} (x{})",
        spectrum.max_abs(),
        spectrum.max_abs_count()
    );
    println!("rotation_symmetric: {}", is_rotation_symmetric(&tt));
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Summarize(args) => summarize_cmd(args),
        Command::Eval(args) => eval(args),
    }
}
