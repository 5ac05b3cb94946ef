use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use greedymatch::bench::{
    aggregate, c_grid, read_trials_csv, run_sweep_with, write_aggregates_csv, write_trials_csv,
    Execution, ExperimentConfig,
};
use greedymatch::generator::DEFAULT_COUNTED_THRESHOLD;
use greedymatch::{
    generate, max_matching_bipartite, max_matching_general, AlgorithmSpec, DynamicGraph,
    FamilyKind, GraphFamily, Method, SeededRng,
};

#[derive(Parser)]
#[command(name = "greedymatch", version, about = "Greedy matching heuristics on sparse random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and write it as an edge list.
    Gen(GenArgs),
    /// Run one greedy algorithm on an edge list.
    Match(MatchArgs),
    /// Print the size of a maximum matching of an edge list.
    Exact(ExactArgs),
    /// Run a parameter sweep and write per-trial and aggregate CSVs.
    Sweep(SweepArgs),
    /// Recompute aggregates from a per-trial CSV.
    Aggregate(AggregateArgs),
}

#[derive(Args)]
struct MethodArgs {
    /// Generation method; by default counted sampling is used above the threshold.
    #[arg(long, value_parser = ["direct", "counted", "auto"], default_value = "auto")]
    method: String,
    /// Node count above which `auto` switches to counted sampling.
    #[arg(long, default_value_t = DEFAULT_COUNTED_THRESHOLD)]
    counted_threshold: usize,
}

impl MethodArgs {
    fn method(&self) -> Method {
        match self.method.as_str() {
            "direct" => Method::Direct,
            "counted" => Method::Counted,
            _ => Method::Auto {
                threshold: self.counted_threshold,
            },
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: FamilyKind,
    #[arg(long)]
    nodes: usize,
    /// Expected average degree c.
    #[arg(long)]
    degree: f64,
    #[arg(long, default_value_t = 0)]
    seed: u32,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// One of opt1-rand, opt12-rand, opt1-degdeg, opt12-degdeg, opt1-potdeg, opt12-potdeg.
    #[arg(long)]
    alg: AlgorithmSpec,
    #[arg(long, default_value_t = 0)]
    seed: u32,
    /// Also write the matched edges, one `u v` pair per line.
    #[arg(long)]
    emit_matching: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Treat the graph as bipartite with nodes `0..LEFT` on the left side.
    #[arg(long, value_name = "LEFT")]
    bipartite: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: FamilyKind,
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 1.0)]
    c_from: f64,
    #[arg(long, default_value_t = 10.0)]
    c_to: f64,
    #[arg(long, default_value_t = 0.1)]
    c_step: f64,
    /// Comma-separated algorithm names; all six by default.
    #[arg(long, value_delimiter = ',')]
    algs: Vec<AlgorithmSpec>,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u32,
    #[arg(long, value_enum, default_value = "on")]
    oracle: Switch,
    /// Run the oracle even above the default size limit.
    #[arg(long)]
    force_oracle: bool,
    #[command(flatten)]
    method: MethodArgs,
    /// Run trials one after another even when built with parallel support.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out_trials: PathBuf,
    #[arg(long)]
    out_agg: Option<PathBuf>,
}

#[derive(Args)]
struct AggregateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn load(path: &PathBuf) -> Result<DynamicGraph> {
    DynamicGraph::load(path).with_context(|| format!("reading graph {}", path.display()))
}

fn gen(args: GenArgs) -> Result<()> {
    let family = GraphFamily::new(args.family, args.nodes, args.degree)?;
    let graph = generate(&family, &mut SeededRng::new(args.seed), args.method.method())?;
    graph.save(&args.out)?;
    println!("nodes {} edges {}", graph.node_bound(), graph.edge_count());
    Ok(())
}

fn run_match(args: MatchArgs) -> Result<()> {
    let graph = load(&args.input)?;
    let original = graph.clone();
    let (matching, counters) = greedymatch::run(graph, args.alg, args.seed)?;
    matching.validate(&original)?;
    println!(
        "algorithm {} matching {} o1 {} o2 {} h {}",
        args.alg,
        matching.len(),
        counters.o1,
        counters.o2,
        counters.h
    );
    if let Some(path) = args.emit_matching {
        let text: String = matching
            .sorted()
            .edges()
            .iter()
            .map(|(u, v)| format!("{u} {v}\n"))
            .collect();
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn exact(args: ExactArgs) -> Result<()> {
    let graph = load(&args.input)?;
    let matching = match args.bipartite {
        Some(left) => {
            if left > graph.node_bound() {
                bail!("left side {left} exceeds the node count {}", graph.node_bound());
            }
            max_matching_bipartite(&graph, left)?
        }
        None => max_matching_general(&graph),
    };
    println!("{}", matching.len());
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::new(args.family, args.nodes);
    cfg.c_grid = c_grid(args.c_from, args.c_to, args.c_step)?;
    if !args.algs.is_empty() {
        cfg.algorithms = args.algs;
    }
    cfg.trials = args.trials;
    cfg.master_seed = args.seed;
    cfg.oracle = matches!(args.oracle, Switch::On);
    cfg.force_oracle = args.force_oracle;
    cfg.method = args.method.method();
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };

    let records = run_sweep_with(&cfg, exec)?;
    write_trials_csv(&records, &args.out_trials)?;
    if let Some(path) = &args.out_agg {
        write_aggregates_csv(&aggregate(&records, cfg.oracle)?, path)?;
    }
    println!("{} trial records written to {}", records.len(), args.out_trials.display());
    Ok(())
}

fn recompute(args: AggregateArgs) -> Result<()> {
    let records = read_trials_csv(&args.input)?;
    let quality = records.iter().all(|r| r.oracle_size.is_some());
    let aggregates = aggregate(&records, quality)?;
    write_aggregates_csv(&aggregates, &args.out)?;
    println!("{} cells written to {}", aggregates.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Match(a) => run_match(a),
        Command::Exact(a) => exact(a),
        Command::Sweep(a) => sweep(a),
        Command::Aggregate(a) => recompute(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
