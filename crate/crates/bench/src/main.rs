use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use skiptour_bench::{
    default_threads, emit_csv, run_bench, write_csv, BenchConfig, CellStatus, GraphKind,
    Structure, Workload,
};

/// Times batch operations on skip lists and Euler tour forests and writes
/// one CSV row per cell and operation.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    #[arg(long, value_enum, default_value = "skiplist")]
    structure: Structure,
    /// Defaults to split-rejoin for lists and cut-relink for forests.
    #[arg(long, value_enum)]
    workload: Option<Workload>,
    /// Tree shape for the forest structure.
    #[arg(long, value_enum, default_value = "path")]
    graph: GraphKind,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// Batch size; repeat for a grid.
    #[arg(long = "k")]
    ks: Vec<usize>,
    /// Worker count; repeat for a grid. Defaults to 1, 2, 4, ... hardware.
    #[arg(long)]
    threads: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Edge list with one `u v` pair per line, replacing --graph.
    #[arg(long)]
    edges: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// `Ok(false)` if any cell errored.
fn run(args: Args) -> Result<bool, Box<dyn std::error::Error>> {
    let defaults = BenchConfig::default();
    let edges = match &args.edges {
        Some(path) => Some(skiptour::parse_edge_list(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let cfg = BenchConfig {
        structure: args.structure,
        workload: args.workload.unwrap_or(Workload::default_for(args.structure)),
        graph: args.graph,
        n: args.n,
        ks: if args.ks.is_empty() { defaults.ks } else { args.ks },
        threads: if args.threads.is_empty() { default_threads() } else { args.threads },
        trials: args.trials,
        seed: args.seed,
        edges,
    };
    let records = run_bench(&cfg)?;
    match &args.out {
        Some(path) => emit_csv(&records, path)?,
        None => write_csv(&records, std::io::stdout().lock())?,
    }
    let errored: Vec<_> = records.iter().filter(|r| r.status == CellStatus::Error).collect();
    for r in &errored {
        eprintln!("cell k={} threads={} op={} failed: {}", r.k, r.threads, r.op, r.note);
    }
    Ok(errored.is_empty())
}
