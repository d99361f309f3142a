use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxleaf_core::{Format, StartPolicy};

mod commands;

/// Maximum-leaf spanning trees: greedy 2-approximation, certificates and
/// exact comparison.
#[derive(Debug, Parser)]
#[command(name = "maxleaf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a spanning tree with many leaves.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        policy: PolicyArg,
        /// Print the tree edges, one `u v` per line.
        #[arg(long)]
        edges: bool,
        /// Print the graph as DOT with tree edges solid and the rest dashed.
        #[arg(long)]
        dot: bool,
        /// Print one line per expansion step.
        #[arg(long)]
        trace: bool,
    },
    /// Solve, then print the optimality certificate and lemma checks.
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        policy: PolicyArg,
    },
    /// Exact maximum leaf count by exhaustive enumeration.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = maxleaf_core::oracle::DEFAULT_BUDGET)]
        budget: u64,
        /// Print the witness tree edges.
        #[arg(long)]
        edges: bool,
        /// Skip branches that cannot beat the best tree found so far.
        /// `trees_examined` then counts only the trees actually completed.
        #[arg(long)]
        prune: bool,
    },
    /// Compare the greedy tree with the exact optimum.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        policy: PolicyArg,
        #[arg(long, default_value_t = maxleaf_core::oracle::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Generate an instance: cycle:N, star:N, complete:N, grid:R,C, random:N,M, tight:NMAX,TRIALS.
    Gen {
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "edgelist")]
        format: Format,
    },
    /// Time the solver on a doubling ladder of random graphs, as CSV.
    Bench {
        /// Exponent range of the edge count, `start:stop` inclusive.
        #[arg(long, default_value = "16:21", value_parser = parse_ladder)]
        ladder: (u32, u32),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Timed runs per rung; the median is reported.
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
    /// Randomized search for graphs with a large optimum-to-greedy ratio.
    TightSearch {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Limit on edges beyond a spanning tree (0 searches trees only).
        #[arg(long)]
        max_extra_edges: Option<usize>,
        /// Where to save the best instance.
        #[arg(long, default_value = "tight-search-best.edgelist")]
        out: std::path::PathBuf,
        #[arg(long, default_value_t = maxleaf_core::oracle::DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value = "edgelist")]
    format: Format,
    /// Seed for randomized generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Graph file, or `-` for standard input.
    path: Option<String>,
    /// Generate the input instead of reading it (same syntax as `gen`).
    #[arg(long = "gen")]
    generator: Option<String>,
}

#[derive(Debug, Args)]
struct PolicyArg {
    /// `first`, `maxdeg` or `vertex:<id>`.
    #[arg(long = "start-policy", default_value = "first")]
    start_policy: StartPolicy,
}

fn parse_ladder(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or("expected start:stop")?;
    let a: u32 = a.parse().map_err(|_| format!("bad ladder start `{a}`"))?;
    let b: u32 = b.parse().map_err(|_| format!("bad ladder stop `{b}`"))?;
    if a > b || b > 40 || a < 3 {
        return Err("ladder must satisfy 3 <= start <= stop <= 40".into());
    }
    Ok((a, b))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            print!("{}", e.stdout);
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
