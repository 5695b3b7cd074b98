mod commands;
mod error;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Output;

#[derive(Parser)]
#[command(name = "homgibbs", version, about = "Hard-constraint spin models as graph-homomorphism spaces")]
struct Cli {
    /// Worker threads for multi-start solves and replicas. Results do not
    /// depend on it.
    #[arg(long, global = true, env = "HOMGIBBS_THREADS")]
    threads: Option<usize>,

    /// Write outputs and manifest.json here instead of printing JSON.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dismantlability, cop-win and fertility of a constraint graph.
    Classify {
        /// Named graph (hinge, hard_core, K3, cycle:5, path:3:looped, ...)
        /// or a JSON file.
        graph: String,
    },
    /// Exact enumeration of hom(G, H).
    Homspace(HomspaceArgs),
    /// Branching random walks and the fundamental equations on Cayley trees.
    #[command(subcommand)]
    Treegibbs(TreeCommand),
    /// `solve`, `sweep` and `sample` are also accepted without the
    /// `treegibbs` prefix.
    #[command(flatten)]
    Tree(TreeCommand),
    /// Single-site heat-bath sampling on finite boards.
    #[command(subcommand)]
    Mcmc(McmcCommand),
    /// Re-runs a packaged experiment and checks it against its expectation.
    Reproduce {
        /// Experiment id; see --list.
        id: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
pub struct HomspaceArgs {
    /// Board: grid:N:D, tree:R:DEPTH, path:LEN, complete:K or a JSON file.
    pub board: String,
    pub graph: String,
    #[arg(long, value_enum, default_value = "count")]
    pub report: HomReport,
    /// Activities for `marginals`, comma separated. Default uniform.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Search-node cap for the enumeration.
    #[arg(long, default_value_t = homgibbs::homspace::DEFAULT_SEARCH_CAP)]
    pub cap: u64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HomReport {
    Count,
    Connectivity,
    Isolated,
    Marginals,
}

#[derive(Args)]
pub struct SolverFlags {
    #[arg(long, default_value_t = 200)]
    pub starts: usize,
    /// Residual a converged point must reach.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Solutions closer than this are merged.
    #[arg(long, default_value_t = 1e-6)]
    pub dedup_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed-point sweeps applied to odd-numbered starts before Newton.
    #[arg(long, default_value_t = 25)]
    pub fixed_point_sweeps: usize,
}

#[derive(Subcommand)]
pub enum TreeCommand {
    /// All simple semi-invariant Gibbs measures found from many starts.
    Solve {
        graph: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        lambda: String,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Solution counts along a one-parameter activity family.
    Sweep {
        graph: String,
        #[arg(long)]
        r: usize,
        /// hinge (t,1,t), hard_core (t,1) or first_node (t,1,...,1).
        #[arg(long, default_value = "hinge")]
        family: String,
        /// Increasing t values, comma separated.
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "invariant")]
        count: CountArg,
        #[arg(long, default_value_t = 1e-6)]
        bisect_tol: f64,
        /// Print CSV of (t, invariant_count, class_count) instead of JSON.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Samples the branching random walk on a truncated tree.
    Sample {
        graph: String,
        #[arg(long)]
        r: usize,
        /// Node weights, comma separated.
        #[arg(long)]
        w: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CountArg {
    Invariant,
    Classes,
}

#[derive(Subcommand)]
pub enum McmcCommand {
    Run(McmcArgs),
}

#[derive(Args)]
pub struct McmcArgs {
    #[arg(long)]
    pub board: String,
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// even, odd, split (alternating even/odd by replica), random,
    /// constant:J, or a JSON file with a spin list. Default: split on
    /// bipartite boards when the graph has a vacant spin, else random.
    #[arg(long)]
    pub init: Option<String>,
    /// JSON list of [site, spin] pairs held fixed.
    #[arg(long)]
    pub pin: Option<String>,
    /// Sweeps ignored by statistics. Default 20% of --sweeps.
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Also write the stats JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write one PPM per replica (final state) into this directory.
    #[arg(long)]
    pub render: Option<PathBuf>,
    /// Pixels per site in renders.
    #[arg(long, default_value_t = 8)]
    pub block: usize,
    /// Include per-sweep time series in the JSON (CSV files are written
    /// with --out-dir regardless).
    #[arg(long)]
    pub series: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let command = recorded_command();
    let out = Output::new(cli.out_dir, command);
    let result = match cli.command {
        Command::Classify { graph } => commands::classify(&graph, out),
        Command::Homspace(args) => commands::homspace(&args, out),
        Command::Treegibbs(cmd) | Command::Tree(cmd) => commands::treegibbs(&cmd, out),
        Command::Mcmc(McmcCommand::Run(args)) => commands::mcmc_run(&args, out),
        Command::Reproduce { id, list } => reproduce::run(id.as_deref(), list, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}

/// Arguments as given, minus the output directory and thread count, which
/// do not affect results.
fn recorded_command() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--out-dir" || a == "--threads" {
            args.next();
        } else if !(a.starts_with("--out-dir=") || a.starts_with("--threads=")) {
            out.push(a);
        }
    }
    out
}
