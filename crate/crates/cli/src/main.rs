//! `dlab`: distortion and divergence experiments on right-angled Artin
//! groups, their Bestvina–Brady kernels, and Macura's free-by-cyclic groups.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_BUDGET: usize = 5_000_000;

#[derive(Parser, Debug)]
#[command(name = "dlab", version, about = "Subgroup distortion and divergence experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Connectivity, join decomposition and basis-subgraph domination classes.
    GraphCheck(GraphOnly),
    /// Finite generation, strength and predicted distortion of the kernel.
    BbCheck(GraphOnly),
    /// Hypotheses of the decomposition bound for a covering collection.
    Theo1Check(Theo1Args),
    /// Exact distortion series of the kernel in the Artin group.
    Distortion(DistortionArgs),
    /// Divergence estimates of the Artin group.
    Divergence(DivergenceArgs),
    /// Growth table of the automorphisms acting in Macura's groups.
    MacuraGrowth(MacuraGrowthArgs),
    /// Distortion series of the free fibre in Macura's group.
    MacuraDistortion(MacuraDistortionArgs),
    /// Log-log growth exponent of an `r,value,exact` series.
    Fit(FitArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// JSON graph file with `vertices`, `edges` and optional `labels`.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Built-in graph (fig1-left, fig1-middle, fig1-right, fig2-left,
    /// fig2-middle, fig2-right, fig-a1, fig-4, p3, p4, zsq, free2).
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct GraphOnly {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct Theo1Args {
    #[command(flatten)]
    pub source: GraphSource,
    /// JSON array of vertex-name arrays; defaults to the built-in collection.
    #[arg(long, value_name = "FILE")]
    pub collection: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 8)]
    pub rmax: u32,
    /// Element budget for each ball exploration.
    #[arg(long, env = "DLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Compute every subgroup length by search, even when a closed form applies.
    #[arg(long)]
    pub search_only: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct DivergenceArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Single radius; overrides --rmin/--rmax.
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub rmin: u32,
    #[arg(long, default_value_t = 4)]
    pub rmax: u32,
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Exploration radius; defaults to the largest complete radius up to
    /// 2r+2 that fits in the budget.
    #[arg(long)]
    pub horizon: Option<u32>,
    #[arg(long, env = "DLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct MacuraGrowthArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 12)]
    pub nmax: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct MacuraDistortionArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 8)]
    pub rmax: u32,
    #[arg(long, env = "DLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Series in `r,value,exact` form.
    #[arg(long, value_name = "FILE")]
    pub csv: PathBuf,
    /// Radius window `LO:HI`; defaults to the largest exact window.
    #[arg(long, value_name = "LO:HI", value_parser = parse_window)]
    pub window: Option<(u32, u32)>,
    /// Second series; reports whether the first is dominated by it.
    #[arg(long, value_name = "FILE")]
    pub against: Option<PathBuf>,
    #[arg(long, default_value_t = 0.25)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: Output,
}

fn parse_window(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
    if lo > hi {
        return Err(format!("window {lo}:{hi} is empty"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
