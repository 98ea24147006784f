//! `zstruct`: command-line front end for the zstructure library.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};


#[derive(Parser, Debug)]
#[command(name = "zstruct", version, about = "Desk-scale checks for Z-structures on graphs of groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphInput {
    /// graph of groups as JSON
    #[arg(long, visible_alias = "input", conflicts_with = "bs")]
    graph: Option<PathBuf>,
    /// Baumslag–Solitar group `m,n`
    #[arg(long, value_parser = parse_pair, default_value = "1,2")]
    bs: (i64, i64),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// JSON report path; stdout when omitted
    #[arg(long, visible_alias = "report")]
    out: Option<PathBuf>,
    /// where a failing certification writes its counterexample
    #[arg(long)]
    counterexample: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ball in the Bass–Serre tree, with cycle and degree checks
    BuildTree {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Exact check of every edge relator under the fiber action
    VerifyRelators {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        output: Output,
    },
    /// Translate sweep, ψ fit, compression and nullity certificate
    Nullity(NullityArgs),
    /// Slope limits along join lines of the product boundary
    Boundary(BoundaryArgs),
    /// Cover constants for a boundary net, re-verified on a refined net
    Cover(CoverArgs),
    /// Complementary-component witness on the 4-valent tree
    Witness(WitnessArgs),
    /// Growth of a right-angled Coxeter group
    Growth {
        #[arg(long)]
        racg: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Index at which a compression of a Davis complex contradicts growth
    Davis {
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        #[arg(long, default_value = "log")]
        phi: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
pub struct NullityArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value_t = 12)]
    wordlen: usize,
    /// rational side of the fundamental cube; derived from the graph when omitted
    #[arg(long)]
    cube_side: Option<String>,
    /// `none`, `log`, `loglog`, `sqrt`, `zero` or `pow:p[:c]`
    #[arg(long, default_value = "log")]
    compress: String,
    #[arg(long, default_value_t = 5.0)]
    r0: f64,
    #[arg(long, default_value_t = 4)]
    net_resolution: usize,
    #[arg(long, default_value_t = 2.0)]
    cover_radius: f64,
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[arg(long, default_value_t = 3.0)]
    probe_radius: f64,
    /// recorded in the report; the pipeline itself draws no random numbers
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// per-translate statistics
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    #[command(flatten)]
    input: GraphInput,
    /// group elements acting on the rays
    #[arg(long = "word", default_values = ["t", "a t", "t^-1"])]
    words: Vec<String>,
    /// word whose coset path gives the tree ray ξ
    #[arg(long, default_value = "t^8")]
    xi: String,
    /// fiber direction η, comma separated
    #[arg(long, default_value = "1")]
    eta: String,
    /// slopes; `inf` for the fiber direction
    #[arg(long = "slope", default_values = ["0", "0.5", "1", "2", "inf"])]
    slopes: Vec<f64>,
    #[arg(long, default_value_t = 1e5)]
    t_max: f64,
    #[arg(long, default_value = "log")]
    phi: String,
    /// envelope `D,C` for ψ
    #[arg(long, value_parser = parse_pair, default_value = "2,3")]
    envelope: (i64, i64),
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    /// space description as JSON; the product space of `--bs` when omitted
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long, value_parser = parse_pair, default_value = "1,2")]
    bs: (i64, i64),
    #[arg(long, default_value_t = 4)]
    net_resolution: usize,
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    margin: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    T4,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(value_enum)]
    kind: WitnessKind,
    #[arg(long, default_value = "log")]
    phi: String,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// component counts are enumerated for radii 1 to this
    #[arg(long, default_value_t = 7)]
    max_radius: usize,
    /// ball sandwich checked for n from 1 to this
    #[arg(long, default_value_t = 4)]
    sandwich: usize,
    #[command(flatten)]
    output: Output,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two integers `m,n`, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::BuildTree { input, radius, output } => commands::build_tree(&input, radius, &output),
        Command::VerifyRelators { input, output } => commands::verify_relators(&input, &output),
        Command::Nullity(args) => commands::nullity(&args),
        Command::Boundary(args) => commands::boundary(&args),
        Command::Cover(args) => commands::cover(&args),
        Command::Witness(args) => commands::witness(&args),
        Command::Growth { racg, n, output } => commands::growth(&racg, n, &output),
        Command::Davis { k, eps, r, s, phi, output } => commands::davis(k, eps, r, s, &phi, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("zstruct: {f}");
            ExitCode::from(f.code())
        }
    }
}
