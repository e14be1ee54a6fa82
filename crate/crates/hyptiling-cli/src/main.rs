mod commands;
mod config;
mod svg;

use clap::{Args, Parser, Subcommand};
use config::{JobConfig, UsageError};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "hyptiling", version, about = "Canonical cell decompositions and commensurability of cusped hyperbolic 3-manifolds")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Significant digits in numeric output.
    #[arg(long, global = true, env = "HYPTILING_PRECISION", default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: u32,
    /// Relative tolerance for zero tilts.
    #[arg(long, global = true, env = "HYPTILING_EPS_TILT")]
    eps_tilt: Option<f64>,
    /// Imaginary part below which a shape counts as flat.
    #[arg(long, global = true, env = "HYPTILING_EPS_GEOM")]
    eps_geom: Option<f64>,
    /// Tolerance for matching cell labels.
    #[arg(long, global = true, env = "HYPTILING_EPS_ISOM")]
    eps_isom: Option<f64>,
    /// Seed for randomized restarts of the shape solver.
    #[arg(long, global = true, env = "HYPTILING_SEED")]
    seed: Option<u64>,
    /// Worker threads for order-independent sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read a triangulation and report its combinatorics.
    Parse { input: String },
    /// Solve the gluing equations for the complete structure.
    Solve { input: String },
    /// Canonical cell decomposition at a cusp size vector.
    Canonize {
        input: String,
        /// Comma-separated cusp sizes; all ones by default.
        #[arg(long = "v")]
        v: Option<String>,
    },
    /// All canonical decompositions as the cusp sizes vary.
    Cells {
        input: String,
        /// `tilt` or `sweep:D` for area vectors of total at most D.
        #[arg(long, default_value = "tilt")]
        strategy: String,
        /// Also move this size vector into a top-dimensional cell.
        #[arg(long = "v")]
        v: Option<String>,
        /// Write the parameter cells as SVG (three cusps only).
        #[arg(long)]
        svg: Option<String>,
    },
    /// Tiling isometry classes between two decompositions.
    Isom {
        first: String,
        second: String,
        /// Compare cells combinatorially instead of geometrically.
        #[arg(long)]
        combinatorial: bool,
        /// Write the first unbranched cover in Graphviz format.
        #[arg(long)]
        dot: Option<String>,
    },
    /// Symmetries and the commensurator quotient.
    Symm { input: String },
    /// Decide commensurability of two manifolds.
    Commensurate {
        first: String,
        second: String,
        #[arg(long)]
        dot: Option<String>,
    },
    /// Maximal cusp and cusp density.
    Cuspdensity {
        input: String,
        /// Write the horoball picture seen from `--cusp` as SVG.
        #[arg(long)]
        svg: Option<String>,
        #[arg(long, default_value_t = 0)]
        cusp: usize,
    },
    /// Cusp shapes, their symmetry orbits and the search dimension.
    Shapes {
        input: String,
        /// Compare cusp 0 with cusp 0 of another manifold.
        #[arg(long)]
        against: Option<String>,
    },
    /// Punctured-torus bundle of an LR word, e.g. `LRRLR` or `-LR`.
    Ptb {
        #[arg(allow_hyphen_values = true)]
        word: String,
        /// Write the strip diagram of T0 as SVG.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Decode, validate and re-encode DT codes.
    Dt {
        /// Alphabetic codes or bracketed numeric codes.
        codes: Vec<String>,
        /// File with one code per line, optionally as `name<TAB>code`.
        #[arg(long)]
        table: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Solve { .. } => "solve",
            Command::Canonize { .. } => "canonize",
            Command::Cells { .. } => "cells",
            Command::Isom { .. } => "isom",
            Command::Symm { .. } => "symm",
            Command::Commensurate { .. } => "commensurate",
            Command::Cuspdensity { .. } => "cuspdensity",
            Command::Shapes { .. } => "shapes",
            Command::Ptb { .. } => "ptb",
            Command::Dt { .. } => "dt",
        }
    }
}

fn dispatch(cmd: &Command, cfg: &JobConfig) -> anyhow::Result<commands::Output> {
    use commands as c;
    match cmd {
        Command::Parse { input } => c::parse(cfg, input),
        Command::Solve { input } => c::solve(cfg, input),
        Command::Canonize { input, v } => c::canonize(cfg, input, v.as_deref()),
        Command::Cells { input, strategy, v, svg } => c::cells(cfg, input, strategy, v.as_deref(), svg.as_deref()),
        Command::Isom { first, second, combinatorial, dot } => c::isom(cfg, first, second, *combinatorial, dot.as_deref()),
        Command::Symm { input } => c::symm(cfg, input),
        Command::Commensurate { first, second, dot } => c::commensurate(cfg, first, second, dot.as_deref()),
        Command::Cuspdensity { input, svg, cusp } => c::cuspdensity(cfg, input, svg.as_deref(), *cusp),
        Command::Shapes { input, against } => c::shapes(cfg, input, against.as_deref()),
        Command::Ptb { word, svg } => c::ptb(cfg, word, svg.as_deref()),
        Command::Dt { codes, table } => c::dt(cfg, codes, table.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = JobConfig::from_args(cli.command.name(), &cli.global);
    if let Some(n) = cfg.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: --jobs ignored: {e}");
        }
    }
    match dispatch(&cli.command, &cfg) {
        Ok(out) => {
            print!("{}", out.render(&cfg));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let usage = e.downcast_ref::<UsageError>().is_some();
            if cfg.json {
                println!("{}", commands::error_json(&cfg, &e));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
