//! `mh`: sweeps, verification runs and classification queries.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;
use parse::{ComplexArg, GridArg, VectorArg};

#[derive(Debug, Parser)]
#[command(
    name = "mh",
    version,
    about = "Spherical functions on Cartan motion groups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count (command-specific default).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Fixed Gauss-Legendre node count instead of the adaptive rule.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Flag rows whose error or residual exceeds this.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Exit 1 when a verdict is inconclusive or a row is flagged.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate φ(r, s) over a grid.
    EvalPhi(EvalPhi),
    /// Compare quadrature with the leading asymptotic term.
    AsymCompare(AsymCompare),
    /// Classify ψ_λ as bounded or unbounded along rays.
    SweepBounded(SweepBounded),
    /// Bochner positive-definiteness test of ψ_λ.
    Bochner(Bochner),
    /// Synthesize an eigenfunction and check Δf = −λ²f.
    EigenCheck(EigenCheck),
    /// Closed subgroups of O(n) transitive on spheres.
    ClassifyGroups(ClassifyGroups),
    /// Monte Carlo ψ_λ(Y) over Haar-sampled K.
    PsiMc(PsiMc),
}

#[derive(Debug, Args)]
pub struct EvalPhi {
    /// Dimensions, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    n: Vec<usize>,
    /// Spectral values "re,im"; repeat or separate with ';'.
    #[arg(
        long,
        required = true,
        value_delimiter = ';',
        allow_hyphen_values = true
    )]
    s: Vec<ComplexArg>,
    /// Radii: a number, a list, or start:stop:count:{lin|geom}.
    #[arg(long, allow_hyphen_values = true)]
    r: GridArg,
}

#[derive(Debug, Args)]
pub struct AsymCompare {
    #[arg(long, required = true, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(
        long,
        required = true,
        value_delimiter = ';',
        allow_hyphen_values = true
    )]
    s: Vec<ComplexArg>,
    #[arg(long, default_value = "10:1000:9:geom")]
    r: GridArg,
}

#[derive(Debug, Args)]
pub struct SweepBounded {
    /// rank1:<n>[:<group>] or sl:<n>.
    #[arg(long)]
    model: String,
    /// Components "re,im" separated by ';'.
    #[arg(
        long,
        value_delimiter = ';',
        required = true,
        allow_hyphen_values = true
    )]
    lambda: Vec<ComplexArg>,
    /// Ray parameters t.
    #[arg(long, default_value = "1:1024:11:geom")]
    grid: GridArg,
    #[arg(long, default_value_t = 1.05)]
    threshold: f64,
    /// Monte Carlo std_error above which a point is inconclusive.
    #[arg(long, default_value_t = 0.05)]
    ceiling: f64,
}

#[derive(Debug, Args)]
pub struct Bochner {
    #[arg(long)]
    model: String,
    #[arg(
        long,
        value_delimiter = ';',
        required = true,
        allow_hyphen_values = true
    )]
    lambda: Vec<ComplexArg>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Points per configuration.
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    #[arg(long, default_value_t = 0.25)]
    spacing: f64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Debug, Args)]
pub struct EigenCheck {
    /// Ambient dimension (2 or 3); taken from the file for file densities.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: ComplexArg,
    /// "random", "random:<seed>", "constant:<re,im>" or a JSON file path.
    #[arg(long, default_value = "random")]
    density: String,
    /// Resolution budget max |λ||x| of generated densities.
    #[arg(long, default_value_t = 30.0)]
    budget: f64,
    /// Evaluation points "x1,x2[,x3]", ';' separated. Seeded points if absent.
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true)]
    x: Vec<VectorArg>,
    /// Number of seeded points when --x is absent.
    #[arg(long, default_value_t = 5)]
    points: usize,
    /// Stencil step; the order estimate also uses h/2.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
}

#[derive(Debug, Args)]
pub struct ClassifyGroups {
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args)]
pub struct PsiMc {
    #[arg(long)]
    model: String,
    #[arg(
        long,
        value_delimiter = ';',
        required = true,
        allow_hyphen_values = true
    )]
    lambda: Vec<ComplexArg>,
    /// Points Y in p coordinates, ';' separated.
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true)]
    y: Vec<VectorArg>,
    /// Ray parameters along slice direction --direction, used when --y is absent.
    #[arg(long)]
    t: Option<GridArg>,
    #[arg(long, default_value_t = 0)]
    direction: usize,
}

fn main() -> ExitCode {
    let args = parse::normalize_args(std::env::args());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let g = cli.global;
    let report = match cli.command {
        Command::EvalPhi(a) => commands::eval_phi(&g, &a),
        Command::AsymCompare(a) => commands::asym_compare(&g, &a),
        Command::SweepBounded(a) => commands::sweep_bounded(&g, &a),
        Command::Bochner(a) => commands::bochner(&g, &a),
        Command::EigenCheck(a) => commands::eigen_check(&g, &a),
        Command::ClassifyGroups(a) => commands::classify_groups(&g, &a),
        Command::PsiMc(a) => commands::psi_mc(&g, &a),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("mh: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = report.render(g.format);
    let written = match &g.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    };
    if let Err(msg) = written {
        eprintln!("mh: {msg}");
        return ExitCode::from(2);
    }
    if g.strict && report.flagged {
        eprintln!("mh: numerical check failed or inconclusive (--strict)");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
