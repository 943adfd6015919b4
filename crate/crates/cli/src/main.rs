//! `l2lab` command-line front end.
//!
//! Artifact commands print JSON on stdout; report commands print a text
//! table. `--out` writes the JSON to a file and prints the text instead,
//! `--json` forces JSON on stdout. Errors go to stderr as one JSON object.

mod commands;
mod error;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(name = "l2lab", version, about = "Flag complexes, subdivisions, Davis complexes and L2-Betti certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Write the JSON artifact here and print the text summary.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print JSON on stdout even for report commands.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for independent homology jobs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Bound on the number of cells of any constructed cube complex.
    #[arg(long, global = true, env = "L2LAB_MAX_CELLS", default_value_t = l2lab::davis::DEFAULT_MAX_CELLS)]
    max_cells: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog complex, or normalize a complex file.
    Build {
        /// Catalog name (see `info --catalog`).
        name: Option<String>,
        /// Size parameter of the catalog family.
        param: Option<usize>,
        /// Read a complex from a JSON file instead.
        #[arg(long, conflicts_with = "name")]
        from: Option<String>,
        /// Replace the result by the flag complex of its 1-skeleton.
        #[arg(long)]
        flag: bool,
    },
    /// f-vector, flagness, connectivity and Euler characteristics.
    Info {
        #[arg(required_unless_present = "catalog")]
        complex: Option<String>,
        /// List the catalog names instead.
        #[arg(long)]
        catalog: bool,
    },
    /// Link of a simplex.
    Link {
        complex: String,
        /// Comma-separated vertices; empty for the whole complex.
        #[arg(long, default_value = "")]
        simplex: String,
    },
    /// Join of two complexes; clashing labels are suffixed.
    Join { left: String, right: String },
    /// Subdivide one edge.
    Subdivide {
        complex: String,
        #[arg(long)]
        edge: String,
    },
    /// Relative barycentric subdivision b(L, K).
    Barycentric {
        complex: String,
        /// Subcomplex K; the empty complex when omitted.
        #[arg(long)]
        rel: Option<String>,
        /// Emit the edge-subdivision script instead of the complex.
        #[arg(long)]
        script: bool,
    },
    /// Generate a subdivision script.
    Script {
        #[command(subcommand)]
        kind: ScriptKind,
    },
    /// Check a subdivision script or a certificate.
    Verify { file: String },
    /// Davis chamber, Davis complex and abelian p-covers.
    Davis {
        #[command(subcommand)]
        kind: DavisKind,
    },
    /// Homology of a cube complex.
    Homology {
        complex: String,
        #[arg(long, value_enum, default_value_t = FieldArg::Q)]
        field: FieldArg,
        #[arg(long)]
        p: Option<u64>,
        /// Integral homology with torsion.
        #[arg(long)]
        integral: bool,
    },
    /// Normalized Betti numbers along a tower of abelian p-covers.
    Growth {
        /// A flag complex L (its Davis complex is used) or a cube complex.
        #[arg(long)]
        base: String,
        /// `p=3,k=1..3` with optional `,rank=2`.
        #[arg(long)]
        tower: String,
    },
    /// Derive a vanishing certificate.
    Certify {
        complex: String,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        /// `all` or comma-separated degrees.
        #[arg(long, default_value = "all")]
        goal: String,
        /// Run the trivalent-graph decision procedure.
        #[arg(long, conflicts_with = "branching")]
        trivalent: bool,
        /// Run the minimally-branching decision procedure.
        #[arg(long)]
        branching: bool,
        /// Trust that the input is a sphere (recorded as an assumption).
        #[arg(long)]
        assume_sphere: bool,
        #[arg(long, default_value_t = l2lab::calculus::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Universal-coefficient torsion bookkeeping along a chain of covers.
    Torsion {
        /// Directory of cube complexes or `{index, homology}` files.
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
    /// Markdown summary of a directory of JSON artifacts.
    Report { dir: String },
}

#[derive(Subcommand)]
enum ScriptKind {
    /// `O^n` to `b(∂Δ^n, K)`.
    Octahedron {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        rel: Option<String>,
    },
    /// `L` to `b(L, K)`.
    Relative {
        complex: String,
        #[arg(long)]
        rel: Option<String>,
    },
    /// `b(L, K)` to `b(L, J)` for `J ⊆ K ⊆ L`.
    Twosubs {
        complex: String,
        #[arg(long)]
        k: String,
        #[arg(long)]
        j: Option<String>,
    },
}

#[derive(Subcommand)]
enum DavisKind {
    /// The chamber `K_L` as a cube complex.
    Chamber { complex: String },
    /// `U(G, K_L)` for the canonical quotient, or a given one.
    Pl {
        complex: String,
        /// JSON file `{"degree": n, "images": {vertex: permutation}}`.
        #[arg(long)]
        quotient: Option<String>,
    },
    /// Abelian p-cover of a cube complex.
    Cover {
        #[arg(long)]
        base: String,
        #[arg(long)]
        p: u64,
        /// Number of `Z/p` factors.
        #[arg(long, conflicts_with = "exponents")]
        rank: Option<usize>,
        /// Exponents `k_i` for `Π Z/p^{k_i}`.
        #[arg(long)]
        exponents: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Q,
    Fp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, &cli.global).and_then(|out| commands::emit(out, &cli.global)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let d = e.diagnostic();
    eprintln!("{}", serde_json::to_string(&d).unwrap_or_else(|_| e.to_string()));
    ExitCode::from(d.exit_code as u8)
}
