use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "star",
    version,
    about = "Star transform symbols, injectivity, symmetry and numerics"
)]
pub struct Cli {
    /// Output format of the run report.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Seed for every randomized step (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// JSON file with defaults for `format`, `seed` and `threads`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual operator symbol, its class and Laplacian-power form.
    Dual {
        star: PathBuf,
        /// Expand through permanents instead of substitution.
        #[arg(long)]
        permanent: bool,
    },
    /// Exit 0 if the star transform is injective, 1 if not.
    Injective { star: PathBuf },
    /// Orthogonal symmetries of the branch configuration.
    Symmetry { star: PathBuf },
    /// Catalog branch configurations.
    Shapes(ShapesArgs),
    /// Isolated subspaces, Cayley lines and chart systems.
    #[command(subcommand)]
    Fano(FanoCommand),
    /// Forward model, inversion and null checks on a 2D grid.
    #[command(subcommand)]
    Sim(SimCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Polygon,
    Tetrahedron,
    Cube,
    Octahedron,
    Icosahedron,
    Dodecahedron,
}

#[derive(Debug, Args)]
pub struct ShapesArgs {
    #[arg(value_enum)]
    pub shape: Shape,
    /// Number of polygon vertices.
    #[arg(long)]
    pub m: Option<usize>,
    /// Emit the star symbol of `e_k` instead of the bare branch matrix.
    #[arg(long)]
    pub elementary: Option<usize>,
    /// Also write the artifact to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FanoCommand {
    /// Branch matrices from perfect matchings of `2n` branches.
    Matchings {
        #[arg(long)]
        n: usize,
    },
    /// The nine lines of the Cayley cubic.
    Cayley,
    /// Chart equations for subspaces in `{e_(m-1) = 0}`.
    Chart {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Solve numerically by multi-start Newton.
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = 500)]
        starts: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Sample a phantom and apply the star transform.
    Forward {
        #[arg(long)]
        star: PathBuf,
        #[arg(long)]
        phantom: PathBuf,
        #[arg(long)]
        n: usize,
        /// Field file; `.csv` and `.pgm` select text exports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a field from star transform data.
    Invert {
        #[arg(long)]
        star: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eps_reg: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report the error against this phantom.
        #[arg(long)]
        phantom: Option<PathBuf>,
        /// Report the error against this field file.
        #[arg(long, conflicts_with = "phantom")]
        against: Option<PathBuf>,
    },
    /// Null residual of the star, optionally relative to a reference star.
    Nullcheck {
        #[arg(long)]
        star: PathBuf,
        #[arg(long)]
        phantom: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        against: Option<PathBuf>,
    },
}

/// Config file schema: the global flags, all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl Settings {
    /// Flags override the config file, which overrides defaults.
    pub fn resolve(cli: &Cli, config: Config) -> Settings {
        Settings {
            format: cli.format.or(config.format).unwrap_or(Format::Json),
            seed: cli.seed.or(config.seed).unwrap_or(0),
            threads: cli.threads.or(config.threads),
        }
    }
}
