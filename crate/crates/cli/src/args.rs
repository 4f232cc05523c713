use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "cfie", version, about = "Boundary-element scattering by perfectly conducting surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an icosphere mesh in OFF format.
    MeshGen(MeshGenArgs),
    /// Solve one scattering problem and append a CSV row.
    Solve(SolveArgs),
    /// Solve over a range of wavenumbers on a fixed mesh.
    Sweep(SweepArgs),
    /// Solve on several icosphere levels and fit the convergence order.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
pub struct MeshGenArgs {
    #[arg(long)]
    pub subdiv: u32,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

/// Options shared by every solving command. Each one may also come from the
/// config file; flags win.
#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// key=value settings file, `#` starts a comment.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coupling of the classical combined field equation.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Relative GMRES residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// CSV output file; rows go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for assembly and matrix products.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Score the solution against the Mie series of the unit sphere.
    #[arg(long)]
    pub mie_reference: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, conflicts_with = "subdiv")]
    pub mesh: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<u32>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, conflicts_with = "subdiv")]
    pub mesh: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<u32>,
    /// Comma-separated list, e.g. `regcfie,efie`.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub k_min: Option<f64>,
    #[arg(long)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub k_steps: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    /// Comma-separated icosphere levels, at least two.
    #[arg(long)]
    pub subdiv_list: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}
