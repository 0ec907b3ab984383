use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gaussmem",
    version,
    about = "Classical capacity of Gaussian thermal memory channels",
    args_override_self = true
)]
pub struct Cli {
    /// Flat key=value file mirroring the flags; command-line flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic capacity in nats per use.
    Capacity(CapacityArgs),
    /// Finite-n eigenvalues (with --n) or the asymptotic symbol η(z).
    Spectrum(SpectrumArgs),
    /// Optimal photon distribution N(z).
    Waterfill(WaterfillArgs),
    /// Mode-coefficient simulation checked against closed forms.
    Simulate(SimulateArgs),
    /// Capacity of the correlated additive-noise limit.
    Additive(AdditiveArgs),
    /// Evaluate quantities over a parameter range.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Transmissivity (< 1) or gain (> 1).
    #[arg(long)]
    pub kappa: f64,
    /// Memory transmissivity in [0, 1].
    #[arg(long)]
    pub mu: f64,
    /// Thermal photons of the environment.
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Mean input photons per use.
    #[arg(long)]
    pub energy: f64,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Number of channel uses; omit for the asymptotic symbol.
    #[arg(long)]
    pub n: Option<usize>,
    /// Samples of z in [0, 2π] for the symbol.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct WaterfillArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long)]
    pub energy: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    #[value(alias = "closed_form")]
    ClosedForm,
    Bogoliubov,
    All,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Check::All)]
    pub check: Check,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct AdditiveArgs {
    #[arg(long)]
    pub mu: f64,
    /// Added noise photons N_C.
    #[arg(long)]
    pub nc: f64,
    #[arg(long)]
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    Nbar,
    Kappa,
    Mu,
    Energy,
    #[value(name = "n_uses", alias = "n-uses")]
    NUses,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Capacity,
    #[value(name = "z0_fraction", alias = "z0-fraction")]
    Z0Fraction,
    #[value(name = "n_of_z", alias = "n-of-z")]
    NOfZ,
    Spectrum,
    #[value(name = "e_crit", alias = "e-crit")]
    ECrit,
    #[value(name = "n_crit", alias = "n-crit")]
    NCrit,
}

impl Quantity {
    /// Quantities that emit several rows per grid point.
    pub fn is_long(self) -> bool {
        matches!(self, Quantity::NOfZ | Quantity::Spectrum)
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub var: SweepVar,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    /// Comma-separated list.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub quantity: Vec<Quantity>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
    #[arg(long)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long)]
    pub tol: Option<f64>,
}
