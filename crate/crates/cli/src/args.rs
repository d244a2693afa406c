use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::sweep::SweepSpec;

#[derive(Parser, Debug, Clone)]
#[command(name = "qberry", version, about = "Berry phases of two Ising-coupled spins driven by quantized field modes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sector eigenvalues: closed form against numerical diagonalization.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Composite-system Berry phases of the dressed levels.
    #[command(allow_negative_numbers = true)]
    Berry(BerryArgs),
    /// cos α and cos β against the spin-spin coupling for several photon numbers.
    #[command(allow_negative_numbers = true)]
    Figure1(Figure1Args),
    /// Phases under the two-mode rotation U(θ, φ).
    #[command(name = "two-mode", allow_negative_numbers = true)]
    TwoMode(TwoModeArgs),
    /// Mixed-state geometric phase of subsystem 1.
    #[command(allow_negative_numbers = true)]
    Mixed(MixedArgs),
    /// Adiabaticity ratio of a photon sector.
    #[command(allow_negative_numbers = true)]
    Adiabatic(AdiabaticArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Spin transition frequency ω.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Field mode frequency ν.
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Spin-field coupling λ.
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    /// Ising coupling J.
    #[arg(long, default_value_t = 0.0)]
    pub jc: f64,
    /// Photon number of the sector.
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Photons kept per mode.
    #[arg(long, default_value_t = qberry_core::DEFAULT_CUTOFF)]
    pub cutoff: usize,
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    /// Dressed level, 1 to 4.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub level: u8,
    /// Emit one row per level instead of only --level.
    #[arg(long, conflicts_with = "level")]
    pub all_levels: bool,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Grid over one variable, as VAR:START:STOP:COUNT with VAR one of jc, omega, nu, n, theta.
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerryMode {
    Analytic,
    Wilson,
    Connection,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct BerryArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub level: LevelArgs,
    /// Points on the loop.
    #[arg(long, default_value_t = qberry_core::LoopSpec::DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = BerryMode::Wilson)]
    pub mode: BerryMode,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct Figure1Args {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Photon numbers, one curve each.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    pub n_values: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct TwoModeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Photon number of the second mode.
    #[arg(long, default_value_t = 0)]
    pub nprime: usize,
    /// Polar angle θ of the two-mode rotation.
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[command(flatten)]
    pub level: LevelArgs,
    #[arg(long, default_value_t = qberry_core::LoopSpec::DEFAULT_TWO_MODE_STEPS)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct MixedArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub level: LevelArgs,
    #[arg(long, default_value_t = qberry_core::LoopSpec::DEFAULT_STEPS)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct AdiabaticArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Precession rate ω_p of the field phase, φ = ω_p t.
    #[arg(long, default_value_t = 0.01)]
    pub omega_prec: f64,
    /// Central-difference step in φ.
    #[arg(long, default_value_t = qberry_core::geomphase::DEFAULT_FD_STEP)]
    pub fd_step: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Spectrum(a) => &a.output,
            Command::Berry(a) => &a.output,
            Command::Figure1(a) => &a.output,
            Command::TwoMode(a) => &a.output,
            Command::Mixed(a) => &a.output,
            Command::Adiabatic(a) => &a.output,
        }
    }
}
