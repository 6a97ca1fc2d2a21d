//! Command-line flags.

use amflow_core::{PacketFamily, ReflectionMode, SpinOutcome};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "amflow",
    version,
    about = "Angular-momentum transfer to a rotatable spin-dependent wall"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Post-selected angular-momentum shift of the rotor wall.
    Shift(ShiftArgs),
    /// Per-period flux into a wall present for one period only.
    Flux(FluxArgs),
    /// Linear momentum handed to a wall with a position wavepacket.
    Momentum(MomentumArgs),
    /// Survival probability and shift along a ladder of N.
    Sweep(SweepArgs),
    /// Backward-evolution check of the pre-selected wall state.
    Backward(BackwardArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Postselect {
    #[value(name = "up_x")]
    UpX,
    #[value(name = "down_x")]
    DownX,
}

impl From<Postselect> for SpinOutcome {
    fn from(p: Postselect) -> Self {
        match p {
            Postselect::UpX => SpinOutcome::UpX,
            Postselect::DownX => SpinOutcome::DownX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RaisedCosine,
    TruncatedGaussian,
}

impl From<Family> for PacketFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::RaisedCosine => PacketFamily::RaisedCosine,
            Family::TruncatedGaussian => PacketFamily::TruncatedGaussian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reflection {
    OncePerTransit,
    PerPeriod,
}

impl From<Reflection> for ReflectionMode {
    fn from(r: Reflection) -> Self {
        match r {
            Reflection::OncePerTransit => ReflectionMode::OncePerTransit,
            Reflection::PerPeriod => ReflectionMode::PerPeriod,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpChannel {
    /// `Left` is untouched in the transparent channel.
    Lossless,
    /// Physical leakage `cos eps` per period into escaped modes.
    Leaky,
}

/// Flags shared by every subcommand. Unset values take per-command defaults.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    #[arg(long)]
    pub n_rounds: Option<usize>,
    /// Partition parameter; defaults to pi / 2N.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Rotor packet half-width (radians).
    #[arg(long)]
    pub delta_theta: Option<f64>,
    /// Rotor grid size (power of two).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value = "up_x")]
    pub postselect: Postselect,
    #[arg(long, value_enum, default_value = "raised-cosine")]
    pub family: Family,
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Write a plot here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Reserved; every run is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Lossless transparent channel (`cos^{2N} eps -> 1`).
    #[arg(long)]
    pub ideal: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ShiftArgs {
    #[command(flatten)]
    pub common: Common,
    /// Rotor packet center (radians).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FluxArgs {
    #[command(flatten)]
    pub common: Common,
    /// Probe only this period.
    #[arg(long)]
    pub wall_index: Option<usize>,
    #[arg(long, value_enum, default_value = "lossless")]
    pub up_channel: UpChannel,
}

#[derive(Debug, Clone, Args)]
pub struct MomentumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Wall packet half-width.
    #[arg(long, default_value_t = 1e-3)]
    pub delta_x: f64,
    /// Particle momentum; defaults to the value giving `--phase-budget`.
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Target `2N p0 dx_w` when `--p0` is not given.
    #[arg(long, default_value_t = 0.01)]
    pub phase_budget: f64,
    /// Wall position grid size.
    #[arg(long, default_value_t = 1024)]
    pub wall_grid: usize,
    #[arg(long, value_enum, default_value = "once-per-transit")]
    pub reflection_mode: Reflection,
    /// Four-rung ladder halving dtheta and dx_w each rung.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
    pub n_ladder: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BackwardArgs {
    #[command(flatten)]
    pub common: Common,
}
