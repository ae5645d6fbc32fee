use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "photon-clusters",
    version,
    about = "Photon-cluster statistics of blackbody radiation"
)]
pub struct Cli {
    /// Defaults file with `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-count, cluster-count or cluster-size probabilities.
    Pmf(PmfArgs),
    /// Rank-resolved cavity spectra per frequency or per wavelength.
    Spectrum(SpectrumArgs),
    /// Energy and photon fractions, radiation constants, λ-law comparison.
    Constants(OutputArgs),
    /// Monte Carlo photon counts with distances to the exact law.
    Sample(SampleArgs),
    /// Run every cross-check and report pass/fail.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PmfKind {
    /// Photons in volume τ.
    Photons,
    /// Clusters in volume τ.
    Clusters,
    /// Photons per cluster.
    Sizes,
}

#[derive(Debug, Clone, Args)]
pub struct PmfArgs {
    /// Phase-space volume in coherence volumes.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Mean photons per coherence volume.
    #[arg(long)]
    pub w: Option<f64>,
    /// Mode frequency in Hz; needs --temp.
    #[arg(long)]
    pub nu: Option<f64>,
    /// Temperature in K; needs --nu.
    #[arg(long)]
    pub temp: Option<f64>,
    #[arg(long = "n-max")]
    pub n_max: Option<u64>,
    #[arg(long, value_enum)]
    pub kind: Option<PmfKind>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Nu,
    Lambda,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub temp: Option<f64>,
    /// `M` for ranks 1..M, `all` for as many ranks as the total needs, or `total`.
    #[arg(long)]
    pub rank: Option<String>,
    #[arg(long, value_enum)]
    pub space: Option<Space>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Grid start in Hz or m.
    #[arg(long)]
    pub min: Option<f64>,
    /// Grid end in Hz or m.
    #[arg(long)]
    pub max: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Compound,
    Direct,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub level: Option<Level>,
    #[command(flatten)]
    pub output: OutputArgs,
}
