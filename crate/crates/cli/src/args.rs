use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "heiskor", version, about = "Bessel, Korányi-kernel and Heisenberg projection checks")]
pub struct Cli {
    /// Output file; stdout when omitted. A `<output>.meta.json` sidecar is
    /// written next to it.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Evaluate K_ν(x) or I_ν(x).
    Bessel(BesselArgs),
    /// Fourier transform of the Korányi kernel at one frequency.
    Fhat(FhatArgs),
    /// Grid check of the positivity hypotheses for the Bessel profile.
    Tuck(TuckArgs),
    /// Scan of f̂_s / f_{3-s} over a logarithmic frequency grid.
    BoundScan(BoundScanArgs),
    /// Energy / Fourier-side comparison for mollified grid measures.
    Duality(DualityArgs),
    /// Fuzz the Heisenberg group identities.
    HeisCheck(HeisCheckArgs),
    /// Sublevel-set exponents of the chord phase for random point pairs.
    Sublevel(SublevelArgs),
    /// Box-counting dimensions of an IFS set and its vertical projections.
    ProjectDim(ProjectDimArgs),
    /// Riesz energy and Frostman constant of a sample measure.
    Energy(EnergyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bessel(_) => "bessel",
            Command::Fhat(_) => "fhat",
            Command::Tuck(_) => "tuck",
            Command::BoundScan(_) => "bound-scan",
            Command::Duality(_) => "duality",
            Command::HeisCheck(_) => "heis-check",
            Command::Sublevel(_) => "sublevel",
            Command::ProjectDim(_) => "project-dim",
            Command::Energy(_) => "energy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BesselKind {
    K,
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    /// Regime dispatch.
    Auto,
    /// Dispatch plus cross-check against every other applicable method.
    Verified,
    Series,
    Basset,
    Asymptotic,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct BesselArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, value_enum, default_value_t = BesselKind::K)]
    pub function: BesselKind,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct FhatArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xi1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xi2: f64,
    /// Also run the direct two-dimensional quadrature.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle truncation N of the t-integral.
    #[arg(long, default_value_t = 160.0)]
    pub truncation: f64,
    /// Oracle certification target, relative.
    #[arg(long, default_value_t = 1e-4)]
    pub rel_tol: f64,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct TuckArgs {
    #[arg(long)]
    pub s: f64,
    /// Grid points per decade on [1e-4, 10].
    #[arg(long, default_value_t = 40)]
    pub per_decade: usize,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct BoundScanArgs {
    #[arg(long)]
    pub s: f64,
    /// Decade range `lo:hi` for both |ξ₁| and |ξ₂|.
    #[arg(long, default_value = "-2:2", allow_hyphen_values = true)]
    pub grid_decades: DecadeRange,
    #[arg(long, default_value_t = 8)]
    pub per_decade: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityChoice {
    All,
    SingleBump,
    TwoBumps,
    AnisotropicOffset,
}

impl DensityChoice {
    pub fn key(self) -> Option<&'static str> {
        match self {
            DensityChoice::All => None,
            DensityChoice::SingleBump => Some("single_bump"),
            DensityChoice::TwoBumps => Some("two_bumps"),
            DensityChoice::AnisotropicOffset => Some("anisotropic_offset"),
        }
    }
}

#[derive(Debug, clap::Args, Serialize)]
pub struct DualityArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = DensityChoice::All)]
    pub density: DensityChoice,
    /// Radial frequency cutoff; chosen from the mollifier width when omitted.
    #[arg(long)]
    pub freq_cutoff: Option<f64>,
    /// Allowed relative excess of lhs over rhs.
    #[arg(long, default_value_t = 1e-6)]
    pub slack: f64,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct HeisCheckArgs {
    #[arg(long, default_value_t = 100_000)]
    pub fuzz: usize,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct SublevelArgs {
    #[arg(long, default_value_t = 5)]
    pub pairs: usize,
    /// Uniform θ samples per sublevel measure.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value = "-5:-1", allow_hyphen_values = true)]
    pub eps_decades: DecadeRange,
    #[arg(long, default_value_t = 2)]
    pub per_decade: usize,
    /// Smallest acceptable fitted exponent.
    #[arg(long, default_value_t = 0.4)]
    pub min_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetChoice {
    /// Two maps of ratio 1/3 on the horizontal axis.
    Cantor,
    /// Two maps of ratio 1/2 on the horizontal axis.
    Segment,
    /// Two maps of ratio 1/√2 on the t-axis.
    VerticalAxis,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct ProjectDimArgs {
    #[arg(long, value_enum, default_value_t = SetChoice::Cantor)]
    pub set: SetChoice,
    #[arg(long, default_value_t = 100_000)]
    pub points: usize,
    /// Box sizes `hi:lo:count`, log-spaced.
    #[arg(long)]
    pub scales: Option<ScaleRange>,
    /// Number of angles θ_k = (k + ½)π/n.
    #[arg(long, default_value_t = 16)]
    pub thetas: usize,
    /// Allowed shortfall below the floor min{(1 + dim)/2, 2}.
    #[arg(long, default_value_t = 0.15)]
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricChoice {
    Koranyi,
    Parabolic,
    VerticalPlane,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct EnergyArgs {
    /// `segment` uses equally spaced points; the others sample the IFS.
    #[arg(long, value_enum, default_value_t = SetChoice::Segment)]
    pub set: SetChoice,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = MetricChoice::Koranyi)]
    pub metric: MetricChoice,
    /// Frostman radii `hi:lo:count`, log-spaced.
    #[arg(long, default_value = "0.3:0.01:6")]
    pub radii: ScaleRange,
}

/// `lo:hi` in powers of ten.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecadeRange {
    pub lo: i32,
    pub hi: i32,
}

impl FromStr for DecadeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form lo:hi"))?;
        let lo: i32 = lo.trim().parse().map_err(|_| format!("bad decade `{lo}`"))?;
        let hi: i32 = hi.trim().parse().map_err(|_| format!("bad decade `{hi}`"))?;
        if lo >= hi {
            return Err(format!("decade range {lo}:{hi} is empty"));
        }
        Ok(Self { lo, hi })
    }
}

impl DecadeRange {
    pub fn values(self, per_decade: usize) -> Vec<f64> {
        let n = (self.hi - self.lo) as usize * per_decade;
        (0..=n)
            .map(|k| 10f64.powf(self.lo as f64 + k as f64 / per_decade as f64))
            .collect()
    }
}

/// `hi:lo:count`, log-spaced from `hi` down to `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleRange {
    pub hi: f64,
    pub lo: f64,
    pub count: usize,
}

impl FromStr for ScaleRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [hi, lo, count] = parts[..] else {
            return Err(format!("`{s}` is not of the form hi:lo:count"));
        };
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad scale `{hi}`"))?;
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad scale `{lo}`"))?;
        let count: usize = count.trim().parse().map_err(|_| format!("bad count `{count}`"))?;
        if !(hi > lo && lo > 0.0 && count >= 2) {
            return Err(format!("scale range `{s}` needs hi > lo > 0 and count ≥ 2"));
        }
        Ok(Self { hi, lo, count })
    }
}

impl ScaleRange {
    pub fn values(self) -> Vec<f64> {
        let (a, b) = (self.hi.log10(), self.lo.log10());
        (0..self.count)
            .map(|k| 10f64.powf(a + (b - a) * k as f64 / (self.count - 1) as f64))
            .collect()
    }
}
