use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "otto-spin",
    version,
    about = "Quantum Otto cycle on a two-qubit Heisenberg working medium"
)]
pub struct Cli {
    /// Settings file with one `key=value` per line; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy ledger and operating mode of one cycle.
    Analyze(AnalyzeArgs),
    /// Operating-mode map over a control window.
    Sweep(SweepArgs),
    /// Mode boundaries of a family.
    Boundaries(BoundariesArgs),
    /// Local extrema of the total work.
    Optimize(OptimizeArgs),
    /// Maximum-output three-level engines for a list of hot-bath temperatures.
    Table1(Table1Args),
    /// Re-run a command from the provenance block of an earlier output.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    ThreeLevel,
    R2const,
    Jz,
}

impl FamilyKind {
    pub fn flag_value(self) -> &'static str {
        match self {
            FamilyKind::ThreeLevel => "three-level",
            FamilyKind::R2const => "r2const",
            FamilyKind::Jz => "jz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl Format {
    pub fn flag_value(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "text",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BathArgs {
    /// Cold bath temperature.
    #[arg(long, allow_negative_numbers = true)]
    pub tc: Option<f64>,
    /// Hot bath temperature.
    #[arg(long, allow_negative_numbers = true)]
    pub th: Option<f64>,
}

/// Spectrum inputs. A bare flag applies to both endpoints; `-i` / `-f`
/// variants set the cold-side (initial) or hot-side (final) value.
#[derive(Debug, Clone, Default, Args)]
#[command(next_help_heading = "Spectrum")]
pub struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub jz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jz_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jz_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r1_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r1_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r2_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r2_f: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b1_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b1_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b2_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jx: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jx_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jx_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jy: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jy_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub jy_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dz_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dz_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gz_i: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gz_f: Option<f64>,
}

pub const SEVEN_PARAM_FLAGS: [&str; 6] = ["b1", "b2", "jx", "jy", "dz", "gz"];

impl SpectrumArgs {
    /// Every flag that was set, as `(flag name, value)`.
    pub fn given(&self) -> Vec<(&'static str, f64)> {
        let all = [
            ("jz", self.jz),
            ("jz-i", self.jz_i),
            ("jz-f", self.jz_f),
            ("r1", self.r1),
            ("r1-i", self.r1_i),
            ("r1-f", self.r1_f),
            ("r2", self.r2),
            ("r2-i", self.r2_i),
            ("r2-f", self.r2_f),
            ("b1", self.b1),
            ("b1-i", self.b1_i),
            ("b1-f", self.b1_f),
            ("b2", self.b2),
            ("b2-i", self.b2_i),
            ("b2-f", self.b2_f),
            ("jx", self.jx),
            ("jx-i", self.jx_i),
            ("jx-f", self.jx_f),
            ("jy", self.jy),
            ("jy-i", self.jy_i),
            ("jy-f", self.jy_f),
            ("dz", self.dz),
            ("dz-i", self.dz_i),
            ("dz-f", self.dz_f),
            ("gz", self.gz),
            ("gz-i", self.gz_i),
            ("gz-f", self.gz_f),
        ];
        all.into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .collect()
    }
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "Window")]
pub struct WindowArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "Output")]
pub struct OutputArgs {
    /// Output file, written atomically; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Read the spectrum flags as coordinates of a family's control plane.
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    #[command(flatten)]
    pub baths: BathArgs,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Values within this distance of zero count as zero when classifying.
    #[arg(long, help_heading = "Numerics")]
    pub zero_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[command(flatten)]
    pub baths: BathArgs,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Grid nodes per axis.
    #[arg(long, help_heading = "Numerics")]
    pub resolution: Option<usize>,
    #[arg(long, help_heading = "Numerics")]
    pub zero_tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundariesArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[command(flatten)]
    pub baths: BathArgs,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Samples per boundary curve.
    #[arg(long, help_heading = "Numerics")]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[command(flatten)]
    pub baths: BathArgs,
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Coarse scan nodes per axis.
    #[arg(long, help_heading = "Numerics")]
    pub grid: Option<usize>,
    /// Coordinate tolerance of the refinement.
    #[arg(long, help_heading = "Numerics")]
    pub refine_tol: Option<f64>,
    #[arg(long, help_heading = "Numerics")]
    pub zero_tol: Option<f64>,
    /// Search for maxima of W instead of minima.
    #[arg(long, help_heading = "Numerics")]
    pub maximize: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    #[arg(long, allow_negative_numbers = true)]
    pub tc: Option<f64>,
    /// Comma-separated hot-bath temperatures.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub th: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// A JSON output or a `.provenance.json` sidecar.
    pub from: PathBuf,
    /// Where to write the regenerated output; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
