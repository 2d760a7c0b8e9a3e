use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Certified cusp and singularity analysis of planar 3-RPR manipulators.
#[derive(Debug, Parser)]
#[command(name = "cuspidal", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Geometry file (`key = value` lines); the benchmark geometry is used
    /// when neither a file nor inline geometry flags are given
    #[arg(long, global = true, value_name = "FILE")]
    pub geometry: Option<PathBuf>,
    #[command(flatten)]
    pub inline: InlineGeometry,
    /// Output directory
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Smallest box width, relative to the search box, before giving up
    #[arg(long, global = true, default_value_t = 1e-9, value_name = "W")]
    pub min_width: f64,
    /// Deepest bisection level before giving up
    #[arg(long, global = true, default_value_t = 64, value_name = "D")]
    pub max_depth: usize,
    /// Log progress to stderr
    #[arg(long, short, global = true)]
    pub verbose: bool,
    /// Also write the cusp system of the geometry to `system.txt`
    #[arg(long, global = true)]
    pub dump_system: bool,
    /// Also write the exact geometry to `geometry.cfg`
    #[arg(long, global = true)]
    pub dump_config: bool,
}

/// Geometry given on the command line; unset keys take benchmark values.
#[derive(Debug, Args, Default)]
pub struct InlineGeometry {
    #[arg(long = "a2x", global = true, value_name = "X")]
    pub a2x: Option<String>,
    #[arg(long = "a3x", global = true, value_name = "X")]
    pub a3x: Option<String>,
    #[arg(long = "a3y", global = true, value_name = "Y")]
    pub a3y: Option<String>,
    #[arg(long, global = true, value_name = "LEN")]
    pub d1: Option<String>,
    #[arg(long, global = true, value_name = "LEN")]
    pub d2: Option<String>,
    #[arg(long, global = true, value_name = "LEN")]
    pub d3: Option<String>,
    /// `+` for a counterclockwise platform B1 B2 B3, `-` for clockwise
    #[arg(long, global = true, value_name = "SIGN", allow_hyphen_values = true)]
    pub beta_sign: Option<String>,
}

impl InlineGeometry {
    pub fn is_empty(&self) -> bool {
        [&self.a2x, &self.a3x, &self.a3y, &self.d1, &self.d2, &self.d3, &self.beta_sign]
            .iter()
            .all(|v| v.is_none())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified assembly modes for one joint vector
    Dk(DkArgs),
    /// Certified cusp configurations of the slice `r1 = const`
    Cusps(CuspsArgs),
    /// Singular curves and cusps of a slice, as CSV and SVG
    Slice(SliceArgs),
    /// Cusp count as a function of r1, with bracketed count changes
    Profile(ProfileArgs),
    /// Leg lengths of a platform pose
    Ik(IkArgs),
}

#[derive(Debug, Args)]
pub struct DkArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub r2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub r3: String,
}

#[derive(Debug, Args)]
pub struct CuspsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r1: String,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub r1: String,
    /// Grid nodes per axis
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    /// Lower end of both the r2 and r3 axes
    #[arg(long, default_value_t = 0.0)]
    pub min: f64,
    /// Upper end of both the r2 and r3 axes
    #[arg(long, default_value_t = 35.0)]
    pub max: f64,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// `lo:hi`
    #[arg(long)]
    pub range: String,
    #[arg(long, default_value_t = 0.02)]
    pub step: f64,
    /// Width to which each count change is bracketed
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct IkArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub b1x: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b1y: f64,
    /// Platform angle in degrees
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["tx", "ty"])]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "ty")]
    pub tx: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "tx")]
    pub ty: Option<f64>,
}
