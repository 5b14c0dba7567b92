//! Command-line front end: argument grammar, command dispatch and exit codes.

pub mod docs;
pub mod input;
pub mod plot;
pub mod verify;

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stabwalls::Error;

pub use commands::run;

/// Exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// `verify` ran but some suite failed.
pub const EXIT_VERIFY_FAILED: u8 = 1;
/// Malformed input, bad usage or I/O failure.
pub const EXIT_VALIDATION: u8 = 2;
/// Well-formed input outside the domain of the requested computation.
pub const EXIT_DOMAIN: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Domain(String),
    VerifyFailed,
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::VerifyFailed => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "stabwalls",
    version,
    about = "Exact wall-and-chamber computations for stability conditions on surfaces"
)]
pub struct Cli {
    /// Output format; json by default, svg for `plot`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute walls.
    Walls {
        #[command(subcommand)]
        cmd: WallsCmd,
    },
    /// Run the identity suites and report pass/fail per suite.
    Verify(VerifyArgs),
    /// Render walls as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Bundled surface: p2, p1xp1 or blowup_p2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Surface lattice JSON file.
    #[arg(long, value_name = "FILE")]
    pub surface: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProducerArgs {
    /// Producer class `r,c1...,ch2` (repeatable).
    #[arg(long = "producer", value_name = "CH", required = true, allow_hyphen_values = true)]
    pub producers: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum WallsCmd {
    /// Lines in the orthogonal (s, t) quadrant `-K/2 + L + sH + tH'`.
    Quadrant {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Class `r,c1...,ch2` with nonzero rank.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// The directions H and H' (exactly two).
        #[arg(long = "dir", value_name = "DIVISOR", num_args = 1, required = true, allow_hyphen_values = true)]
        dirs: Vec<String>,
        /// Twist L.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
        #[command(flatten)]
        producers: ProducerArgs,
    },
    /// Hyperplanes in the orthogonal cone family `-K/2 + L + Σ a_k H_k`.
    Cone {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long = "dir", value_name = "DIVISOR", required = true, allow_hyphen_values = true)]
        dirs: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
        #[command(flatten)]
        producers: ProducerArgs,
    },
    /// Circles in the Maciocia (x, y) half-plane.
    Maciocia {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// The polarization H.
        #[arg(long = "dir", value_name = "DIVISOR", allow_hyphen_values = true)]
        dir: String,
        /// A class G with G.H = 0, needed when u0 is nonzero.
        #[arg(long = "orth", value_name = "DIVISOR", allow_hyphen_values = true)]
        orth: Option<String>,
        /// Offset along G.
        #[arg(long, allow_hyphen_values = true)]
        u0: Option<String>,
        #[command(flatten)]
        producers: ProducerArgs,
    },
    /// Lines in the (s, t) chart `D = sH' + tH` of a 1-dimensional class.
    Onedim {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Curve class C.
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Euler characteristic of the class.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        /// H' then H.
        #[arg(long = "dir", value_name = "DIVISOR", required = true, allow_hyphen_values = true)]
        dirs: Vec<String>,
        #[command(flatten)]
        producers: ProducerArgs,
    },
    /// Twisted Gieseker wall position t along H⁺.
    Gieseker {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        hplus: String,
        #[command(flatten)]
        producers: ProducerArgs,
    },
    /// Gieseker walls from rank-2 destabilizers `0 -> L -> E -> I_Z(-L) -> 0`.
    Enumerate(EnumerateArgs),
    /// Ordered crossings of candidate walls along a segment.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Rank-2 class `2,c1...,ch2`.
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    /// Box bound B on the coordinates of L; defaults to the preset's value.
    #[arg(long = "box")]
    pub box_bound: Option<u32>,
    /// Cone generators; default: the preset's cone or the ample generators.
    #[arg(long = "dir", value_name = "DIVISOR", allow_hyphen_values = true)]
    pub dirs: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family kind, e.g. orthogonal-quadrant, maciocia-plane, onedim-quadrant.
    #[arg(long)]
    pub family: Option<String>,
    /// Family JSON file (instead of --family and the flags below).
    #[arg(long, value_name = "FILE")]
    pub family_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    #[arg(long = "dir", value_name = "DIVISOR", allow_hyphen_values = true)]
    pub dirs: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<String>,
    /// Extra family parameters, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub extra: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub polarization: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Segment start, comma-separated parameters.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    /// Segment end.
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    /// Candidate producer `r,c1...,ch2` (repeatable).
    #[arg(long = "candidate", value_name = "CH", required = true, allow_hyphen_values = true)]
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Surface to check; all presets when omitted.
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Also run a named scenario (blowdown).
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PlotMode {
    /// Gieseker wall rays in a rank-2 Néron–Severi plane.
    AmpleSlice,
    /// Wall lines in an (s, t) quadrant.
    Quadrant,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, value_enum)]
    pub mode: PlotMode,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// 1-dimensional class for quadrant mode, with --chi.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<String>,
    #[arg(long = "box")]
    pub box_bound: Option<u32>,
    #[arg(long = "dir", value_name = "DIVISOR", allow_hyphen_values = true)]
    pub dirs: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub twist: Option<String>,
    #[arg(long = "producer", value_name = "CH", allow_hyphen_values = true)]
    pub producers: Vec<String>,
    /// Side of the plotted (s, t) square; fitted to the walls by default.
    #[arg(long)]
    pub extent: Option<String>,
}
