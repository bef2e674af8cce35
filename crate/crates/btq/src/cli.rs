//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::export::Format;

/// Seed used by randomized checks unless `--seed` is given.
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Parser)]
#[command(name = "btq", version, about = "Bruhat-Tits buildings, bundle quotients and their homology over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each subcommand documents which ones it emits.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Validate the configuration and stop.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

/// A curve given by flags or by a configuration file.
#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// JSON curve configuration (see schema/config.schema.json).
    #[arg(long, conflicts_with_all = ["q", "punctures", "weierstrass"])]
    pub config: Option<PathBuf>,
    /// `p1` or `elliptic`.
    #[arg(long, default_value = "p1")]
    pub curve: String,
    /// Order of the base field.
    #[arg(long)]
    pub q: Option<u32>,
    /// Comma-separated punctures: places such as `t,t^2+1,inf` on p1, or
    /// `O` and `x:y` on an elliptic curve.
    #[arg(long)]
    pub punctures: Option<String>,
    /// Comma-separated Weierstrass coefficients `a4,a6` or `a1,a2,a3,a4,a6`.
    #[arg(long, allow_hyphen_values = true)]
    pub weierstrass: Option<String>,
    /// Bound on unit exponents in the unit search.
    #[arg(long)]
    pub unit_bound: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball in the Bruhat-Tits tree of one place (json, dot).
    TreeBall {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "t")]
        place: String,
        #[arg(long)]
        radius: u64,
    },
    /// Ball in the product building of the punctures of a p1 configuration
    /// (json, dot).
    BuildingBall {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        radius: u64,
    },
    /// Picard group and units of a punctured curve (json).
    Pic {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Orbits of the Picard group under inversion (json).
    Kummer {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Bundle classes of building vertices with stabilizers and link actions
    /// (json, csv).
    Classify {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 2)]
        radius: u64,
    },
    /// Orbit representatives of cells near the base vertex (json, dot).
    Quotient {
        #[command(flatten)]
        curve: CurveArgs,
        /// Number of punctures when `--punctures` is omitted (inf, t, t+1, ...).
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        /// `gl2` or `sl2`.
        #[arg(long, default_value = "sl2")]
        group: String,
    },
    /// Model quotient of Z^s by unit translations and inversions (json, csv).
    Model {
        #[command(flatten)]
        curve: CurveArgs,
        /// Synthetic unit lattice: columns separated by `;`, entries by `,`.
        #[arg(long, allow_hyphen_values = true)]
        lattice: Option<String>,
        /// T, ST, N or SN.
        #[arg(long, default_value = "T")]
        flavor: String,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// E¹ and E² pages of the isotropy spectral sequence (json, csv).
    E1Page {
        /// `point`, `tree-ball` or `points`.
        #[arg(long, default_value = "tree-ball")]
        complex: String,
        /// `gl2`, `sl2`, `normalizer` or `cyclic:m`.
        #[arg(long, default_value = "gl2")]
        group: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Radius for `tree-ball`.
        #[arg(long, default_value_t = 1)]
        radius: u64,
        /// Top point-tuple degree for `points`.
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value = "Z")]
        coeff: String,
        /// Highest group-homology degree.
        #[arg(long, default_value_t = 2)]
        q_max: usize,
    },
    /// Homology of a chain complex in the shared JSON format (csv, json).
    Homology {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// Complex of points on P¹(F_q) (json, csv).
    PointsComplex {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        max_degree: usize,
        /// `plain` or `alternating`.
        #[arg(long, default_value = "plain")]
        variant: String,
        /// Attach a report: `acyclicity`, `de` or `rp1`.
        #[arg(long)]
        report: Option<String>,
    },
    /// Run a named verification suite and print a TAP report.
    Verify {
        /// Suite name, or `all`.
        #[arg(default_value = "all")]
        suite: String,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::TreeBall { .. } => "tree-ball",
            Command::BuildingBall { .. } => "building-ball",
            Command::Pic { .. } => "pic",
            Command::Kummer { .. } => "kummer",
            Command::Classify { .. } => "classify",
            Command::Quotient { .. } => "quotient",
            Command::Model { .. } => "model",
            Command::E1Page { .. } => "e1-page",
            Command::Homology { .. } => "homology",
            Command::PointsComplex { .. } => "points-complex",
            Command::Verify { .. } => "verify",
        }
    }
}
