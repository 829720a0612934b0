use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "chromatope", version, about = "Colored polytopes, covering theorems and Voronoi-Hex")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, validate, color and list faces of polytopes.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Cohomology ring computations.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Covering-theorem verification and fuzzing.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// The Voronoi-Hex game.
    #[command(subcommand)]
    Hex(HexCmd),
}

#[derive(Debug, Args, Clone)]
pub struct Source {
    /// Builder descriptor, e.g. `cube:3`, `hexagon`, `cube:3/trunc:0`.
    #[arg(long, conflicts_with = "input")]
    pub builder: Option<String>,
    /// Polytope JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Output {
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PolytopeCmd {
    /// Print the polytope as JSON.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Check simplicity and the realization.
    Validate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Find a proper facet coloring.
    Color {
        #[command(flatten)]
        source: Source,
        /// Number of colors; the chromatic number when absent.
        #[arg(long)]
        colors: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// List the faces of one dimension.
    Faces {
        #[command(flatten)]
        source: Source,
        /// Face dimension.
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args, Clone)]
pub struct RingSource {
    #[command(flatten)]
    pub source: Source,
    /// Facet colors, comma separated; otherwise the builder's coloring or
    /// a search for `n` then `n+1` colors.
    #[arg(long, value_delimiter = ',')]
    pub coloring: Option<Vec<usize>>,
    /// Sign vector for an `(n+1)`-coloring, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub signs: Option<Vec<i64>>,
}

#[derive(Debug, Subcommand)]
pub enum RingCmd {
    /// Check the ring identity suite.
    CheckIdentities {
        #[command(flatten)]
        ring: RingSource,
        #[command(flatten)]
        output: Output,
    },
    /// Integrate a top-degree class.
    Integrate {
        #[command(flatten)]
        ring: RingSource,
        /// Ring element, e.g. `(v1+v2+v3)^3` or `3*v1*v2 - t1^2`.
        #[arg(long)]
        class: String,
        /// Reference vertex.
        #[arg(long)]
        vertex: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Reduce a class to normal form.
    NormalForm {
        #[command(flatten)]
        ring: RingSource,
        #[arg(long)]
        class: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Lebesgue,
    Kkm,
    Karasev,
    General,
    QuantitativeLebesgue,
    QuantitativeKkm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzTheorem {
    Lebesgue,
    Kkm,
    Karasev,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzProfile {
    Partition,
    ShiftedBricks,
    VoronoiMerge,
    RandomGrowth,
}

#[derive(Debug, Subcommand)]
pub enum CoverCmd {
    /// Look for a witness in a cover file.
    Verify {
        /// Cover JSON file.
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, value_enum)]
        theorem: CheckKind,
        /// Face dimension or color, depending on the theorem.
        #[arg(long)]
        k: Option<usize>,
        /// Prescribed vertex for the quantitative Lebesgue check.
        #[arg(long)]
        vertex: Option<usize>,
        /// Facet colors, comma separated.
        #[arg(long, value_delimiter = ',')]
        coloring: Option<Vec<usize>>,
        #[command(flatten)]
        output: Output,
    },
    /// Check seeded random covers.
    Fuzz {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "lebesgue")]
        theorem: FuzzTheorem,
        #[arg(long, value_enum, default_value = "partition")]
        profile: FuzzProfile,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid resolution per axis.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        coloring: Option<Vec<usize>>,
        /// Directory for absence repro files.
        #[arg(long, default_value = "repro")]
        repro_dir: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args, Clone)]
pub struct BoardArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_delimiter = ',')]
    pub coloring: Option<Vec<usize>>,
    /// Anchor vertex.
    #[arg(long, default_value_t = 0)]
    pub vertex: usize,
    /// Site spec `random:k:seed`, or a JSON file with a list of points.
    #[arg(long, default_value = "random:20:0")]
    pub sites: String,
}

#[derive(Debug, Subcommand)]
pub enum HexCmd {
    /// Play games between bot policies.
    Simulate {
        #[command(flatten)]
        board: BoardArgs,
        /// One policy per player, comma separated.
        #[arg(long, value_delimiter = ',')]
        policies: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        games: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Play random games and report any that end undecided.
    NoTie {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare the incremental winner with a full scan after every move.
        #[arg(long)]
        instrument: bool,
        #[arg(long, default_value = "repro")]
        repro_dir: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}
