use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolytopeError {
    #[error("malformed polytope: {0}")]
    Malformed(String),
    #[error("polytope is not simple: vertices {0:?} do not lie in exactly n facets")]
    NotSimple(Vec<usize>),
    #[error("face dimension {k} out of range for a {n}-polytope")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("not a face of this polytope: facets {0:?}")]
    NotAFace(Vec<usize>),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("infeasible truncation depth {eps}: must lie in (0, {bound})")]
    InfeasibleDepth { eps: f64, bound: f64 },
    #[error("cut hyperplanes collide: {0}")]
    CutCollision(String),
    #[error("vertices {0} and {1} are adjacent; truncated vertices must be strongly separated")]
    NotSeparated(usize, usize),
    #[error("improper coloring: facets {0} and {1} meet but share color {2}")]
    ImproperColoring(usize, usize, usize),
    #[error("coloring does not match polytope: {0}")]
    ColoringMismatch(String),
    #[error("missing geometric realization")]
    NoRealization,
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("unknown builder descriptor: {0}")]
    BadDescriptor(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("coloring must use exactly {expected} colors, found {found}")]
    WrongColorCount { expected: usize, found: usize },
    #[error("color-{color} facet {facet} is not a simplex")]
    NotSimplexFacet { facet: usize, color: usize },
    #[error("characteristic matrix has shape {rows}x{cols}, expected {n}x{m}")]
    Shape { rows: usize, cols: usize, n: usize, m: usize },
    #[error("variable v{0} has no unit pivot in the characteristic matrix")]
    NoUnitPivot(usize),
    #[error("square rewriting exceeded depth {cap} on monomial {monomial}")]
    DepthExceeded { cap: usize, monomial: String },
    #[error("element is not homogeneous of degree {expected} (found degree {found})")]
    NotHomogeneous { expected: usize, found: usize },
    #[error("top-degree quotient has rank {0}, expected 1")]
    TopRank(usize),
    #[error("reference vertex monomial does not generate the top degree (pairing {0})")]
    NotAGenerator(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HexError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("cell {0} is already claimed")]
    Claimed(usize),
    #[error("cell {0} does not exist")]
    NoSuchCell(usize),
    #[error("it is player {expected}'s turn, not player {got}'s")]
    WrongPlayer { expected: usize, got: usize },
    #[error("game is over")]
    GameOver,
    #[error("no legal moves")]
    NoLegalMoves,
    #[error("unknown session {0}")]
    UnknownSession(u64),
    #[error("version conflict: expected {expected}, current {current}")]
    VersionConflict { expected: u64, current: u64 },
    #[error("no free human seat")]
    NoFreeSeat,
}

impl HexError {
    /// Stable machine-readable reason code.
    pub fn reason(&self) -> &'static str {
        match self {
            HexError::Polytope(_) => "polytope",
            HexError::InvalidBoard(_) => "invalid_board",
            HexError::Claimed(_) => "cell_claimed",
            HexError::NoSuchCell(_) => "no_such_cell",
            HexError::WrongPlayer { .. } => "wrong_player",
            HexError::GameOver => "game_over",
            HexError::NoLegalMoves => "no_legal_moves",
            HexError::UnknownSession(_) => "unknown_session",
            HexError::VersionConflict { .. } => "version_conflict",
            HexError::NoFreeSeat => "no_free_seat",
        }
    }
}
