use thiserror::Error;

/// Errors surfaced by the library.
///
/// Programmer errors (index out of bounds, violated internal invariants)
/// panic instead; this enum covers conditions reachable from valid API use,
/// such as out-of-range parameters and malformed input files.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} outside supported range 2..=16")]
    Dimension(u32),

    #[error("vertex label {label:#x} has bits outside dimension {n}")]
    VertexLabel { label: u32, n: u32 },

    #[error("invalid edge: base {base:#x}, direction {dir} (dimension {n})")]
    InvalidEdge { base: u32, dir: u32, n: u32 },

    #[error("edge id {id} outside 1..={max}")]
    EdgeId { id: u32, max: u32 },

    #[error("vertices {a:#x} and {b:#x} are not adjacent")]
    NotAdjacent { a: u32, b: u32 },

    #[error("empty clause")]
    EmptyClause,

    #[error("literal 0 is not a valid DIMACS literal")]
    ZeroLiteral,

    #[error("variable {var} repeats within a clause")]
    RepeatedVariable { var: u32 },

    #[error("exhaustive enumeration is capped at dimension 4, got {0}")]
    OracleDimension(u32),

    #[error("model assigns {got} variables, instance declares {want}")]
    ModelSize { got: u32, want: u32 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("solver output: {0}")]
    SolverOutput(String),

    #[error("encoding cross-check failed: {0}")]
    CrossCheck(String),

    #[error("symmetry group construction: {0}")]
    Group(String),

    #[error("orbit index {index} out of range, {count} orbits")]
    OrbitIndex { index: usize, count: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
