use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid weight `{0}`: expected two non-negative integers as `a,b`")]
pub struct ParseWeightError(pub String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("representation mismatch: cannot combine {0:?} and {1:?} points")]
    RepresentationMismatch(crate::local::Rep, crate::local::Rep),
    #[error("triangle violates the hexagon equations: {0:?}")]
    HexagonViolated(crate::local::Triangle),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph spec: {0}")]
    Malformed(String),
    #[error("unknown builder `{0}` (expected caterpillar:n, gamma:g,n, dumbbell, theta)")]
    UnknownBuilder(String),
    #[error("vertex {vertex}: slot {slot} out of range 1..=3")]
    SlotOutOfRange { vertex: u64, slot: u64 },
    #[error("edge or leaf refers to unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("vertex {vertex}, slot {slot}: half-edge used more than once")]
    HalfEdgeReused { vertex: u64, slot: u64 },
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    DegreeViolation { vertex: u64, degree: usize },
    #[error("leaf labels must be exactly 1..={expected}, found label {found}")]
    LeafLabel { expected: usize, found: String },
    #[error("graph is disconnected: vertex {0} unreachable from the first vertex")]
    Disconnected(u64),
    #[error("graph must have at least one internal vertex")]
    Empty,
    #[error("operation requires a tree, graph has genus {0}")]
    NotATree(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlobalError {
    #[error("expected {expected} leaf weights, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("vertex {vertex} has level {found}, expected {expected}")]
    LevelMismatch { vertex: usize, expected: u32, found: u32 },
    #[error("expected {expected} vertex points, got {found}")]
    VertexCount { expected: usize, found: usize },
    #[error("edge {edge} ({left} -- {right}): boundary values {lw} and {rw} are not dual")]
    NotDual { edge: usize, left: String, right: String, lw: String, rw: String },
    #[error("vertex {0} is given a point in the BZ representation; global points use CB")]
    WrongRepresentation(usize),
    #[error("enumeration would produce {estimate} points, above the cap of {cap}")]
    CapExceeded { estimate: u64, cap: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Global(#[from] GlobalError),
    #[error("bound {bound} too small: need at least {needed}")]
    BoundTooSmall { bound: u32, needed: u32 },
    #[error("finite differences of order {rank} do not terminate within level {bound}")]
    NoTermination { rank: usize, bound: u32 },
    #[error("cone rank {rank} exceeds the facet-enumeration guard {guard}")]
    RankGuard { rank: usize, guard: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerlindeError {
    #[error("Verlinde sum {value} is {residual:e} away from an integer")]
    Residual { value: f64, residual: f64 },
    #[error("no torus order candidate matches the fusion oracle at level {level}:\n{table}")]
    Calibration { level: u32, table: String },
}
