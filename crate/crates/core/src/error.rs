use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: String },
    #[error("edge {edge} has non-positive weight {weight}")]
    NonPositiveWeight { edge: usize, weight: String },
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownEndpoint { edge: usize, vertex: String },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("rotation system is incomplete: {0}")]
    IncompleteRotation(String),
    #[error("rotation system has genus {genus}, not a planar embedding")]
    NonPlanar { genus: usize },
    #[error("edge {0} is a bridge; the dual would contain a self-loop")]
    BridgePresent(usize),
    #[error("cannot merge an empty vertex set")]
    EmptyMergeSet,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("component count k = {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("graph has no spanning unicycle (tau = 0)")]
    NoUnicycle,
    #[error("target set is not reachable from the start vertex")]
    UnreachableTarget,
    #[error("start vertex already lies in the target set")]
    StartInTarget,
    #[error("parent map is not a spanning arborescence: {0}")]
    NotATree(String),
    #[error("configuration is not recurrent")]
    NotRecurrent,
    #[error("vertex {0} is stable and cannot topple")]
    VertexStable(usize),
    #[error("configuration is unstable at vertex {0}")]
    Unstable(usize),
    #[error("edge {edge} has non-integer weight {weight}; sandpiles need integer multiplicities")]
    NonIntegerWeight { edge: usize, weight: String },
    #[error("a designated sink vertex is required")]
    MissingSink,
    #[error("unknown lattice {0:?}")]
    UnknownLattice(String),
    #[error("no closed-form potential kernel table for lattice {0:?}")]
    MissingKernel(String),
    #[error("beta must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("quadrature did not converge to tolerance {0:e}")]
    QuadratureNotConverged(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::SelfLoop { .. } => "SelfLoop",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::UnknownEndpoint { .. } => "UnknownEndpoint",
            Error::DuplicateVertex(_) => "DuplicateVertex",
            Error::IncompleteRotation(_) => "IncompleteRotation",
            Error::NonPlanar { .. } => "NonPlanar",
            Error::BridgePresent(_) => "BridgePresent",
            Error::EmptyMergeSet => "EmptyMergeSet",
            Error::NonSquare { .. } => "NonSquare",
            Error::Singular => "Singular",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotConverged { .. } => "NotConverged",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::TooLarge(_) => "TooLarge",
            Error::NoUnicycle => "NoUnicycle",
            Error::UnreachableTarget => "UnreachableTarget",
            Error::StartInTarget => "StartInTarget",
            Error::NotATree(_) => "NotATree",
            Error::NotRecurrent => "NotRecurrent",
            Error::VertexStable(_) => "VertexStable",
            Error::Unstable(_) => "Unstable",
            Error::NonIntegerWeight { .. } => "NonIntegerWeight",
            Error::MissingSink => "MissingSink",
            Error::UnknownLattice(_) => "UnknownLattice",
            Error::MissingKernel(_) => "MissingKernel",
            Error::NonPositiveBeta(_) => "NonPositiveBeta",
            Error::QuadratureNotConverged(_) => "QuadratureNotConverged",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
        }
    }
}
