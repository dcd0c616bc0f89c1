use thiserror::Error;

/// Errors raised by the constructions and searches in this crate.
///
/// Every variant is a domain error: the inputs were well-typed but violate
/// a precondition of the requested operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid structure: {}", .0.join("; "))]
    InvalidStructure(Vec<String>),
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("signature mismatch")]
    SignatureMismatch,
    #[error("structure is not a graph over the signature {{E:2}}")]
    NotAGraph,
    #[error("structure is not directed")]
    NotDirected,
    #[error("graph is not undirected")]
    NotUndirected,
    #[error("graph does not match the requested subdivision mode")]
    ModeMismatch,
    #[error("graph is not well-founded")]
    NotWellFounded,
    #[error("homomorphism endpoints do not match")]
    ObjectMismatch,
    #[error("map is not a homomorphism")]
    NotAHom,
    #[error("map is not a gadget homomorphism")]
    NotAGadgetHom,
    #[error("gadget marks overlap")]
    OverlappingMarks,
    #[error("alpha and beta coincide")]
    AlphaEqualsBeta,
    #[error("gadget mark {0} is outside the carrier")]
    MarkOutOfRange(usize),
    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeAbsent(usize, usize),
    #[error("gadget is not simple")]
    NotSimple,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("no isomorphism found")]
    NoIsoFound,
    #[error("graph {0} has an isolated point")]
    IsolatedPoint(usize),
    #[error("gadget is not a system: {0}")]
    NotASystem(String),
    #[error("arc graph of the system is not a directed path from alpha to beta")]
    ArcNotAPath,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("not a path in the Gaifman graph")]
    NotAGaifmanPath,
    #[error("colouring needs at least 3 indices, got {0}")]
    TooSmall(usize),
    #[error("free variables must be distinct domain elements")]
    InvalidFreeTuple,
    #[error("interpretation spec does not match the structure's signature")]
    SpecMismatch,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
