use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph name `{0}`")]
    UnknownName(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("graph has {0} nodes; at most {max} are supported", max = crate::graphs::MAX_NODES)]
    TooManyNodes(usize),

    #[error("board would have {sites} sites, above the cap of {cap}")]
    SiteCap { sites: u128, cap: usize },

    #[error("malformed graph file: {0}")]
    Malformed(String),

    #[error("asymmetric adjacency: {0} lists {1} but {1} does not list {0}")]
    Asymmetric(usize, usize),

    #[error("node index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("boards cannot carry loops (site {0})")]
    BoardLoop(usize),

    #[error("graph must be connected with at least one edge")]
    NotConnected,

    #[error("node {0} has no neighbours")]
    IsolatedNode(usize),

    #[error("weights and activities must be strictly positive (entry {0})")]
    NonPositive(usize),

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("constraint graph is bipartite; use the bipartite double route")]
    Bipartite,

    #[error("board is not bipartite")]
    BoardNotBipartite,

    #[error("board is not a tree")]
    NotATree,

    #[error("enumeration cap of {0} search nodes exceeded")]
    CapExceeded(u64),

    #[error("homomorphism space is empty")]
    EmptySpace,

    #[error("boundary assignment does not extend to a homomorphism")]
    InconsistentBoundary,

    #[error("context has probability zero")]
    UnrealizableContext,

    #[error("not a homomorphism: board edge {0}-{1} maps to a non-edge")]
    NotHomomorphism(usize, usize),

    #[error("no solution found after {0} starts")]
    NoSolution(usize),

    #[error("frozen colourings need q = r + 1 (got q = {q}, r = {r})")]
    FrozenArity { q: usize, r: usize },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
