use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    #[error("vertex count {0} out of range (supported: 1..=32)")]
    VertexCount(usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("input graph must be simple (no multiedges, all loops undecided)")]
    NotSimple,

    #[error("input graph must be connected")]
    NotConnected,

    #[error("{what} = {value} out of range ({range})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },

    #[error("pair {{{0}, {1}}} is already decided")]
    PairNotFree(usize, usize),

    #[error("loop at {0} is already decided")]
    LoopNotFree(usize),

    #[error("{free} undecided pairs exceed the exhaustion threshold {threshold}")]
    ThresholdExceeded { free: usize, threshold: usize },

    #[error("no completion satisfies the pair predicate")]
    NoQualifyingCompletion,

    #[error("rule not applicable: {0}")]
    UnsupportedRule(String),

    #[error("graph is not a tree")]
    NotATree,

    #[error("unknown catalog name `{0}`")]
    UnknownCatalogName(String),

    #[error("certificate rejected: {0}")]
    UnverifiedCertificate(String),

    #[error("invalid multiplicity list: {0}")]
    InvalidList(String),

    #[error("matrix is not {0}")]
    MatrixShape(&'static str),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("nonzero eigenvalue group of -A*A has odd multiplicity {0}; grouping tolerance too loose or too tight")]
    OddMultiplicity(usize),

    #[error("-A*A has {found} near-zero eigenvalues but A has nullity {nullity}")]
    ZeroGroupMismatch { found: usize, nullity: usize },

    #[error("data file error on line {line}: {reason}")]
    Data { line: usize, reason: String },
}
