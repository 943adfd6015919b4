use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("simplex {0} is not present in the complex")]
    SimplexNotPresent(String),
    #[error("vertex {0} is not present in the complex")]
    VertexNotPresent(String),
    #[error("{0} is not an edge")]
    NotAnEdge(String),
    #[error("size limit exceeded: {what} is {actual}, bound is {bound}")]
    SizeLimitExceeded { what: &'static str, actual: usize, bound: usize },
    #[error("unknown catalog name `{0}`")]
    UnknownCatalogName(String),
    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error("not a cone: {0}")]
    NotACone(String),
    #[error("complex is not flag: {0}")]
    NotFlag(String),
    #[error("not nested: {0}")]
    NotNested(String),
    #[error("subcomplex is not contained in the star of any vertex")]
    NotInStarOfVertex,
    #[error("step {index}: edge {edge} is missing")]
    StepEdgeMissing { index: usize, edge: String },
    #[error("replay result is not isomorphic to the claimed target")]
    TargetMismatch,
    #[error("invalid quotient: {0}")]
    InvalidQuotient(String),
    #[error("requested rank {requested} exceeds rank of H_1 = {available}")]
    RankTooLarge { requested: usize, available: usize },
    #[error("cube complex is disconnected")]
    Disconnected,
    #[error("monotonicity violated: {0}")]
    MonotonicityViolated(String),
    #[error("graph is not eligible for the trivalent decision: {0}")]
    NotTrivalentEligible(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("decision procedure found neither a certificate nor a witness: {0}")]
    Undecided(String),
    #[error("inconsistent chain: {0}")]
    InconsistentChain(String),
    #[error("missing artifacts: {0}")]
    MissingArtifacts(String),
}
