use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("elements belong to different groups")]
    FamilyMismatch,
    #[error("ball of radius {radius} has more than {cap} elements")]
    BallTooLarge { radius: usize, cap: usize },
    #[error("images do not define a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("homomorphisms are only evaluated on free sources")]
    UnsupportedSource,
    #[error("group of order {order} exceeds the limit {limit}")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup data: {0}")]
    InvalidSubgroup(String),
    #[error("normal closure exceeds the index bound {bound}")]
    ClosureExceedsBound { bound: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("intersection index exceeds {limit}")]
    IndexOverflow { limit: usize },
    #[error("amenability undecided: {0}")]
    Undecided(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("measure is not invariant under the action")]
    NotInvariantMeasure,
    #[error("distribution is not conjugation invariant")]
    NotInvariant,
    #[error("coset table is incomplete")]
    IncompleteTable,
    #[error("graph has a single vertex; the complement of constants is empty")]
    GraphTooSmall,
    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("depth {depth} outside 0..={max}")]
    DepthOutOfRange { depth: usize, max: usize },
    #[error("set is not a union of level-{level} cosets (witness {witness})")]
    NotACosetUnion { level: usize, witness: String },
    #[error("empty set has no Haar ratio")]
    EmptySet,
    #[error("representative {0} is not in the subgroup")]
    RepNotInSubgroup(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("body leaves the unit ball")]
    LeavesUnitBall,
    #[error("empty measure")]
    EmptyMeasure,
    #[error("body is not contained in the ambient body")]
    NotContained,
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("atom is not contained in the ambient body")]
    AtomNotContained,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
