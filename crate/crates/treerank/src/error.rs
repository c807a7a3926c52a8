use thiserror::Error;

/// Errors produced by graph construction, evaluation, and search.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop ({0},{0}) is not allowed")]
    SelfLoop(u32),
    #[error("arc ({0},{1}) has an endpoint outside 0..{2}")]
    ArcOutOfRange(u32, u32, usize),
    #[error("duplicate arc ({0},{1})")]
    DuplicateArc(u32, u32),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {0} is out of range 0..{1}")]
    VertexOutOfRange(u32, usize),

    #[error("profile is empty")]
    EmptyProfile,
    #[error("malformed level count {0:?}")]
    MalformedCount(String),
    #[error("first level count must be 1, got {0}")]
    FirstLevelNotOne(u64),
    #[error("level counts must be positive")]
    ZeroCount,

    #[error("family parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("alpha must lie strictly inside (0,1), got {0}")]
    InvalidAlpha(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("fixed-point iteration did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("profile has height 0; there is no level to delete")]
    HeightZero,
    #[error("arc ({0},{1}) is not a tree arc")]
    ArcNotInTree(u32, u32),
    #[error("vertex {0} already closes a back arc")]
    ClosesBackArc(u32),
    #[error("no tree path from {0} to {1}")]
    NoTreePath(u32, u32),
    #[error("structure fails non-interference: {0}")]
    Interference(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("deepest level has only {available} removable leaves, {requested} requested")]
    NotEnoughLeaves { available: usize, requested: usize },
    #[error("leaf {0} is incident to a back arc")]
    LeafHasBackArc(u32),

    #[error("census is inconsistent with od(root)={0}")]
    CensusInconsistent(u8),

    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("order {0} exceeds the recognition limit {1}")]
    OrderLimitExceeded(usize, usize),
    #[error("digraph is not a recognizable structure: {0}")]
    RecognitionFailed(String),

    #[error("constraints are unsatisfiable: {0}")]
    UnsatisfiableConstraints(String),
    #[error("exhaustive search space has {0} profiles, limit is {1}")]
    SearchSpaceTooLarge(u128, u64),
    #[error("start profile violates the constraints: {0}")]
    StartViolatesConstraints(String),
}

pub type Result<T> = std::result::Result<T, Error>;
