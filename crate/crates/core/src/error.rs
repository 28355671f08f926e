use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("state space of {required} codes exceeds the budget of {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("state space n^k = {0}^{1} does not fit in a 63-bit code")]
    StateSpaceTooLarge(usize, usize),

    #[error("permutation is not a bijection of 0..{degree}: {perm:?}")]
    NotBijective { degree: usize, perm: Vec<usize> },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("map is not a homomorphism: maps {a}*{b} inconsistently")]
    NotHomomorphism { a: usize, b: usize },

    #[error("subset is not a subgroup (not closed at {a}*{b})")]
    NotSubgroup { a: usize, b: usize },

    #[error("subgroup is not normal (conjugate of {elem} by {by} escapes)")]
    NotNormal { elem: usize, by: usize },

    #[error("group is not abelian ({a}*{b} != {b}*{a})")]
    NotAbelian { a: usize, b: usize },

    #[error("group is not perfect (commutator subgroup has index > 1)")]
    NotPerfect,

    #[error("tuple {0:?} does not normally generate the group")]
    NotNGenerating(Vec<usize>),

    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),

    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("malformed move: {0}")]
    MalformedMove(String),

    #[error("word evaluation arity mismatch: rank {rank}, {given} images given")]
    ArityMismatch { rank: usize, given: usize },

    #[error("cannot parse word: {0}")]
    WordParse(String),

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("component table was computed for a different group or alphabet: {0}")]
    TableMismatch(String),

    #[error("graph too large to render: {vertices} vertices (limit {limit})")]
    GraphTooLarge { vertices: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
