use thiserror::Error;

/// Errors produced by the switching-algebra and power-index routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{n} variables exceeds the limit of {max}")]
    ArityTooLarge { n: usize, max: usize },

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("operation requires at least one variable")]
    ZeroArity,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error(
        "contradictory product at position {pos}: `{name}` appears both plain and complemented"
    )]
    ContradictoryProduct { name: String, pos: usize },

    #[error("expression is not certified disjoint")]
    NotDisjoint,

    #[error("inclusion-exclusion refuses {cubes} cubes (limit {max})")]
    TooManyCubes { cubes: usize, max: usize },

    #[error("probability vector: {0}")]
    BadProbability(String),

    #[error("characteristic set element {element} exceeds arity {n}")]
    BadCharset { element: usize, n: usize },

    #[error("invalid placement: {0}")]
    BadPlacement(String),

    #[error("invalid voting system: {0}")]
    InvalidSystem(String),

    #[error("no decisive voter: every voter is a dummy")]
    NoDecisiveVoter,

    #[error("count overflow while {0}")]
    Overflow(&'static str),

    #[error("oracle disagreement for voter {voter}: {detail}")]
    OracleDisagreement { voter: usize, detail: String },

    #[error("malformed truth table: {0}")]
    BadTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
