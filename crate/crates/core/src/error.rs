use thiserror::Error;

use crate::patterns::{OpId, PatternId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("malformed graph6: {0}")]
    Malformed(String),
    #[error(transparent)]
    NotATree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("constraints admit no feasible set")]
    Infeasible,
    #[error("order {order} exceeds the brute-force cap {cap}")]
    TooLarge { order: usize, cap: usize },
    #[error("forced-in and forced-out sets overlap")]
    OverlappingConstraint,
    #[error("constraint names vertex {0} outside the graph")]
    ConstraintOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern {pattern}: self-check failed: {invariant}")]
    SelfCheckFailed {
        pattern: PatternId,
        invariant: String,
    },
    #[error("pattern {pattern} is not admissible for {op}")]
    InadmissiblePattern { pattern: PatternId, op: OpId },
    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("step does not describe a prescribed-degree embedding: {0}")]
    NoSuchEmbedding(String),
    #[error("invalid attacher: {0}")]
    InvalidAttacher(String),
    #[error("malformed step: {0}")]
    MalformedStep(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error(
        "reduction outcome (accepted = {accepted}) disagrees with gamma2 = {gamma2}, alpha2 = {alpha2}"
    )]
    InternalInconsistency {
        accepted: bool,
        gamma2: usize,
        alpha2: usize,
    },
    #[error(
        "inverse {op} changed alpha2 - gamma2: ({}, {}) before, ({}, {}) after",
        before.0, before.1, after.0, after.1
    )]
    DeltaViolated {
        op: OpId,
        before: (usize, usize),
        after: (usize, usize),
    },
}
