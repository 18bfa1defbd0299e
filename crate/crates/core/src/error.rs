use thiserror::Error;

use crate::reduce::Kind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in score arithmetic")]
    Overflow,
    #[error("assignment has no color for vertex {0}")]
    MissingVertex(usize),
    #[error("color {color} out of range for vertex {vertex} (r = {r})")]
    ColorOutOfRange { vertex: usize, color: usize, r: usize },
    #[error("vertex {0} is not a live vertex")]
    DeadVertex(usize),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("enumeration budget exceeded: {r}^{n} assignments > budget {budget}")]
    BudgetExceeded { r: usize, n: usize, budget: u64 },
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("negative weight {weight} on vertex {vertex}")]
    NegativeWeight { vertex: usize, weight: i64 },
    #[error("clause has {0} literals; only 1 or 2 are supported")]
    ClauseArity(usize),
    #[error("table for {what} has length {got}, expected {expected}")]
    TableLength { what: String, got: usize, expected: usize },
    #[error("domain size r = {0} is below 2")]
    DomainTooSmall(usize),
    #[error("{kind} reduction on vertex {vertex} of degree {degree}")]
    DegreeMismatch { kind: Kind, vertex: usize, degree: usize },
    #[error("degree-2 vertex {0} has a repeated neighbor")]
    RepeatedNeighbor(usize),
    #[error("stale reduction record for vertex {0}")]
    StaleRecord(usize),
    #[error("color of a III-reduction vertex is chosen by search, not extension")]
    NotExtendable,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("reduction tree does not match instance: {0}")]
    TreeMismatch(String),
    #[error("dynamic-programming table needs {entries} entries (limit {limit})")]
    TableTooLarge { entries: u128, limit: u64 },
    #[error("alpha = {0} outside [0, 1/5]")]
    AlphaOutOfRange(String),
    #[error("linear program is {0}")]
    Lp(&'static str),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible generator parameters: {0}")]
    Generator(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a bug.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::LoopEdge(_)
                | Error::DuplicateEdge(..)
                | Error::NegativeWeight { .. }
                | Error::ClauseArity(_)
                | Error::TableLength { .. }
                | Error::DomainTooSmall(_)
                | Error::VertexOutOfRange { .. }
                | Error::TableTooLarge { .. }
                | Error::AlphaOutOfRange(_)
                | Error::Parse { .. }
                | Error::Generator(_)
                | Error::Overflow
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
