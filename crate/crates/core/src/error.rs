use thiserror::Error;

use crate::worlds::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("sort `{0}` is not defined by a program with a unique answer set")]
    UnboundedSort(String),
    #[error("duplicate declaration: {0}")]
    DuplicateDeclaration(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("literal universe of {0} literals is too large for the exhaustive oracle")]
    UniverseTooLarge(usize),
    #[error("program is inconsistent: it has no possible worlds")]
    Inconsistent,
    #[error("probability is undefined: no possible world has nonzero measure")]
    ProbabilityUndefined,
    #[error("default probability of {0} is undefined")]
    DefaultUndefined(String),
    #[error("assigned probabilities of {term} sum to {sum} > 1")]
    NegativeDefault { term: String, sum: String },
    #[error("condition violated: {}", render(.0))]
    ConditionViolation(Vec<Violation>),
    #[error("program is not causally ordered: {0}")]
    NotCausallyOrdered(String),
    #[error("invalid network: {0}")]
    InvalidNet(String),
}

fn render(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
