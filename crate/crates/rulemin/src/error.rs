use thiserror::Error;

/// Errors raised by graph, rule and solver construction or validation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid label poset: {0}")]
    InvalidPoset(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("inconsistent anchor: {0}")]
    InconsistentAnchor(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("invalid transition system: {0}")]
    InvalidSystem(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("cover problem is infeasible: {0}")]
    Infeasible(String),
    #[error("no exact generating rule set exists ({0} pathology witnesses)")]
    NoExactRuleSet(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
