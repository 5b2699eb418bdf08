use thiserror::Error;

/// Errors raised while building lattices, maps and homsets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element index {index} out of range for a carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("order relation has a cycle through elements {0} and {1}")]
    CycleDetected(usize, usize),

    #[error("{}", match .pair {
        Some((x, y)) => format!("not a lattice: elements {x} and {y} lack a least upper or greatest lower bound"),
        None => "not a lattice: the carrier is empty".to_string(),
    })]
    NotALattice { pair: Option<(usize, usize)> },

    #[error("result too large: {what} would have {size} elements (limit {limit})")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("domain/codomain mismatch: {0}")]
    DomainMismatch(String),

    #[error("map is not {0}-continuous")]
    NotContinuous(&'static str),

    #[error("enumeration cap exceeded: more than {cap} {what}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("operation requires an endomorphism homset Q(L, L)")]
    NotEndoHomset,

    #[error("map is not an element of the homset")]
    NotInHomset,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
