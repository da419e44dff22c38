use thiserror::Error;

use crate::ring::Idx;

/// Errors raised by ring construction, arithmetic and the sweep-based checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("operands belong to different rings")]
    MixedRings,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ring order {order} exceeds the enumeration cap of {cap} elements")]
    OrderOverflow { order: String, cap: u64 },

    #[error("subset is not a two-sided ideal: {0}")]
    NotAnIdeal(String),

    #[error("{law} fails at ({a}, {b}, {c})")]
    AxiomViolation {
        law: &'static str,
        a: Idx,
        b: Idx,
        c: Idx,
    },

    #[error("budget exhausted after examining {examined} candidate tuples")]
    BudgetExhausted { examined: u64 },

    #[error("value is not an element of {ring}: {detail}")]
    NotAnElement { ring: String, detail: String },
}

pub type Result<T, E = RingError> = std::result::Result<T, E>;
