use thiserror::Error;

use crate::mode::ValueType;

/// Errors raised by the failure-mode algebra.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("reported value is {reported} but intended value is {intended}")]
    TypeMismatch {
        reported: ValueType,
        intended: ValueType,
    },
    #[error("NaN has no failure mode")]
    NotANumber,
    #[error("DNF expansion exceeded the cap of {cap} terms")]
    TermCapExceeded { cap: usize },
}
