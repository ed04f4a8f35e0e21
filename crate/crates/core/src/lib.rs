//! Failure mode reasoning over dataflow models.
//!
//! A system is a graph of components with typed wires. Given a failure mode
//! observed at an output, [`engine::backward_reason`] composes the local
//! failure models of the components backwards until only faults at inputs
//! and parameters remain. The [`oracle`] module simulates models forward
//! under concrete reported/intended values and is used to check every
//! derived model.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalogue;
pub mod context;
pub mod dnf;
pub mod engine;
pub mod error;
pub mod expr;
pub mod generate;
pub mod impact;
pub mod kind;
pub mod mode;
pub mod model;
pub mod oracle;
pub mod simplify;

pub use context::{CausePolicy, Knowledge, KnowledgeContext, ValuePolicy};
pub use dnf::{to_dnf, DEFAULT_TERM_CAP};
pub use engine::{backward_reason, break_loops, explain, AnalysisResult, EngineError};
pub use error::AlgebraError;
pub use expr::{Expr, Literal};
pub use kind::{Attrs, Kind};
pub use mode::{direction_of_sign, invert, md, Direction, FailureMode, Sign, Value, ValueType};
pub use model::{ComponentDecl, Diagnostic, FeedbackEdge, SystemModel, VarClass, VariableDecl};
pub use simplify::simplify;
