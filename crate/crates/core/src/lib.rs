//! StaBL: a statechart-based specification language for web applications.
//!
//! The pipeline is [`syntax`] (lex + parse) → [`model`] (resolve the state
//! tree) → [`typechecker`] (types, scoping and access rules) → [`runtime`]
//! (deterministic simulation). [`dot`] renders a chart for Graphviz.

pub mod diagnostic;
pub mod dot;
pub mod model;
pub mod runtime;
pub mod scoping;
pub mod span;
pub mod syntax;
pub mod typechecker;
pub mod types;

pub use diagnostic::{Code, Diagnostic, Severity};
pub use model::{StateId, Statechart, TransitionId};
pub use typechecker::{check_source, check_spec, TypedSpec};
