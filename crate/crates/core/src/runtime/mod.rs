//! Deterministic simulation of checked specifications.

pub mod builtins;
pub mod machine;
pub mod script;
pub mod value;

pub use machine::{enabled, init_machine, resolve_var, set_input, step, Fault, MachineState, StepReport, Store};
pub use script::{parse_command, parse_literal, run_script, Command, Outcome, ScriptError, ScriptRun, Session};
pub use value::{conforms, default_value, Value};
