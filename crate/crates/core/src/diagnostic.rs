//! Structured diagnostics shared by every compiler phase and the simulator.

use crate::span::Span;
use serde::Serialize;
use std::fmt;

/// Stable diagnostic codes. The string form is part of the tool's output contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    // lexing / parsing
    Lex,
    Syntax,
    // chart resolution
    UnknownState,
    Duplicate,
    MissingInit,
    MultipleInit,
    TransitionScope,
    // declarations and types
    UnknownType,
    Arity,
    RecursiveType,
    UnboundTypeVar,
    Unsubstantiated,
    // code checking
    Undeclared,
    UnknownField,
    TypeMismatch,
    ReadViolation,
    WriteViolation,
    GuardNotBool,
    AlwaysEnabled,
    // simulation
    InputOnlySet,
    NotInConfig,
    UnknownVariable,
    RuntimeUndefinedFun,
    KeyAbsent,
    Index,
    Arithmetic,
    Nondeterminism,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        use Code::*;
        match self {
            Lex => "E_LEX",
            Syntax => "E_SYNTAX",
            UnknownState => "E_UNKNOWN_STATE",
            Duplicate => "E_DUPLICATE",
            MissingInit => "E_MISSING_INIT",
            MultipleInit => "E_MULTIPLE_INIT",
            TransitionScope => "E_TRANSITION_SCOPE",
            UnknownType => "E_UNKNOWN_TYPE",
            Arity => "E_ARITY",
            RecursiveType => "E_RECURSIVE_TYPE",
            UnboundTypeVar => "E_UNBOUND_TYPE_VAR",
            Unsubstantiated => "E_UNSUBSTANTIATED",
            Undeclared => "E_UNDECLARED",
            UnknownField => "E_UNKNOWN_FIELD",
            TypeMismatch => "E_TYPE_MISMATCH",
            ReadViolation => "E_READ_VIOLATION",
            WriteViolation => "E_WRITE_VIOLATION",
            GuardNotBool => "E_GUARD_NOT_BOOL",
            AlwaysEnabled => "W_ALWAYS_ENABLED",
            InputOnlySet => "E_INPUT_ONLY_SET",
            NotInConfig => "E_NOT_IN_CONFIG",
            UnknownVariable => "E_UNKNOWN_VARIABLE",
            RuntimeUndefinedFun => "E_RUNTIME_UNDEFINED_FUN",
            KeyAbsent => "E_KEY_ABSENT",
            Index => "E_INDEX",
            Arithmetic => "E_ARITHMETIC",
            Nondeterminism => "E_NONDETERMINISM",
        }
    }

    pub fn default_severity(self) -> Severity {
        match self {
            Code::AlwaysEnabled => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: code.default_severity(),
            span,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: error[CODE]: message`
    pub fn render_human(&self, file: &str) -> String {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        format!(
            "{}:{}:{}: {}[{}]: {}",
            file, self.span.start.line, self.span.start.col, sev, self.code, self.message
        )
    }

    /// One JSON object on a single line.
    pub fn render_structured(&self, file: &str) -> String {
        let record = Record {
            code: self.code,
            severity: self.severity,
            file,
            start_line: self.span.start.line,
            start_col: self.span.start.col,
            end_line: self.span.end.line,
            end_col: self.span.end.col,
            message: &self.message,
        };
        serde_json::to_string(&record).expect("diagnostic record serializes")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.span, self.code, self.message)
    }
}

#[derive(Serialize)]
struct Record<'a> {
    code: Code,
    severity: Severity,
    file: &'a str,
    start_line: u32,
    start_col: u32,
    end_line: u32,
    end_col: u32,
    message: &'a str,
}

/// Sorts diagnostics into source order. The sort is stable, so diagnostics at
/// the same position keep the order in which they were produced.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by_key(|d| d.span.start);
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
