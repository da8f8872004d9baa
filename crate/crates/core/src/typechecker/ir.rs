//! Typed, name-resolved code produced by the typechecker and executed by the
//! simulator. Every expression carries its type.

use crate::model::StateId;
use crate::span::Span;
use crate::syntax::ast::{BinOp, UnOp};
use crate::types::{Builtin, TypeExpr};

/// Storage location of a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarRef {
    /// A state local, stored for the lifetime of the machine.
    State { state: StateId, name: String },
    /// A code-block local; slots are numbered per code fragment.
    Local(usize),
}

/// A variable followed by zero or more struct field selections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub var: VarRef,
    pub fields: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Callee {
    Builtin(Builtin),
    /// A declared function without a body.
    User(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TExprKind {
    Int(i64),
    Str(String),
    Bool(bool),
    Load(Place),
    Field(Box<TExpr>, String),
    Unary(UnOp, Box<TExpr>),
    Binary(BinOp, Box<TExpr>, Box<TExpr>),
    Call { callee: Callee, args: Vec<TExpr> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TExpr {
    pub kind: TExprKind,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TStmt {
    /// Brings a block local into scope with its default value.
    Declare {
        slot: usize,
        ty: TypeExpr,
    },
    Assign {
        target: Place,
        value: TExpr,
        span: Span,
    },
    Block(Vec<TStmt>),
}

/// A checked entry, exit or action block.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Code {
    pub stmts: Vec<TStmt>,
    /// Number of block-local slots used.
    pub slots: usize,
}
