//! Untyped syntax tree. Every node carries the span it was parsed from.

use crate::span::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Ident {
            name: name.into(),
            span,
        }
    }
}

/// A dot-separated name such as `Student.LoggedOut.user`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QName {
    pub segments: Vec<Ident>,
    pub span: Span,
}

impl QName {
    pub fn dotted(&self) -> String {
        self.segments
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecAst {
    pub type_decls: Vec<TypeDecl>,
    pub root: StateAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeDecl {
    Struct(StructAst),
    Fun(FunAst),
}

impl TypeDecl {
    pub fn name(&self) -> &Ident {
        match self {
            TypeDecl::Struct(s) => &s.name,
            TypeDecl::Fun(f) => &f.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructAst {
    pub name: Ident,
    pub type_params: Vec<Ident>,
    pub fields: Vec<FieldAst>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldAst {
    pub name: Ident,
    pub ty: TypeAst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunAst {
    pub name: Ident,
    pub type_params: Vec<Ident>,
    pub params: Vec<ParamAst>,
    pub ret: TypeAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamAst {
    pub name: Option<Ident>,
    pub ty: TypeAst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeHeadAst {
    Int,
    Boolean,
    String,
    Map,
    List,
    Set,
    Named,
}

/// A type as written. Whether a `Named` head is a struct or a type variable
/// is decided by the types module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeAst {
    pub head: TypeHeadAst,
    /// Only meaningful for `Named`.
    pub name: String,
    pub args: Vec<TypeAst>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDeclAst {
    pub name: Ident,
    pub is_input: bool,
    pub ty: TypeAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAst {
    pub name: Ident,
    pub is_initial: bool,
    pub var_decls: Vec<VarDeclAst>,
    pub entry: Option<Block>,
    pub exit: Option<Block>,
    pub sub_states: Vec<StateAst>,
    pub transitions: Vec<TransitionAst>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionAst {
    pub name: Ident,
    pub source: QName,
    pub destination: QName,
    pub trigger: Option<Ident>,
    pub guard: Option<Expr>,
    pub action: Option<Block>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    VarDecl(VarDeclAst),
    Assign { target: QName, value: Expr, span: Span },
    Block(Block),
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::VarDecl(d) => d.span,
            Stmt::Assign { span, .. } => *span,
            Stmt::Block(b) => b.span,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter. All levels are left-associative.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(i64),
    Str(String),
    Bool(bool),
    /// A possibly dotted name: a variable, a state-qualified variable, or a
    /// variable followed by field selections.
    Path(QName),
    /// Field selection on a non-name expression, e.g. `f<int>(x).a`.
    Field(Box<Expr>, Ident),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call {
        callee: Ident,
        type_args: Option<Vec<TypeAst>>,
        args: Vec<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// Resets every span in the tree to the default, so two trees parsed from
/// differently formatted sources compare equal when they have the same shape.
pub fn erase_spans(spec: &mut SpecAst) {
    spec.span = Span::default();
    for d in &mut spec.type_decls {
        match d {
            TypeDecl::Struct(s) => {
                s.span = Span::default();
                s.name.span = Span::default();
                s.type_params.iter_mut().for_each(erase_ident);
                for f in &mut s.fields {
                    erase_ident(&mut f.name);
                    erase_type(&mut f.ty);
                }
            }
            TypeDecl::Fun(f) => {
                f.span = Span::default();
                erase_ident(&mut f.name);
                f.type_params.iter_mut().for_each(erase_ident);
                for p in &mut f.params {
                    if let Some(n) = &mut p.name {
                        erase_ident(n);
                    }
                    erase_type(&mut p.ty);
                }
                erase_type(&mut f.ret);
            }
        }
    }
    erase_state(&mut spec.root);
}

fn erase_ident(i: &mut Ident) {
    i.span = Span::default();
}

fn erase_qname(q: &mut QName) {
    q.span = Span::default();
    q.segments.iter_mut().for_each(erase_ident);
}

fn erase_type(t: &mut TypeAst) {
    t.span = Span::default();
    t.args.iter_mut().for_each(erase_type);
}

fn erase_var(d: &mut VarDeclAst) {
    d.span = Span::default();
    erase_ident(&mut d.name);
    erase_type(&mut d.ty);
}

fn erase_state(s: &mut StateAst) {
    s.span = Span::default();
    erase_ident(&mut s.name);
    s.var_decls.iter_mut().for_each(erase_var);
    if let Some(b) = &mut s.entry {
        erase_block(b);
    }
    if let Some(b) = &mut s.exit {
        erase_block(b);
    }
    s.sub_states.iter_mut().for_each(erase_state);
    for t in &mut s.transitions {
        t.span = Span::default();
        erase_ident(&mut t.name);
        erase_qname(&mut t.source);
        erase_qname(&mut t.destination);
        if let Some(tr) = &mut t.trigger {
            erase_ident(tr);
        }
        if let Some(g) = &mut t.guard {
            erase_expr(g);
        }
        if let Some(a) = &mut t.action {
            erase_block(a);
        }
    }
}

fn erase_block(b: &mut Block) {
    b.span = Span::default();
    for s in &mut b.stmts {
        match s {
            Stmt::VarDecl(d) => erase_var(d),
            Stmt::Assign { target, value, span } => {
                *span = Span::default();
                erase_qname(target);
                erase_expr(value);
            }
            Stmt::Block(b) => erase_block(b),
        }
    }
}

fn erase_expr(e: &mut Expr) {
    e.span = Span::default();
    match &mut e.kind {
        ExprKind::Int(_) | ExprKind::Str(_) | ExprKind::Bool(_) => {}
        ExprKind::Path(q) => erase_qname(q),
        ExprKind::Field(base, f) => {
            erase_expr(base);
            erase_ident(f);
        }
        ExprKind::Unary(_, x) => erase_expr(x),
        ExprKind::Binary(_, l, r) => {
            erase_expr(l);
            erase_expr(r);
        }
        ExprKind::Call {
            callee,
            type_args,
            args,
        } => {
            erase_ident(callee);
            if let Some(ts) = type_args {
                ts.iter_mut().for_each(erase_type);
            }
            args.iter_mut().for_each(erase_expr);
        }
    }
}
