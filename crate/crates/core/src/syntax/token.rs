use crate::span::Span;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Str(String),

    // keywords
    Statechart,
    State,
    Init,
    Entry,
    Exit,
    Transition,
    On,
    Guard,
    Action,
    Struct,
    Fun,
    Var,
    IntTy,
    BooleanTy,
    StringTy,
    Map,
    List,
    Set,
    True,
    False,

    // punctuation
    LBrace,
    RBrace,
    LParen,
    RParen,
    Lt,
    Gt,
    Le,
    Ge,
    Comma,
    Semi,
    Colon,
    Dot,
    Hash,
    Assign,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    AndAnd,
    OrOr,
    Bang,
}

impl TokenKind {
    pub fn keyword(word: &str) -> Option<TokenKind> {
        use TokenKind::*;
        Some(match word {
            "statechart" => Statechart,
            "state" => State,
            "init" => Init,
            "entry" => Entry,
            "exit" => Exit,
            "transition" => Transition,
            "on" => On,
            "guard" => Guard,
            "action" => Action,
            "struct" => Struct,
            "fun" => Fun,
            "var" => Var,
            "int" => IntTy,
            "boolean" => BooleanTy,
            "string" => StringTy,
            "map" => Map,
            "list" => List,
            "set" => Set,
            "true" => True,
            "false" => False,
            _ => return None,
        })
    }

    /// Short human-readable description used in "expected ..." messages.
    pub fn describe(&self) -> String {
        use TokenKind::*;
        let s = match self {
            Ident(_) => "identifier",
            Int(_) => "integer literal",
            Str(_) => "string literal",
            Statechart => "`statechart`",
            State => "`state`",
            Init => "`init`",
            Entry => "`entry`",
            Exit => "`exit`",
            Transition => "`transition`",
            On => "`on`",
            Guard => "`guard`",
            Action => "`action`",
            Struct => "`struct`",
            Fun => "`fun`",
            Var => "`var`",
            IntTy => "`int`",
            BooleanTy => "`boolean`",
            StringTy => "`string`",
            Map => "`map`",
            List => "`list`",
            Set => "`set`",
            True => "`true`",
            False => "`false`",
            LBrace => "`{`",
            RBrace => "`}`",
            LParen => "`(`",
            RParen => "`)`",
            Lt => "`<`",
            Gt => "`>`",
            Le => "`<=`",
            Ge => "`>=`",
            Comma => "`,`",
            Semi => "`;`",
            Colon => "`:`",
            Dot => "`.`",
            Hash => "`#`",
            Assign => "`:=`",
            Arrow => "`->`",
            Plus => "`+`",
            Minus => "`-`",
            Star => "`*`",
            Slash => "`/`",
            Eq => "`=`",
            Ne => "`!=`",
            AndAnd => "`&&`",
            OrOr => "`||`",
            Bang => "`!`",
        };
        s.to_string()
    }

    /// Same variant, ignoring any payload.
    pub fn same_kind(&self, other: &TokenKind) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            other => f.write_str(&other.describe()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}
