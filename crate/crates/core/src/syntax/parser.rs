//! LL-style recursive-descent parser for `.stabl` files.
//!
//! ```text
//! spec        := typedecl* statechart
//! typedecl    := "struct" generics? IDENT generics? "="? "{" (IDENT ":" type ";")* "}"
//!              | "fun" IDENT generics? "(" params? ")" ":" type ";"
//! generics    := "<" IDENT ("," IDENT)* ">"
//! statechart  := "statechart" IDENT statebody
//! statebody   := "{" (vardecl | entry | exit | state | transition)* "}"
//! state       := "init"? "state" IDENT "init"? statebody
//! vardecl     := "var" IDENT "#"? ("," IDENT "#"?)* ":" type ";"
//! type        := "int" | "boolean" | "string" | IDENT
//!              | ("map"|"list"|"set"|IDENT) "<" type ("," type)* ">"
//! transition  := "transition" IDENT ":" qname "->" qname
//!                ("on" IDENT)? ("guard" expr)? ("action" block)? ";"
//! block       := "{" (vardecl | qname ":=" expr ";" | block)* "}"
//! ```
//!
//! Parsing stops at the first syntax error.

use super::ast::*;
use super::lexer::tokenize;
use super::token::{Token, TokenKind};
use crate::diagnostic::{Code, Diagnostic};
use crate::span::{Pos, Span};

const MAX_DEPTH: u32 = 128;

type PResult<T> = Result<T, Diagnostic>;

/// Lexes and parses a complete source file.
pub fn parse_source(src: &str) -> Result<SpecAst, Vec<Diagnostic>> {
    let tokens = tokenize(src)?;
    parse(&tokens).map_err(|d| vec![d])
}

pub fn parse(tokens: &[Token]) -> PResult<SpecAst> {
    let mut p = Parser::new(tokens);
    p.spec()
}

/// Parses a standalone expression (used by tooling and tests).
pub fn parse_expr_source(src: &str) -> Result<Expr, Vec<Diagnostic>> {
    let tokens = tokenize(src)?;
    let mut p = Parser::new(&tokens);
    let e = p.expr().map_err(|d| vec![d])?;
    p.expect_eof().map_err(|d| vec![d])?;
    Ok(e)
}

/// Parses a standalone type expression.
pub fn parse_type_source(src: &str) -> Result<TypeAst, Vec<Diagnostic>> {
    let tokens = tokenize(src)?;
    let mut p = Parser::new(&tokens);
    let t = p.ty().map_err(|d| vec![d])?;
    p.expect_eof().map_err(|d| vec![d])?;
    Ok(t)
}

struct Parser<'t> {
    tokens: &'t [Token],
    idx: usize,
    depth: u32,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token]) -> Self {
        Parser {
            tokens,
            idx: 0,
            depth: 0,
        }
    }

    fn peek(&self) -> Option<&'t TokenKind> {
        self.tokens.get(self.idx).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.idx + n).map(|t| &t.kind)
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek().is_some_and(|k| k.same_kind(kind))
    }

    fn here(&self) -> Span {
        match self.tokens.get(self.idx) {
            Some(t) => t.span,
            None => {
                let end = self.tokens.last().map(|t| t.span.end).unwrap_or(Pos::START);
                Span::new(end, end)
            }
        }
    }

    fn prev_end(&self) -> Pos {
        if self.idx == 0 {
            Pos::START
        } else {
            self.tokens[self.idx - 1].span.end
        }
    }

    fn span_from(&self, start: Pos) -> Span {
        Span::new(start, self.prev_end().max(start))
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.idx];
        self.idx += 1;
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> Option<&'t Token> {
        if self.at(kind) {
            Some(self.bump())
        } else {
            None
        }
    }

    fn error(&self, expected: &[TokenKind]) -> Diagnostic {
        let wanted = expected.iter().map(TokenKind::describe).collect::<Vec<_>>().join(", ");
        let found = match self.peek() {
            Some(k) => k.to_string(),
            None => "end of file".to_string(),
        };
        let msg = if expected.len() == 1 {
            format!("expected {wanted}, found {found}")
        } else {
            format!("expected one of {wanted}; found {found}")
        };
        Diagnostic::new(Code::Syntax, self.here(), msg)
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<&'t Token> {
        self.eat(&kind).ok_or_else(|| self.error(&[kind]))
    }

    fn expect_eof(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(k) => Err(Diagnostic::new(
                Code::Syntax,
                self.here(),
                format!("expected end of file, found {k}"),
            )),
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let t = self.bump();
                Ok(Ident::new(name.clone(), t.span))
            }
            _ => Err(self.error(&[TokenKind::Ident(String::new())])),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(Diagnostic::new(Code::Syntax, self.here(), "nesting too deep"))
        } else {
            Ok(())
        }
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    // ---- declarations ----

    fn spec(&mut self) -> PResult<SpecAst> {
        let start = self.here().start;
        let mut type_decls = Vec::new();
        loop {
            match self.peek() {
                Some(TokenKind::Struct) => type_decls.push(TypeDecl::Struct(self.struct_decl()?)),
                Some(TokenKind::Fun) => type_decls.push(TypeDecl::Fun(self.fun_decl()?)),
                Some(TokenKind::Statechart) => break,
                _ => return Err(self.error(&[TokenKind::Struct, TokenKind::Fun, TokenKind::Statechart])),
            }
        }
        let kw = self.expect(TokenKind::Statechart)?;
        let name = self.ident()?;
        let root = self.state_body(name, false, kw.span.start)?;
        self.expect_eof()?;
        Ok(SpecAst {
            type_decls,
            root,
            span: self.span_from(start),
        })
    }

    fn generics(&mut self) -> PResult<Vec<Ident>> {
        let mut params = Vec::new();
        if self.eat(&TokenKind::Lt).is_some() {
            params.push(self.ident()?);
            while self.eat(&TokenKind::Comma).is_some() {
                params.push(self.ident()?);
            }
            self.expect(TokenKind::Gt)?;
        }
        Ok(params)
    }

    fn struct_decl(&mut self) -> PResult<StructAst> {
        let start = self.expect(TokenKind::Struct)?.span.start;
        let mut type_params = self.generics()?;
        let name = self.ident()?;
        if type_params.is_empty() {
            type_params = self.generics()?;
        }
        self.eat(&TokenKind::Eq);
        self.expect(TokenKind::LBrace)?;
        let mut fields = Vec::new();
        while !self.at(&TokenKind::RBrace) {
            let fname = self.ident()?;
            self.expect(TokenKind::Colon)?;
            let ty = self.ty()?;
            self.expect(TokenKind::Semi)?;
            fields.push(FieldAst { name: fname, ty });
        }
        self.expect(TokenKind::RBrace)?;
        Ok(StructAst {
            name,
            type_params,
            fields,
            span: self.span_from(start),
        })
    }

    fn fun_decl(&mut self) -> PResult<FunAst> {
        let start = self.expect(TokenKind::Fun)?.span.start;
        let name = self.ident()?;
        let type_params = self.generics()?;
        self.expect(TokenKind::LParen)?;
        let mut params = Vec::new();
        if !self.at(&TokenKind::RParen) {
            params.push(self.param()?);
            while self.eat(&TokenKind::Comma).is_some() {
                params.push(self.param()?);
            }
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::Colon)?;
        let ret = self.ty()?;
        self.expect(TokenKind::Semi)?;
        Ok(FunAst {
            name,
            type_params,
            params,
            ret,
            span: self.span_from(start),
        })
    }

    fn param(&mut self) -> PResult<ParamAst> {
        let named =
            matches!(self.peek(), Some(TokenKind::Ident(_))) && matches!(self.peek_at(1), Some(TokenKind::Colon));
        let name = if named {
            let n = self.ident()?;
            self.bump();
            Some(n)
        } else {
            None
        };
        Ok(ParamAst { name, ty: self.ty()? })
    }

    fn ty(&mut self) -> PResult<TypeAst> {
        self.enter()?;
        let r = self.ty_inner();
        self.leave();
        r
    }

    fn ty_inner(&mut self) -> PResult<TypeAst> {
        let span = self.here();
        let (head, name) = match self.peek() {
            Some(TokenKind::IntTy) => (TypeHeadAst::Int, String::new()),
            Some(TokenKind::BooleanTy) => (TypeHeadAst::Boolean, String::new()),
            Some(TokenKind::StringTy) => (TypeHeadAst::String, String::new()),
            Some(TokenKind::Map) => (TypeHeadAst::Map, String::new()),
            Some(TokenKind::List) => (TypeHeadAst::List, String::new()),
            Some(TokenKind::Set) => (TypeHeadAst::Set, String::new()),
            Some(TokenKind::Ident(n)) => (TypeHeadAst::Named, n.clone()),
            _ => {
                return Err(self.error(&[
                    TokenKind::IntTy,
                    TokenKind::BooleanTy,
                    TokenKind::StringTy,
                    TokenKind::Map,
                    TokenKind::List,
                    TokenKind::Set,
                    TokenKind::Ident(String::new()),
                ]))
            }
        };
        self.bump();
        let mut args = Vec::new();
        let takes_args = !matches!(head, TypeHeadAst::Int | TypeHeadAst::Boolean | TypeHeadAst::String);
        if takes_args && self.eat(&TokenKind::Lt).is_some() {
            args.push(self.ty()?);
            while self.eat(&TokenKind::Comma).is_some() {
                args.push(self.ty()?);
            }
            self.expect(TokenKind::Gt)?;
        }
        Ok(TypeAst {
            head,
            name,
            args,
            span: self.span_from(span.start),
        })
    }

    // ---- states ----

    fn state(&mut self) -> PResult<StateAst> {
        let start = self.here().start;
        let mut is_initial = self.eat(&TokenKind::Init).is_some();
        self.expect(TokenKind::State)?;
        let name = self.ident()?;
        is_initial |= self.eat(&TokenKind::Init).is_some();
        self.state_body(name, is_initial, start)
    }

    fn state_body(&mut self, name: Ident, is_initial: bool, start: Pos) -> PResult<StateAst> {
        self.enter()?;
        let r = self.state_body_inner(name, is_initial, start);
        self.leave();
        r
    }

    fn state_body_inner(&mut self, name: Ident, is_initial: bool, start: Pos) -> PResult<StateAst> {
        self.expect(TokenKind::LBrace)?;
        let mut state = StateAst {
            name,
            is_initial,
            var_decls: Vec::new(),
            entry: None,
            exit: None,
            sub_states: Vec::new(),
            transitions: Vec::new(),
            span: Span::default(),
        };
        loop {
            match self.peek() {
                Some(TokenKind::RBrace) => break,
                Some(TokenKind::Var) => state.var_decls.extend(self.var_decls()?),
                Some(TokenKind::Entry) => {
                    let span = self.bump().span;
                    if state.entry.is_some() {
                        return Err(Diagnostic::new(Code::Syntax, span, "duplicate entry block"));
                    }
                    state.entry = Some(self.block()?);
                }
                Some(TokenKind::Exit) => {
                    let span = self.bump().span;
                    if state.exit.is_some() {
                        return Err(Diagnostic::new(Code::Syntax, span, "duplicate exit block"));
                    }
                    state.exit = Some(self.block()?);
                }
                Some(TokenKind::State | TokenKind::Init) => state.sub_states.push(self.state()?),
                Some(TokenKind::Transition) => state.transitions.push(self.transition()?),
                _ => {
                    return Err(self.error(&[
                        TokenKind::Var,
                        TokenKind::Entry,
                        TokenKind::Exit,
                        TokenKind::State,
                        TokenKind::Init,
                        TokenKind::Transition,
                        TokenKind::RBrace,
                    ]))
                }
            }
        }
        self.expect(TokenKind::RBrace)?;
        state.span = self.span_from(start);
        Ok(state)
    }

    fn var_decls(&mut self) -> PResult<Vec<VarDeclAst>> {
        let start = self.expect(TokenKind::Var)?.span.start;
        let mut names = Vec::new();
        loop {
            let name = self.ident()?;
            let is_input = self.eat(&TokenKind::Hash).is_some();
            names.push((name, is_input));
            if self.eat(&TokenKind::Comma).is_none() {
                break;
            }
        }
        self.expect(TokenKind::Colon)?;
        let ty = self.ty()?;
        self.expect(TokenKind::Semi)?;
        let span = self.span_from(start);
        Ok(names
            .into_iter()
            .map(|(name, is_input)| VarDeclAst {
                name,
                is_input,
                ty: ty.clone(),
                span,
            })
            .collect())
    }

    fn qname(&mut self) -> PResult<QName> {
        let first = self.ident()?;
        let start = first.span.start;
        let mut segments = vec![first];
        while self.at(&TokenKind::Dot) && matches!(self.peek_at(1), Some(TokenKind::Ident(_))) {
            self.bump();
            segments.push(self.ident()?);
        }
        Ok(QName {
            segments,
            span: self.span_from(start),
        })
    }

    fn transition(&mut self) -> PResult<TransitionAst> {
        let start = self.expect(TokenKind::Transition)?.span.start;
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let source = self.qname()?;
        let arrow = self.expect(TokenKind::Arrow)?.span;
        if !matches!(self.peek(), Some(TokenKind::Ident(_))) {
            let found = match self.peek() {
                Some(k) => k.to_string(),
                None => "end of file".into(),
            };
            return Err(Diagnostic::new(
                Code::Syntax,
                arrow,
                format!(
                    "transition `{}` is missing a destination state (found {found})",
                    name.name
                ),
            ));
        }
        let destination = self.qname()?;
        let trigger = if self.eat(&TokenKind::On).is_some() {
            Some(self.ident()?)
        } else {
            None
        };
        let guard = if self.eat(&TokenKind::Guard).is_some() {
            Some(self.expr()?)
        } else {
            None
        };
        let action = if self.eat(&TokenKind::Action).is_some() {
            Some(self.block()?)
        } else {
            None
        };
        if !self.at(&TokenKind::Semi) {
            let mut expected = Vec::new();
            if trigger.is_none() && guard.is_none() && action.is_none() {
                expected.push(TokenKind::On);
            }
            if guard.is_none() && action.is_none() {
                expected.push(TokenKind::Guard);
            }
            if action.is_none() {
                expected.push(TokenKind::Action);
            }
            expected.push(TokenKind::Semi);
            return Err(self.error(&expected));
        }
        self.bump();
        Ok(TransitionAst {
            name,
            source,
            destination,
            trigger,
            guard,
            action,
            span: self.span_from(start),
        })
    }

    // ---- code ----

    fn block(&mut self) -> PResult<Block> {
        self.enter()?;
        let r = self.block_inner();
        self.leave();
        r
    }

    fn block_inner(&mut self) -> PResult<Block> {
        let start = self.expect(TokenKind::LBrace)?.span.start;
        let mut stmts = Vec::new();
        loop {
            match self.peek() {
                Some(TokenKind::RBrace) => break,
                Some(TokenKind::Var) => stmts.extend(self.var_decls()?.into_iter().map(Stmt::VarDecl)),
                Some(TokenKind::LBrace) => stmts.push(Stmt::Block(self.block()?)),
                Some(TokenKind::Ident(_)) => {
                    let target = self.qname()?;
                    self.expect(TokenKind::Assign)?;
                    let value = self.expr()?;
                    self.expect(TokenKind::Semi)?;
                    let span = self.span_from(target.span.start);
                    stmts.push(Stmt::Assign { target, value, span });
                }
                _ => {
                    return Err(self.error(&[
                        TokenKind::Var,
                        TokenKind::Ident(String::new()),
                        TokenKind::LBrace,
                        TokenKind::RBrace,
                    ]))
                }
            }
        }
        self.expect(TokenKind::RBrace)?;
        Ok(Block {
            stmts,
            span: self.span_from(start),
        })
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek()? {
            TokenKind::OrOr => BinOp::Or,
            TokenKind::AndAnd => BinOp::And,
            TokenKind::Eq => BinOp::Eq,
            TokenKind::Ne => BinOp::Ne,
            TokenKind::Lt => BinOp::Lt,
            TokenKind::Le => BinOp::Le,
            TokenKind::Gt => BinOp::Gt,
            TokenKind::Ge => BinOp::Ge,
            TokenKind::Plus => BinOp::Add,
            TokenKind::Minus => BinOp::Sub,
            TokenKind::Star => BinOp::Mul,
            TokenKind::Slash => BinOp::Div,
            _ => return None,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        self.enter()?;
        let r = self.binary_inner(min_prec);
        self.leave();
        r
    }

    fn binary_inner(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let op = match self.peek() {
            Some(TokenKind::Bang) => UnOp::Not,
            Some(TokenKind::Minus) => UnOp::Neg,
            _ => return self.postfix(),
        };
        self.enter()?;
        let start = self.bump().span.start;
        let operand = self.unary();
        self.leave();
        let operand = operand?;
        let span = Span::new(start, operand.span.end);
        Ok(Expr {
            kind: ExprKind::Unary(op, Box::new(operand)),
            span,
        })
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        while self.at(&TokenKind::Dot) {
            self.bump();
            let field = self.ident()?;
            let span = e.span.to(field.span);
            e = Expr {
                kind: ExprKind::Field(Box::new(e), field),
                span,
            };
        }
        Ok(e)
    }

    /// Tries to read `< type, ... > (` after a callee name; rewinds on failure.
    fn try_type_args(&mut self) -> Option<Vec<TypeAst>> {
        let save = self.idx;
        let depth = self.depth;
        let attempt = (|| -> PResult<Vec<TypeAst>> {
            self.expect(TokenKind::Lt)?;
            let mut args = vec![self.ty()?];
            while self.eat(&TokenKind::Comma).is_some() {
                args.push(self.ty()?);
            }
            self.expect(TokenKind::Gt)?;
            if !self.at(&TokenKind::LParen) {
                return Err(self.error(&[TokenKind::LParen]));
            }
            Ok(args)
        })();
        match attempt {
            Ok(args) => Some(args),
            Err(_) => {
                self.idx = save;
                self.depth = depth;
                None
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.here();
        let kind = match self.peek() {
            Some(TokenKind::Int(n)) => {
                self.bump();
                ExprKind::Int(*n)
            }
            Some(TokenKind::Str(s)) => {
                self.bump();
                ExprKind::Str(s.clone())
            }
            Some(TokenKind::True) => {
                self.bump();
                ExprKind::Bool(true)
            }
            Some(TokenKind::False) => {
                self.bump();
                ExprKind::Bool(false)
            }
            Some(TokenKind::LParen) => {
                self.bump();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                // Parentheses only group; keep the inner node but widen nothing.
                return Ok(inner);
            }
            Some(TokenKind::Ident(_)) => {
                let is_call = matches!(self.peek_at(1), Some(TokenKind::LParen | TokenKind::Lt));
                if is_call {
                    let callee = self.ident()?;
                    let type_args = if self.at(&TokenKind::Lt) {
                        self.try_type_args()
                    } else {
                        None
                    };
                    if self.at(&TokenKind::LParen) {
                        self.bump();
                        let mut args = Vec::new();
                        if !self.at(&TokenKind::RParen) {
                            args.push(self.expr()?);
                            while self.eat(&TokenKind::Comma).is_some() {
                                args.push(self.expr()?);
                            }
                        }
                        self.expect(TokenKind::RParen)?;
                        ExprKind::Call {
                            callee,
                            type_args,
                            args,
                        }
                    } else {
                        // `x < y`: a plain name followed by a comparison.
                        let span = callee.span;
                        ExprKind::Path(QName {
                            segments: vec![callee],
                            span,
                        })
                    }
                } else {
                    ExprKind::Path(self.qname()?)
                }
            }
            _ => {
                return Err(self.error(&[
                    TokenKind::Int(0),
                    TokenKind::Str(String::new()),
                    TokenKind::True,
                    TokenKind::False,
                    TokenKind::Ident(String::new()),
                    TokenKind::LParen,
                    TokenKind::Bang,
                    TokenKind::Minus,
                ]))
            }
        };
        Ok(Expr {
            kind,
            span: self.span_from(span.start),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_chart() {
        let spec = parse_source("statechart S { state A init {} }").unwrap();
        assert_eq!(spec.root.name.name, "S");
        assert_eq!(spec.root.sub_states.len(), 1);
        assert!(spec.root.sub_states[0].is_initial);
        assert_eq!(spec.root.sub_states[0].name.name, "A");
    }

    #[test]
    fn init_prefix_form() {
        let spec = parse_source("statechart S { init state A {} state B {} }").unwrap();
        assert!(spec.root.sub_states[0].is_initial);
        assert!(!spec.root.sub_states[1].is_initial);
    }

    #[test]
    fn missing_destination_reports_arrow() {
        let src = "statechart S {\n  init state A {}\n  transition t : A -> ;\n}";
        let errs = parse_source(src).unwrap_err();
        assert_eq!(errs[0].code, Code::Syntax);
        assert_eq!(errs[0].span.start.line, 3);
        assert_eq!(errs[0].span.start.col, 20);
        assert_eq!(errs[0].span.end.col, 22);
    }

    #[test]
    fn missing_semicolon_lists_expected_tokens() {
        let errs = parse_source("statechart S { init state A {} transition t : A -> A on e }").unwrap_err();
        let msg = &errs[0].message;
        assert!(
            msg.contains("`guard`") && msg.contains("`action`") && msg.contains("`;`"),
            "{msg}"
        );
    }

    #[test]
    fn generic_call_vs_comparison() {
        let e = parse_expr_source("get_map<int, string>(m, 1) = x").unwrap();
        let ExprKind::Binary(BinOp::Eq, lhs, _) = e.kind else {
            panic!("expected equality")
        };
        let ExprKind::Call { type_args, args, .. } = lhs.kind else {
            panic!("expected call")
        };
        assert_eq!(type_args.unwrap().len(), 2);
        assert_eq!(args.len(), 2);

        let e = parse_expr_source("a < b").unwrap();
        assert!(matches!(e.kind, ExprKind::Binary(BinOp::Lt, _, _)));
        let e = parse_expr_source("a < b && c > (d)").unwrap();
        assert!(matches!(e.kind, ExprKind::Binary(BinOp::And, _, _)));
    }

    #[test]
    fn precedence() {
        let e = parse_expr_source("1 + 2 * 3 = 7 || false").unwrap();
        let ExprKind::Binary(BinOp::Or, lhs, _) = e.kind else {
            panic!()
        };
        let ExprKind::Binary(BinOp::Eq, sum, _) = lhs.kind else {
            panic!()
        };
        let ExprKind::Binary(BinOp::Add, _, prod) = sum.kind else {
            panic!()
        };
        assert!(matches!(prod.kind, ExprKind::Binary(BinOp::Mul, _, _)));
    }

    #[test]
    fn qualified_names_and_fields() {
        let e = parse_expr_source("Student.LoggedOut.user").unwrap();
        let ExprKind::Path(q) = e.kind else { panic!() };
        assert_eq!(q.dotted(), "Student.LoggedOut.user");
        let e = parse_expr_source("f(x).a").unwrap();
        assert!(matches!(e.kind, ExprKind::Field(_, _)));
    }

    #[test]
    fn type_decls() {
        let src = "struct<A> S1 { a : A; }\n\
                   struct<A, B> S2 { s1 : S1<B>; s2 : S1<A>; s3 : S1<int>; s4 : string; }\n\
                   fun sum(int, int) : int;\n\
                   fun f<A, B>(p1 : B, p2 : S1<A>) : S1<S2<A, B>>;\n\
                   statechart S {}";
        let spec = parse_source(src).unwrap();
        assert_eq!(spec.type_decls.len(), 4);
        let TypeDecl::Fun(f) = &spec.type_decls[3] else {
            panic!()
        };
        assert_eq!(f.type_params.len(), 2);
        assert_eq!(f.ret.args[0].args.len(), 2);
    }

    #[test]
    fn multi_name_var_decl() {
        let spec = parse_source("statechart S { var student, room : int; var user # : int; }").unwrap();
        let names: Vec<_> = spec.root.var_decls.iter().map(|d| d.name.name.as_str()).collect();
        assert_eq!(names, ["student", "room", "user"]);
        assert!(spec.root.var_decls[2].is_input);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("{}1{}", "(".repeat(10_000), ")".repeat(10_000));
        assert!(parse_expr_source(&src).is_err());
        let src = format!("{}1", "-".repeat(10_000));
        assert!(parse_expr_source(&src).is_err());
    }
}
