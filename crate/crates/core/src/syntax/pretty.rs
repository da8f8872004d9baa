//! Canonical source rendering of the syntax tree.

use super::ast::*;
use super::lexer::quote;
use std::fmt::Write;

pub fn print_spec(spec: &SpecAst) -> String {
    let mut p = Printer::default();
    for d in &spec.type_decls {
        p.type_decl(d);
    }
    if !spec.type_decls.is_empty() {
        p.out.push('\n');
    }
    p.state(&spec.root, true);
    p.out
}

pub fn print_type(t: &TypeAst) -> String {
    let mut s = String::new();
    write_type(&mut s, t);
    s
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_type(out: &mut String, t: &TypeAst) {
    out.push_str(match t.head {
        TypeHeadAst::Int => "int",
        TypeHeadAst::Boolean => "boolean",
        TypeHeadAst::String => "string",
        TypeHeadAst::Map => "map",
        TypeHeadAst::List => "list",
        TypeHeadAst::Set => "set",
        TypeHeadAst::Named => &t.name,
    });
    if !t.args.is_empty() {
        out.push('<');
        for (i, a) in t.args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_type(out, a);
        }
        out.push('>');
    }
}

fn write_expr(out: &mut String, e: &Expr, ctx_prec: u8) {
    match &e.kind {
        ExprKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Str(s) => out.push_str(&quote(s)),
        ExprKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprKind::Path(q) => out.push_str(&q.dotted()),
        ExprKind::Field(base, f) => {
            // Field selection binds tighter than anything except atoms.
            let needs_parens = !matches!(base.kind, ExprKind::Call { .. } | ExprKind::Field(..));
            if needs_parens {
                out.push('(');
            }
            write_expr(out, base, 0);
            if needs_parens {
                out.push(')');
            }
            out.push('.');
            out.push_str(&f.name);
        }
        ExprKind::Unary(op, x) => {
            out.push(match op {
                UnOp::Not => '!',
                UnOp::Neg => '-',
            });
            let atomic = !matches!(x.kind, ExprKind::Binary(..));
            if atomic {
                write_expr(out, x, u8::MAX);
            } else {
                out.push('(');
                write_expr(out, x, 0);
                out.push(')');
            }
        }
        ExprKind::Binary(op, l, r) => {
            let prec = op.precedence();
            let parens = prec < ctx_prec;
            if parens {
                out.push('(');
            }
            write_expr(out, l, prec);
            let _ = write!(out, " {} ", op.symbol());
            // Left-associative: an equal-precedence right operand needs parentheses.
            // `a < b > (c)` would reparse as a generic call, so a bare name
            // right of `<` is always parenthesized.
            let bare_name = matches!(&r.kind, ExprKind::Path(q) if q.segments.len() == 1);
            if *op == BinOp::Lt && bare_name {
                out.push('(');
                write_expr(out, r, 0);
                out.push(')');
            } else {
                write_expr(out, r, prec + 1);
            }
            if parens {
                out.push(')');
            }
        }
        ExprKind::Call {
            callee,
            type_args,
            args,
        } => {
            out.push_str(&callee.name);
            if let Some(ts) = type_args {
                out.push('<');
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_type(out, t);
                }
                out.push('>');
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
    }
}

#[derive(Default)]
struct Printer {
    out: String,
    indent: usize,
}

impl Printer {
    fn line(&mut self, text: &str) {
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn type_decl(&mut self, d: &TypeDecl) {
        match d {
            TypeDecl::Struct(s) => {
                let mut head = String::from("struct");
                push_generics(&mut head, &s.type_params);
                let _ = write!(head, " {} {{", s.name.name);
                self.line(&head);
                self.indent += 1;
                for f in &s.fields {
                    self.line(&format!("{} : {};", f.name.name, print_type(&f.ty)));
                }
                self.indent -= 1;
                self.line("}");
            }
            TypeDecl::Fun(f) => {
                let mut s = format!("fun {}", f.name.name);
                push_generics(&mut s, &f.type_params);
                s.push('(');
                for (i, p) in f.params.iter().enumerate() {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    if let Some(n) = &p.name {
                        let _ = write!(s, "{} : ", n.name);
                    }
                    write_type(&mut s, &p.ty);
                }
                let _ = write!(s, ") : {};", print_type(&f.ret));
                self.line(&s);
            }
        }
    }

    fn state(&mut self, s: &StateAst, is_root: bool) {
        let head = if is_root {
            format!("statechart {} {{", s.name.name)
        } else if s.is_initial {
            format!("init state {} {{", s.name.name)
        } else {
            format!("state {} {{", s.name.name)
        };
        self.line(&head);
        self.indent += 1;
        for d in &s.var_decls {
            self.var_decl(d);
        }
        if let Some(b) = &s.entry {
            self.block_with_head("entry", b, "");
        }
        if let Some(b) = &s.exit {
            self.block_with_head("exit", b, "");
        }
        for c in &s.sub_states {
            self.state(c, false);
        }
        for t in &s.transitions {
            self.transition(t);
        }
        self.indent -= 1;
        self.line("}");
    }

    fn var_decl(&mut self, d: &VarDeclAst) {
        let hash = if d.is_input { " #" } else { "" };
        self.line(&format!("var {}{} : {};", d.name.name, hash, print_type(&d.ty)));
    }

    fn block_with_head(&mut self, head: &str, b: &Block, tail: &str) {
        if b.stmts.is_empty() {
            self.line(&format!("{head} {{}}{tail}"));
            return;
        }
        self.line(&format!("{head} {{"));
        self.indent += 1;
        self.stmts(&b.stmts);
        self.indent -= 1;
        self.line(&format!("}}{tail}"));
    }

    fn stmts(&mut self, stmts: &[Stmt]) {
        for st in stmts {
            match st {
                Stmt::VarDecl(d) => self.var_decl(d),
                Stmt::Assign { target, value, .. } => {
                    self.line(&format!("{} := {};", target.dotted(), print_expr(value)))
                }
                Stmt::Block(b) => {
                    if b.stmts.is_empty() {
                        self.line("{}");
                    } else {
                        self.line("{");
                        self.indent += 1;
                        self.stmts(&b.stmts);
                        self.indent -= 1;
                        self.line("}");
                    }
                }
            }
        }
    }

    fn transition(&mut self, t: &TransitionAst) {
        let mut head = format!(
            "transition {} : {} -> {}",
            t.name.name,
            t.source.dotted(),
            t.destination.dotted()
        );
        if let Some(tr) = &t.trigger {
            let _ = write!(head, " on {}", tr.name);
        }
        if let Some(g) = &t.guard {
            let _ = write!(head, " guard {}", print_expr(g));
        }
        match &t.action {
            None => self.line(&format!("{head};")),
            Some(a) => self.block_with_head(&format!("{head} action"), a, ";"),
        }
    }
}

fn push_generics(out: &mut String, params: &[Ident]) {
    if !params.is_empty() {
        out.push('<');
        for (i, p) in params.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&p.name);
        }
        out.push('>');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parser::{parse_expr_source, parse_source};

    fn roundtrip_expr(src: &str) {
        let mut a = parse_expr_source(src).unwrap();
        let printed = print_expr(&a);
        let mut b = parse_expr_source(&printed).unwrap();
        let wrap = |e: &mut Expr| {
            // reuse the spec-level eraser by wrapping into a guard
            let mut spec = parse_source("statechart S { init state A {} transition t : A -> A guard true; }").unwrap();
            spec.root.transitions[0].guard = Some(e.clone());
            erase_spans(&mut spec);
            *e = spec.root.transitions[0].guard.take().unwrap();
        };
        wrap(&mut a);
        wrap(&mut b);
        assert_eq!(a, b, "{src} printed as {printed}");
    }

    #[test]
    fn expression_round_trips() {
        for src in [
            "1 - (2 - 3)",
            "(1 - 2) - 3",
            "-(1 + 2) * 3",
            "!(a && b) || c",
            "f<int>(x).a.b",
            "(x).y",
            "a.b.c = \"q\\\"\"",
            "g<map<int, list<string>>>(m) != h()",
            "x + a < b > (c || d)",
            "f(a < b, c > (d))",
        ] {
            roundtrip_expr(src);
        }
    }
}
