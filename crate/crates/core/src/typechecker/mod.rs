//! Whole-spec static checking: declarations first, then every entry/exit
//! block, guard and action under the environments of its state or transition.

pub mod ir;

use crate::diagnostic::{has_errors, sort_diagnostics, Code as DiagCode, Diagnostic};
use crate::model::{resolve, StateId, Statechart, TransitionId};
use crate::scoping::{Access, DeclEntry, DeclList, Environment, Owner, Scopes};
use crate::span::Span;
use crate::syntax::ast::{BinOp, Block, Expr, ExprKind, Ident, QName, SpecAst, Stmt, TypeDecl, UnOp};
use crate::syntax::parse_source;
use crate::types::{
    check_type_decl, lower_type, structural_eq, FieldDecl, FunDecl, StructDecl, TypeContext, TypeDef, TypeExpr,
    TypeTable,
};
use ir::{Callee, Code, Place, TExpr, TExprKind, TStmt, VarRef};
use std::collections::HashMap;
use std::sync::Arc;

/// A spec that passed every check, with resolved and typed code.
#[derive(Debug, Clone)]
pub struct TypedSpec {
    pub chart: Statechart,
    pub table: TypeTable,
    /// `local_types[s][i]` is the type of the `i`-th local of state `s`.
    pub local_types: Vec<Vec<TypeExpr>>,
    pub entry: Vec<Option<Code>>,
    pub exit: Vec<Option<Code>>,
    pub guards: Vec<Option<TExpr>>,
    pub actions: Vec<Option<Code>>,
    pub warnings: Vec<Diagnostic>,
}

impl TypedSpec {
    pub fn scopes(&self) -> Scopes<'_> {
        Scopes::new(&self.chart, |s, d| {
            let i = self
                .chart
                .state(s)
                .locals
                .iter()
                .position(|l| l.name == d.name)
                .expect("declared local");
            self.local_types[s.0][i].clone()
        })
    }

    pub fn var_type(&self, s: StateId, name: &str) -> Option<&TypeExpr> {
        let i = self.chart.state(s).locals.iter().position(|l| l.name == name)?;
        Some(&self.local_types[s.0][i])
    }
}

/// Parses and checks a source file.
pub fn check_source(src: &str) -> Result<TypedSpec, Vec<Diagnostic>> {
    check_spec(&parse_source(src)?)
}

/// Runs every static check. Diagnostics come back in source order; warnings
/// alone do not fail the check and are kept on the `TypedSpec`.
pub fn check_spec(spec: &SpecAst) -> Result<TypedSpec, Vec<Diagnostic>> {
    let (table, mut diags) = build_type_table(&spec.type_decls);

    let chart = match resolve(spec) {
        Ok(c) => c,
        Err(mut ds) => {
            diags.append(&mut ds);
            sort_diagnostics(&mut diags);
            return Err(diags);
        }
    };

    let local_types: Vec<Vec<TypeExpr>> = chart
        .states
        .iter()
        .map(|s| {
            s.locals
                .iter()
                .map(|d| match lower_type(&d.ty, &table, TypeContext::Variable) {
                    Ok(t) => t,
                    Err(mut ds) => {
                        diags.append(&mut ds);
                        poisoned()
                    }
                })
                .collect()
        })
        .collect();

    let scopes = Scopes::new(&chart, |s, d| {
        let i = chart
            .state(s)
            .locals
            .iter()
            .position(|l| l.name == d.name)
            .expect("declared local");
        local_types[s.0][i].clone()
    });

    let mut entry = Vec::with_capacity(chart.states.len());
    let mut exit = Vec::with_capacity(chart.states.len());
    for s in chart.state_ids() {
        let st = chart.state(s);
        let env = scopes.state_env(s);
        let mut run = |b: &Option<Block>| {
            b.as_ref().map(|b| {
                let mut cx = CodeChecker::new(&table, Some(&scopes), Site::State(s));
                let code = cx.code(b, &env, &env);
                diags.append(&mut cx.diags);
                code
            })
        };
        entry.push(run(&st.entry));
        exit.push(run(&st.exit));
    }

    let mut guards = Vec::with_capacity(chart.transitions.len());
    let mut actions = Vec::with_capacity(chart.transitions.len());
    for t in chart.transition_ids() {
        let tr = chart.transition(t);
        let (read, write) = scopes.transition_envs(t);
        let mut cx = CodeChecker::new(&table, Some(&scopes), Site::Transition(t));
        guards.push(tr.guard.as_ref().and_then(|g| cx.guard(g, &read)));
        actions.push(tr.action.as_ref().map(|a| cx.code(a, &read, &write)));
        diags.append(&mut cx.diags);
    }

    diags.extend(always_enabled_warnings(&chart));
    drop(scopes);
    sort_diagnostics(&mut diags);

    if has_errors(&diags) {
        return Err(diags);
    }
    Ok(TypedSpec {
        chart,
        table,
        local_types,
        entry,
        exit,
        guards,
        actions,
        warnings: diags,
    })
}

/// Placeholder type for declarations that failed to check. It is never
/// ground, which lets later phases recognise it and stay quiet.
fn poisoned() -> TypeExpr {
    TypeExpr::Var("?".into())
}

fn always_enabled_warnings(chart: &Statechart) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for t in &chart.transitions {
        if t.trigger.is_some() || t.guard.is_some() {
            continue;
        }
        let siblings = chart.transitions.iter().filter(|u| u.source == t.source).count();
        if siblings > 1 {
            out.push(Diagnostic::new(
                DiagCode::AlwaysEnabled,
                t.name_span,
                format!(
                    "transition `{}` has neither trigger nor guard but `{}` has other outgoing transitions",
                    t.name,
                    chart.qualified_name(t.source)
                ),
            ));
        }
    }
    out
}

/// Declaration pass: builds the global type table and checks every
/// declaration against it. Declaration order does not matter.
pub fn build_type_table(decls: &[TypeDecl]) -> (TypeTable, Vec<Diagnostic>) {
    let mut table = TypeTable::with_builtins();
    let mut diags = Vec::new();
    let mut accepted = Vec::new();

    // Shells carry names and parameter counts so that field types can refer
    // to declarations appearing later in the file.
    for d in decls {
        let name = d.name();
        if table.contains(&name.name) {
            diags.push(Diagnostic::new(
                DiagCode::Duplicate,
                name.span,
                format!("type or function `{}` is already declared", name.name),
            ));
            continue;
        }
        let params = |ps: &[Ident]| ps.iter().map(|p| p.name.clone()).collect::<Vec<_>>();
        let shell = match d {
            TypeDecl::Struct(s) => TypeDef::Struct(StructDecl {
                name: s.name.name.clone(),
                type_params: params(&s.type_params),
                fields: Vec::new(),
                span: s.name.span,
            }),
            TypeDecl::Fun(f) => TypeDef::Fun(FunDecl {
                name: f.name.name.clone(),
                type_params: params(&f.type_params),
                params: Vec::new(),
                ret: TypeExpr::INT,
                builtin: None,
                span: f.name.span,
            }),
        };
        table.insert(shell);
        accepted.push(d);
    }

    let shells = table.clone();
    let mut broken_funs = Vec::new();
    for d in &accepted {
        let def = shells.get(&d.name().name).expect("shell inserted").clone();
        let params = def.type_params().to_vec();
        let ctx = TypeContext::Declaration(&params);
        let full = match (d, def) {
            (TypeDecl::Struct(s), TypeDef::Struct(mut decl)) => {
                for f in &s.fields {
                    match lower_type(&f.ty, &shells, ctx) {
                        Ok(ty) => decl.fields.push(FieldDecl {
                            name: f.name.name.clone(),
                            ty,
                            span: f.name.span,
                        }),
                        Err(mut ds) => diags.append(&mut ds),
                    }
                }
                TypeDef::Struct(decl)
            }
            (TypeDecl::Fun(f), TypeDef::Fun(mut decl)) => {
                let mut ok = true;
                for p in &f.params {
                    match lower_type(&p.ty, &shells, ctx) {
                        Ok(ty) => decl.params.push(ty),
                        Err(mut ds) => {
                            ok = false;
                            diags.append(&mut ds);
                        }
                    }
                }
                match lower_type(&f.ret, &shells, ctx) {
                    Ok(ty) => decl.ret = ty,
                    Err(mut ds) => {
                        ok = false;
                        diags.append(&mut ds);
                    }
                }
                if !ok {
                    // Keep the name known but make every call site quiet.
                    decl.params = f.params.iter().map(|_| poisoned()).collect();
                    decl.ret = poisoned();
                    broken_funs.push(decl.name.clone());
                }
                TypeDef::Fun(decl)
            }
            _ => unreachable!("shell kind matches declaration kind"),
        };
        table.insert(full);
    }

    for d in &accepted {
        if broken_funs.contains(&d.name().name) {
            continue;
        }
        let def = table.get(&d.name().name).expect("declared");
        if let Err(mut ds) = check_type_decl(def, &table) {
            diags.append(&mut ds);
        }
    }
    (table, diags)
}

/// Types an expression in a read environment (no chart context: qualified
/// state paths are not available).
pub fn check_expr(e: &Expr, read: &Environment, table: &TypeTable) -> Result<TypeExpr, Vec<Diagnostic>> {
    let mut cx = CodeChecker::new(table, None, Site::Free).adopt(&[read]);
    let t = cx.expr(e, &Envs::new(read, read));
    match t {
        Some(t) if cx.diags.is_empty() => Ok(t.ty),
        _ => Err(cx.diags),
    }
}

/// The assignment rule: the target is looked up in `write`, the value is
/// typed in `read`, and both must have structurally equal types.
pub fn check_assign(
    target: &QName,
    value: &Expr,
    read: &Environment,
    write: &Environment,
    table: &TypeTable,
) -> Result<(), Vec<Diagnostic>> {
    let mut cx = CodeChecker::new(table, None, Site::Free).adopt(&[read, write]);
    let span = target.span.to(value.span);
    cx.assign(target, value, span, &mut Envs::new(read, write));
    if cx.diags.is_empty() {
        Ok(())
    } else {
        Err(cx.diags)
    }
}

/// A guard must be a boolean expression over the read environment.
pub fn check_guard(guard: Option<&Expr>, read: &Environment, table: &TypeTable) -> Result<(), Vec<Diagnostic>> {
    let Some(g) = guard else { return Ok(()) };
    let mut cx = CodeChecker::new(table, None, Site::Free).adopt(&[read]);
    cx.guard(g, read);
    if cx.diags.is_empty() {
        Ok(())
    } else {
        Err(cx.diags)
    }
}

/// Where a piece of code lives; decides access for state-qualified names.
#[derive(Debug, Clone, Copy)]
enum Site {
    Free,
    State(StateId),
    Transition(TransitionId),
}

/// Read/write environments of the code being checked, with block locals
/// pushed on both.
struct Envs {
    read: Environment,
    write: Environment,
}

impl Envs {
    fn new(read: &Environment, write: &Environment) -> Self {
        Envs {
            read: read.clone(),
            write: write.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Read,
    Write,
}

struct CodeChecker<'a> {
    table: &'a TypeTable,
    scopes: Option<&'a Scopes<'a>>,
    site: Site,
    diags: Vec<Diagnostic>,
    next_block: u32,
    slots: HashMap<(u32, String), usize>,
    next_slot: usize,
}

impl<'a> CodeChecker<'a> {
    fn new(table: &'a TypeTable, scopes: Option<&'a Scopes<'a>>, site: Site) -> Self {
        CodeChecker {
            table,
            scopes,
            site,
            diags: Vec::new(),
            next_block: 0,
            slots: HashMap::new(),
            next_slot: 0,
        }
    }

    /// Registers slots for block-owned lists in externally supplied environments.
    fn adopt(mut self, envs: &[&Environment]) -> Self {
        for env in envs {
            for list in env.lists() {
                if let Owner::Block(b) = list.owner {
                    self.next_block = self.next_block.max(b + 1);
                    for e in &list.entries {
                        let key = (b, e.name.clone());
                        if !self.slots.contains_key(&key) {
                            self.slots.insert(key, self.next_slot);
                            self.next_slot += 1;
                        }
                    }
                }
            }
        }
        self
    }

    fn err(&mut self, code: DiagCode, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(code, span, msg));
    }

    fn code(&mut self, b: &Block, read: &Environment, write: &Environment) -> Code {
        self.slots.clear();
        self.next_slot = 0;
        let mut envs = Envs::new(read, write);
        let stmts = self.block(b, &mut envs);
        Code {
            stmts,
            slots: self.next_slot,
        }
    }

    fn guard(&mut self, g: &Expr, read: &Environment) -> Option<TExpr> {
        let envs = Envs::new(read, &Environment::empty());
        let t = self.expr(g, &envs)?;
        if t.ty != TypeExpr::BOOLEAN {
            self.err(
                DiagCode::GuardNotBool,
                g.span,
                format!("guard must be `boolean`, found `{}`", t.ty),
            );
            return None;
        }
        Some(t)
    }

    fn block(&mut self, b: &Block, outer: &mut Envs) -> Vec<TStmt> {
        let id = self.next_block;
        self.next_block += 1;
        let mut locals = DeclList::new(Owner::Block(id));
        let mut out = Vec::new();
        // Each declaration extends the scope for the statements after it.
        let mut envs = Envs::new(&outer.read, &outer.write);
        for st in &b.stmts {
            match st {
                Stmt::VarDecl(d) => {
                    if locals.get(&d.name.name).is_some() {
                        self.err(
                            DiagCode::Duplicate,
                            d.name.span,
                            format!("variable `{}` declared twice in this block", d.name.name),
                        );
                        continue;
                    }
                    let ty = match lower_type(&d.ty, self.table, TypeContext::Variable) {
                        Ok(t) => t,
                        Err(mut ds) => {
                            self.diags.append(&mut ds);
                            poisoned()
                        }
                    };
                    let slot = self.next_slot;
                    self.next_slot += 1;
                    self.slots.insert((id, d.name.name.clone()), slot);
                    locals.entries.push(DeclEntry {
                        name: d.name.name.clone(),
                        is_input: false,
                        ty: ty.clone(),
                    });
                    let list = Arc::new(locals.clone());
                    envs = Envs {
                        read: outer.read.cons(list.clone()),
                        write: outer.write.cons(list),
                    };
                    out.push(TStmt::Declare { slot, ty });
                }
                Stmt::Assign { target, value, span } => {
                    if let Some(s) = self.assign(target, value, *span, &mut envs) {
                        out.push(s);
                    }
                }
                Stmt::Block(inner) => {
                    let stmts = self.block(inner, &mut envs);
                    out.push(TStmt::Block(stmts));
                }
            }
        }
        out
    }

    fn assign(&mut self, target: &QName, value: &Expr, span: Span, envs: &mut Envs) -> Option<TStmt> {
        let rhs = self.expr(value, envs);
        let lhs = self.place(target, envs, Mode::Write);
        let ((place, lty), rhs) = (lhs?, rhs?);
        if !structural_eq(&lty, &rhs.ty) {
            self.err(
                DiagCode::TypeMismatch,
                span,
                format!(
                    "cannot assign a value of type `{}` to `{}` of type `{}`",
                    rhs.ty,
                    target.dotted(),
                    lty
                ),
            );
            return None;
        }
        Some(TStmt::Assign {
            target: place,
            value: rhs,
            span,
        })
    }

    fn access(&self, owner: StateId) -> Access {
        match (self.site, self.scopes) {
            (Site::State(s), Some(sc)) => sc.state_access(s, owner),
            (Site::Transition(t), Some(sc)) => sc.access(t, owner),
            _ => Access::NONE,
        }
    }

    fn var_ref(&self, owner: Owner, name: &str) -> VarRef {
        match owner {
            Owner::State(s) => VarRef::State {
                state: s,
                name: name.to_string(),
            },
            Owner::Block(b) => VarRef::Local(self.slots[&(b, name.to_string())]),
        }
    }

    /// Resolves a (possibly qualified) name to a storage place and its type.
    fn place(&mut self, q: &QName, envs: &Envs, mode: Mode) -> Option<(Place, TypeExpr)> {
        let segs = &q.segments;
        let (own, other, verb) = match mode {
            Mode::Read => (&envs.read, &envs.write, "read"),
            Mode::Write => (&envs.write, &envs.read, "written"),
        };
        let violation = match mode {
            Mode::Read => DiagCode::ReadViolation,
            Mode::Write => DiagCode::WriteViolation,
        };

        let (var, ty, rest) = if let Some(b) = own.lookup(&segs[0].name) {
            (self.var_ref(b.owner, &segs[0].name), b.entry.ty.clone(), &segs[1..])
        } else if let Some((state, idx)) = self.qualified_state(segs) {
            let scopes = self.scopes.expect("qualified lookup requires a chart");
            let chart = scopes.chart();
            let var_seg = &segs[idx];
            let Some(entry) = scopes.decl_list(state).get(&var_seg.name).cloned() else {
                self.err(
                    DiagCode::Undeclared,
                    q.span,
                    format!(
                        "state `{}` has no variable `{}`",
                        chart.qualified_name(state),
                        var_seg.name
                    ),
                );
                return None;
            };
            let access = self.access(state);
            let ok = match mode {
                Mode::Read => access.readable,
                Mode::Write => access.writable,
            };
            if !ok {
                self.err(
                    violation,
                    q.span,
                    format!("`{}` cannot be {verb} here (access {})", q.dotted(), access),
                );
                return None;
            }
            let var = VarRef::State {
                state,
                name: var_seg.name.clone(),
            };
            (var, entry.ty, &segs[idx + 1..])
        } else if other.lookup(&segs[0].name).is_some() {
            self.err(
                violation,
                segs[0].span,
                format!("`{}` cannot be {verb} here", segs[0].name),
            );
            return None;
        } else {
            self.err(
                DiagCode::Undeclared,
                segs[0].span,
                format!("undeclared variable `{}`", segs[0].name),
            );
            return None;
        };

        if !ty.is_ground() {
            return None;
        }
        let mut ty = ty;
        let mut fields = Vec::new();
        for f in rest {
            ty = self.field_type(&ty, f)?;
            fields.push(f.name.clone());
        }
        Some((Place { var, fields }, ty))
    }

    /// For `Root.A.B.x...`, the state `Root.A.B` and the index of `x`.
    fn qualified_state(&self, segs: &[Ident]) -> Option<(StateId, usize)> {
        let chart = self.scopes?.chart();
        if segs.len() < 2 || segs[0].name != chart.name() {
            return None;
        }
        let mut cur = chart.root;
        let mut i = 1;
        while i + 1 < segs.len() {
            match chart.child_named(cur, &segs[i].name) {
                Some(c) => {
                    cur = c;
                    i += 1;
                }
                None => break,
            }
        }
        Some((cur, i))
    }

    fn field_type(&mut self, ty: &TypeExpr, field: &Ident) -> Option<TypeExpr> {
        let Some(fields) = self.table.struct_fields(ty) else {
            self.err(
                DiagCode::TypeMismatch,
                field.span,
                format!("type `{ty}` has no field `{}`", field.name),
            );
            return None;
        };
        match fields.into_iter().find(|f| f.name == field.name) {
            Some(f) => Some(f.ty),
            None => {
                self.err(
                    DiagCode::UnknownField,
                    field.span,
                    format!("struct `{ty}` has no field `{}`", field.name),
                );
                None
            }
        }
    }

    fn expr(&mut self, e: &Expr, envs: &Envs) -> Option<TExpr> {
        let (kind, ty) = match &e.kind {
            ExprKind::Int(n) => (TExprKind::Int(*n), TypeExpr::INT),
            ExprKind::Str(s) => (TExprKind::Str(s.clone()), TypeExpr::STRING),
            ExprKind::Bool(b) => (TExprKind::Bool(*b), TypeExpr::BOOLEAN),
            ExprKind::Path(q) => {
                let (place, ty) = self.place(q, envs, Mode::Read)?;
                (TExprKind::Load(place), ty)
            }
            ExprKind::Field(base, f) => {
                let base = self.expr(base, envs)?;
                let ty = self.field_type(&base.ty, f)?;
                (TExprKind::Field(Box::new(base), f.name.clone()), ty)
            }
            ExprKind::Unary(op, x) => {
                let x = self.expr(x, envs)?;
                let want = match op {
                    UnOp::Not => TypeExpr::BOOLEAN,
                    UnOp::Neg => TypeExpr::INT,
                };
                if x.ty != want {
                    self.err(
                        DiagCode::TypeMismatch,
                        e.span,
                        format!("operator needs `{want}`, found `{}`", x.ty),
                    );
                    return None;
                }
                (TExprKind::Unary(*op, Box::new(x)), want)
            }
            ExprKind::Binary(op, l, r) => {
                let l = self.expr(l, envs);
                let r = self.expr(r, envs);
                let (l, r) = (l?, r?);
                let ty = self.binary_type(*op, &l.ty, &r.ty, e.span)?;
                (TExprKind::Binary(*op, Box::new(l), Box::new(r)), ty)
            }
            ExprKind::Call {
                callee,
                type_args,
                args,
            } => return self.call(e.span, callee, type_args.as_deref(), args, envs),
        };
        Some(TExpr { kind, ty, span: e.span })
    }

    fn binary_type(&mut self, op: BinOp, l: &TypeExpr, r: &TypeExpr, span: Span) -> Option<TypeExpr> {
        use BinOp::*;
        let int = &TypeExpr::INT;
        let boolean = &TypeExpr::BOOLEAN;
        let string = &TypeExpr::STRING;
        let result = match op {
            Add if l == int && r == int => Some(TypeExpr::INT),
            Add if l == string && r == string => Some(TypeExpr::STRING),
            Sub | Mul | Div if l == int && r == int => Some(TypeExpr::INT),
            Lt | Le | Gt | Ge if l == int && r == int => Some(TypeExpr::BOOLEAN),
            Eq | Ne if structural_eq(l, r) => Some(TypeExpr::BOOLEAN),
            And | Or if l == boolean && r == boolean => Some(TypeExpr::BOOLEAN),
            _ => None,
        };
        if result.is_none() {
            self.err(
                DiagCode::TypeMismatch,
                span,
                format!("operator `{}` cannot combine `{l}` and `{r}`", op.symbol()),
            );
        }
        result
    }

    fn call(
        &mut self,
        span: Span,
        callee: &Ident,
        type_args: Option<&[crate::syntax::ast::TypeAst]>,
        args: &[Expr],
        envs: &Envs,
    ) -> Option<TExpr> {
        let typed_args: Vec<Option<TExpr>> = args.iter().map(|a| self.expr(a, envs)).collect();
        let Some(decl) = self.table.get_fun(&callee.name).cloned() else {
            let msg = if self.table.get_struct(&callee.name).is_some() {
                format!("`{}` is a type, not a function", callee.name)
            } else {
                format!("undeclared function `{}`", callee.name)
            };
            self.err(DiagCode::Undeclared, callee.span, msg);
            return None;
        };

        let mut lowered = Vec::new();
        for t in type_args.unwrap_or(&[]) {
            match lower_type(t, self.table, TypeContext::Variable) {
                Ok(t) => lowered.push(t),
                Err(mut ds) => {
                    self.diags.append(&mut ds);
                    return None;
                }
            }
        }
        if type_args.is_none() && !decl.type_params.is_empty() {
            self.err(
                DiagCode::Unsubstantiated,
                callee.span,
                format!(
                    "call to polymorphic function `{}` needs explicit type arguments <{}>",
                    decl.name,
                    decl.type_params.join(", ")
                ),
            );
            return None;
        }
        let inst = match decl.substantiate(&lowered) {
            Ok(f) => f,
            Err(e) => {
                self.err(e.code(), callee.span, e.to_string());
                return None;
            }
        };
        if inst.params.len() != args.len() {
            self.err(
                DiagCode::Arity,
                span,
                format!(
                    "`{}` takes {} argument(s) but {} were supplied",
                    decl.name,
                    inst.params.len(),
                    args.len()
                ),
            );
            return None;
        }
        if !inst.ret.is_ground() {
            return None;
        }
        let mut out = Vec::with_capacity(args.len());
        let mut ok = true;
        for ((arg, param), src) in typed_args.into_iter().zip(&inst.params).zip(args) {
            match arg {
                Some(a) if structural_eq(&a.ty, param) => out.push(a),
                Some(a) => {
                    ok = false;
                    if param.is_ground() {
                        self.err(
                            DiagCode::TypeMismatch,
                            src.span,
                            format!("argument of `{}` should be `{param}`, found `{}`", decl.name, a.ty),
                        );
                    }
                }
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        let callee = match decl.builtin {
            Some(b) => Callee::Builtin(b),
            None => Callee::User(decl.name.clone()),
        };
        Some(TExpr {
            kind: TExprKind::Call { callee, args: out },
            ty: inst.ret,
            span,
        })
    }
}
