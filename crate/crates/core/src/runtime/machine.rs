//! Configurations, stores and event steps.

use super::builtins;
use super::value::{conforms, default_value, Value};
use crate::diagnostic::{Code as DiagCode, Diagnostic};
use crate::model::{StateId, TransitionId};
use crate::span::Span;
use crate::syntax::ast::{BinOp, UnOp};
use crate::typechecker::ir::{Callee, Code, Place, TExpr, TExprKind, TStmt, VarRef};
use crate::typechecker::TypedSpec;
use serde::Serialize;
use std::fmt;

/// A runtime failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fault {
    #[serde(serialize_with = "code_str")]
    pub code: DiagCode,
    pub message: String,
    /// Source location of the failing construct, when there is one.
    pub span: Option<Span>,
    /// The transition being evaluated or fired.
    pub transition: Option<TransitionId>,
}

fn code_str<S: serde::Serializer>(c: &DiagCode, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.as_str())
}

impl Fault {
    pub fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Fault {
            code,
            message: message.into(),
            span: None,
            transition: None,
        }
    }

    fn at(mut self, span: Span) -> Self {
        self.span.get_or_insert(span);
        self
    }

    fn during(mut self, t: TransitionId) -> Self {
        self.transition.get_or_insert(t);
        self
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::new(self.code, self.span.unwrap_or_default(), self.message.clone())
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)?;
        if let Some(s) = self.span {
            write!(f, " at {s}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Fault {}

/// Every state's locals: `vars[s][i]` holds the `i`-th local of state `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Store {
    vars: Vec<Vec<Value>>,
}

impl Store {
    pub fn get(&self, spec: &TypedSpec, s: StateId, name: &str) -> Option<&Value> {
        let i = spec.chart.state(s).locals.iter().position(|l| l.name == name)?;
        Some(&self.vars[s.0][i])
    }

    fn slot(&mut self, spec: &TypedSpec, s: StateId, name: &str) -> &mut Value {
        let i = spec
            .chart
            .state(s)
            .locals
            .iter()
            .position(|l| l.name == name)
            .expect("resolved local");
        &mut self.vars[s.0][i]
    }

    /// `(qualified name, value)` for every variable, in state and declaration order.
    pub fn entries(&self, spec: &TypedSpec) -> Vec<(String, Value)> {
        let mut out = Vec::new();
        for s in spec.chart.state_ids() {
            let q = spec.chart.qualified_name(s);
            for (l, v) in spec.chart.state(s).locals.iter().zip(&self.vars[s.0]) {
                out.push((format!("{q}.{}", l.name), v.clone()));
            }
        }
        out
    }

    /// Whether every stored value matches its declared type.
    pub fn well_typed(&self, spec: &TypedSpec) -> bool {
        self.vars
            .iter()
            .zip(&spec.local_types)
            .all(|(vs, ts)| vs.len() == ts.len() && vs.iter().zip(ts).all(|(v, t)| conforms(v, t, &spec.table)))
    }
}

/// A snapshot of a running machine. The configuration is `leaf` plus all
/// of its ancestors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MachineState {
    pub leaf: StateId,
    pub store: Store,
    pub steps: u64,
}

impl MachineState {
    /// Active states, root first.
    pub fn configuration(&self, spec: &TypedSpec) -> Vec<StateId> {
        let mut c: Vec<_> = spec.chart.ancestors(self.leaf).collect();
        c.reverse();
        c
    }

    pub fn is_active(&self, spec: &TypedSpec, s: StateId) -> bool {
        spec.chart.is_ancestor(s, self.leaf)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("machine states serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StepReport {
    Fired {
        transition: TransitionId,
        /// States whose exit code ran, innermost first.
        exited: Vec<StateId>,
        /// States whose entry code ran, outermost first.
        entered: Vec<StateId>,
    },
    /// No transition was enabled; nothing changed.
    Discarded,
    /// The step was aborted; the machine state is the pre-step one.
    Fault(Fault),
}

/// Default-initializes the store and enters the initial leaf, running entry
/// code from the root down.
pub fn init_machine(spec: &TypedSpec) -> Result<MachineState, Fault> {
    let vars = spec
        .local_types
        .iter()
        .map(|ts| ts.iter().map(|t| default_value(t, &spec.table)).collect())
        .collect();
    let mut store = Store { vars };
    let chart = &spec.chart;
    let leaf = chart.initial_leaf(chart.root);
    let mut path: Vec<_> = chart.ancestors(leaf).collect();
    path.reverse();
    for s in path {
        run_block(spec, spec.entry[s.0].as_ref(), &mut store)?;
    }
    Ok(MachineState { leaf, store, steps: 0 })
}

/// Resolves `State.Path.var` to its owner and name.
pub fn resolve_var<'s>(spec: &TypedSpec, qualified: &'s str) -> Result<(StateId, &'s str), Fault> {
    let unknown = || Fault::new(DiagCode::UnknownVariable, format!("no variable `{qualified}`"));
    let (path, name) = qualified.rsplit_once('.').ok_or_else(unknown)?;
    let s = spec.chart.state_by_qualified_name(path).ok_or_else(unknown)?;
    spec.chart.state(s).local(name).ok_or_else(unknown)?;
    Ok((s, name))
}

/// Sets an input variable from outside the machine.
pub fn set_input(spec: &TypedSpec, m: &MachineState, qualified: &str, v: Value) -> Result<MachineState, Fault> {
    let (s, name) = resolve_var(spec, qualified)?;
    let decl = spec.chart.state(s).local(name).expect("resolved");
    if !decl.is_input {
        return Err(Fault::new(
            DiagCode::InputOnlySet,
            format!("`{qualified}` is not an input variable"),
        ));
    }
    if !m.is_active(spec, s) {
        return Err(Fault::new(
            DiagCode::NotInConfig,
            format!("`{}` is not in the current configuration", spec.chart.qualified_name(s)),
        ));
    }
    let ty = spec.var_type(s, name).expect("typed");
    if !conforms(&v, ty, &spec.table) {
        return Err(Fault::new(
            DiagCode::TypeMismatch,
            format!("{v} is not a value of type {ty}"),
        ));
    }
    let mut next = m.clone();
    *next.store.slot(spec, s, name) = v;
    Ok(next)
}

/// Transitions that `event` enables: the source is active, the trigger is
/// `event` or absent, and the guard holds. Sorted by id.
pub fn enabled(spec: &TypedSpec, m: &MachineState, event: &str) -> Result<Vec<TransitionId>, Fault> {
    let mut out = Vec::new();
    for t in spec.chart.transition_ids() {
        let tr = spec.chart.transition(t);
        if !m.is_active(spec, tr.source) || tr.trigger.as_deref().is_some_and(|e| e != event) {
            continue;
        }
        let holds = match &spec.guards[t.0] {
            None => true,
            Some(g) => eval(spec, &m.store, &Vec::new(), g)
                .map_err(|f| f.during(t))?
                .as_bool()
                .expect("boolean guard"),
        };
        if holds {
            out.push(t);
        }
    }
    Ok(out)
}

/// Processes one event. Never mutates `m`; on a fault the returned state
/// equals `m`.
pub fn step(spec: &TypedSpec, m: &MachineState, event: &str) -> (MachineState, StepReport) {
    let ts = match enabled(spec, m, event) {
        Ok(ts) => ts,
        Err(f) => return (m.clone(), StepReport::Fault(f)),
    };
    match ts.as_slice() {
        [] => (m.clone(), StepReport::Discarded),
        [t] => match fire(spec, m, *t) {
            Ok((next, exited, entered)) => {
                debug_assert!(next.store.well_typed(spec));
                (
                    next,
                    StepReport::Fired {
                        transition: *t,
                        exited,
                        entered,
                    },
                )
            }
            Err(f) => (m.clone(), StepReport::Fault(f.during(*t))),
        },
        many => {
            let names: Vec<_> = many.iter().map(|t| spec.chart.transition(*t).name.as_str()).collect();
            let f = Fault::new(
                DiagCode::Nondeterminism,
                format!("event `{event}` enables {}", names.join(", ")),
            );
            (m.clone(), StepReport::Fault(f))
        }
    }
}

type Fired = (MachineState, Vec<StateId>, Vec<StateId>);

/// Exit code up to the declaring state, then the action, then entry code
/// down to the destination's initial leaf.
fn fire(spec: &TypedSpec, m: &MachineState, t: TransitionId) -> Result<Fired, Fault> {
    let chart = &spec.chart;
    let tr = chart.transition(t);
    let mut store = m.store.clone();

    let exited: Vec<_> = chart.ancestors(m.leaf).take_while(|&s| s != tr.scope).collect();
    for &s in &exited {
        run_block(spec, spec.exit[s.0].as_ref(), &mut store)?;
    }

    run_block(spec, spec.actions[t.0].as_ref(), &mut store)?;

    let leaf = chart.initial_leaf(tr.destination);
    let mut entered: Vec<_> = chart.ancestors(leaf).take_while(|&s| s != tr.scope).collect();
    entered.reverse();
    for &s in &entered {
        run_block(spec, spec.entry[s.0].as_ref(), &mut store)?;
    }

    let next = MachineState {
        leaf,
        store,
        steps: m.steps + 1,
    };
    Ok((next, exited, entered))
}

fn run_block(spec: &TypedSpec, code: Option<&Code>, store: &mut Store) -> Result<(), Fault> {
    let Some(code) = code else { return Ok(()) };
    let mut locals = vec![None; code.slots];
    for stmt in &code.stmts {
        exec(spec, store, &mut locals, stmt)?;
    }
    Ok(())
}

type Locals = Vec<Option<Value>>;

fn exec(spec: &TypedSpec, store: &mut Store, locals: &mut Locals, stmt: &TStmt) -> Result<(), Fault> {
    match stmt {
        TStmt::Declare { slot, ty } => locals[*slot] = Some(default_value(ty, &spec.table)),
        TStmt::Assign { target, value, .. } => {
            let v = eval(spec, store, locals, value)?;
            let root = match &target.var {
                VarRef::State { state, name } => store.slot(spec, *state, name),
                VarRef::Local(i) => locals[*i].as_mut().expect("declared before use"),
            };
            let dest = target
                .fields
                .iter()
                .fold(root, |v, f| v.field_mut(f).expect("typed field"));
            *dest = v;
        }
        TStmt::Block(stmts) => {
            for s in stmts {
                exec(spec, store, locals, s)?;
            }
        }
    }
    Ok(())
}

fn load<'v>(spec: &TypedSpec, store: &'v Store, locals: &'v Locals, p: &Place) -> &'v Value {
    let root = match &p.var {
        VarRef::State { state, name } => store.get(spec, *state, name).expect("resolved local"),
        VarRef::Local(i) => locals[*i].as_ref().expect("declared before use"),
    };
    p.fields.iter().fold(root, |v, f| v.field(f).expect("typed field"))
}

fn arith(op: BinOp, a: i64, b: i64) -> Option<i64> {
    match op {
        BinOp::Add => a.checked_add(b),
        BinOp::Sub => a.checked_sub(b),
        BinOp::Mul => a.checked_mul(b),
        BinOp::Div => a.checked_div(b),
        _ => unreachable!(),
    }
}

/// Evaluates a typed expression. Expressions have no effects.
fn eval(spec: &TypedSpec, store: &Store, locals: &Locals, e: &TExpr) -> Result<Value, Fault> {
    let ev = |x: &TExpr| eval(spec, store, locals, x);
    Ok(match &e.kind {
        TExprKind::Int(n) => Value::Int(*n),
        TExprKind::Str(s) => Value::Str(s.clone()),
        TExprKind::Bool(b) => Value::Bool(*b),
        TExprKind::Load(p) => load(spec, store, locals, p).clone(),
        TExprKind::Field(base, f) => ev(base)?.field(f).expect("typed field").clone(),
        TExprKind::Unary(op, x) => match (op, ev(x)?) {
            (UnOp::Not, Value::Bool(b)) => Value::Bool(!b),
            (UnOp::Neg, Value::Int(n)) => Value::Int(
                n.checked_neg()
                    .ok_or_else(|| Fault::new(DiagCode::Arithmetic, "integer overflow").at(e.span))?,
            ),
            _ => unreachable!("ill-typed unary operand"),
        },
        TExprKind::Binary(BinOp::And, a, b) => {
            Value::Bool(ev(a)?.as_bool().expect("bool") && ev(b)?.as_bool().expect("bool"))
        }
        TExprKind::Binary(BinOp::Or, a, b) => {
            Value::Bool(ev(a)?.as_bool().expect("bool") || ev(b)?.as_bool().expect("bool"))
        }
        TExprKind::Binary(op, a, b) => {
            let (x, y) = (ev(a)?, ev(b)?);
            match (op, x, y) {
                (BinOp::Eq, x, y) => Value::Bool(x == y),
                (BinOp::Ne, x, y) => Value::Bool(x != y),
                (BinOp::Add, Value::Str(x), Value::Str(y)) => Value::Str(x + &y),
                (BinOp::Lt, Value::Int(x), Value::Int(y)) => Value::Bool(x < y),
                (BinOp::Le, Value::Int(x), Value::Int(y)) => Value::Bool(x <= y),
                (BinOp::Gt, Value::Int(x), Value::Int(y)) => Value::Bool(x > y),
                (BinOp::Ge, Value::Int(x), Value::Int(y)) => Value::Bool(x >= y),
                (op, Value::Int(x), Value::Int(y)) => {
                    let msg = if *op == BinOp::Div && y == 0 {
                        "division by zero"
                    } else {
                        "integer overflow"
                    };
                    Value::Int(arith(*op, x, y).ok_or_else(|| Fault::new(DiagCode::Arithmetic, msg).at(e.span))?)
                }
                _ => unreachable!("ill-typed binary operands"),
            }
        }
        TExprKind::Call { callee, args } => match callee {
            Callee::User(name) => {
                return Err(Fault::new(
                    DiagCode::RuntimeUndefinedFun,
                    format!("function `{name}` has no body and cannot be evaluated"),
                )
                .at(e.span))
            }
            Callee::Builtin(b) => {
                let vs = args.iter().map(ev).collect::<Result<Vec<_>, _>>()?;
                builtins::call(*b, &vs).map_err(|(code, msg)| Fault::new(code, msg).at(e.span))?
            }
        },
    })
}
