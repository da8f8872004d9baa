//! Resolved statechart: an id-indexed state tree plus transitions, with the
//! hierarchy relations used by scoping and simulation.

use crate::diagnostic::{sort_diagnostics, Code, Diagnostic};
use crate::span::Span;
use crate::syntax::ast::{Block, Expr, Ident, QName, SpecAst, StateAst, TypeAst};
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TransitionId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A state-local variable as declared. Types stay syntactic here; the
/// typechecker interprets them against the type table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDecl {
    pub name: String,
    pub is_input: bool,
    pub ty: TypeAst,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub id: StateId,
    pub name: String,
    pub parent: Option<StateId>,
    pub children: Vec<StateId>,
    pub locals: Vec<LocalDecl>,
    pub entry: Option<Block>,
    pub exit: Option<Block>,
    pub initial_child: Option<StateId>,
    pub span: Span,
    pub name_span: Span,
}

impl State {
    pub fn is_atomic(&self) -> bool {
        self.children.is_empty()
    }

    pub fn local(&self, name: &str) -> Option<&LocalDecl> {
        self.locals.iter().find(|d| d.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub id: TransitionId,
    pub name: String,
    /// The state whose body declares the transition.
    pub scope: StateId,
    pub source: StateId,
    pub destination: StateId,
    pub trigger: Option<String>,
    pub guard: Option<Expr>,
    pub action: Option<Block>,
    pub span: Span,
    pub name_span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statechart {
    /// States in pre-order; `states[i].id == StateId(i)` and the root is `StateId(0)`.
    pub states: Vec<State>,
    /// Transitions in declaration order.
    pub transitions: Vec<Transition>,
    pub root: StateId,
}

impl Statechart {
    pub fn state(&self, id: StateId) -> &State {
        &self.states[id.0]
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        &self.transitions[id.0]
    }

    pub fn name(&self) -> &str {
        &self.state(self.root).name
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> + '_ {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn parent(&self, s: StateId) -> Option<StateId> {
        self.state(s).parent
    }

    /// `s`, its parent, and so on up to the root.
    pub fn ancestors(&self, s: StateId) -> Ancestors<'_> {
        Ancestors {
            chart: self,
            next: Some(s),
        }
    }

    pub fn depth(&self, s: StateId) -> usize {
        self.ancestors(s).count() - 1
    }

    /// True iff `b` is `a` or a descendant of `a`.
    pub fn is_ancestor(&self, a: StateId, b: StateId) -> bool {
        self.ancestors(b).any(|x| x == a)
    }

    /// Deepest state that is an ancestor (or equal) of both arguments.
    pub fn lca(&self, a: StateId, b: StateId) -> StateId {
        let (mut a, mut b) = (a, b);
        let (mut da, mut db) = (self.depth(a), self.depth(b));
        while da > db {
            a = self.parent(a).expect("depth > 0 has a parent");
            da -= 1;
        }
        while db > da {
            b = self.parent(b).expect("depth > 0 has a parent");
            db -= 1;
        }
        while a != b {
            a = self.parent(a).expect("common root");
            b = self.parent(b).expect("common root");
        }
        a
    }

    /// Follows initial sub-states until an atomic state is reached.
    pub fn initial_leaf(&self, s: StateId) -> StateId {
        let mut cur = s;
        while let Some(c) = self.state(cur).initial_child {
            cur = c;
        }
        cur
    }

    /// `Root.A.B` for state B inside A inside Root.
    pub fn qualified_name(&self, s: StateId) -> String {
        let mut names: Vec<&str> = self.ancestors(s).map(|x| self.state(x).name.as_str()).collect();
        names.reverse();
        names.join(".")
    }

    pub fn child_named(&self, s: StateId, name: &str) -> Option<StateId> {
        self.state(s)
            .children
            .iter()
            .copied()
            .find(|&c| self.state(c).name == name)
    }

    /// Resolves a dotted state path whose first segment names the root.
    pub fn state_by_path<S: AsRef<str>>(&self, path: &[S]) -> Option<StateId> {
        let (first, rest) = path.split_first()?;
        if first.as_ref() != self.name() {
            return None;
        }
        rest.iter()
            .try_fold(self.root, |s, seg| self.child_named(s, seg.as_ref()))
    }

    pub fn state_by_qualified_name(&self, dotted: &str) -> Option<StateId> {
        let parts: Vec<&str> = dotted.split('.').collect();
        self.state_by_path(&parts)
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransitionId> {
        self.transitions.iter().find(|t| t.name == name).map(|t| t.id)
    }

    /// Resolves a transition endpoint written inside `scope`. The path is tried
    /// relative to `scope` and then to each enclosing state; a path starting
    /// with the root name is also accepted as absolute.
    pub fn resolve_endpoint(&self, scope: StateId, path: &[&str]) -> Option<StateId> {
        for base in self.ancestors(scope) {
            let found = path.iter().try_fold(base, |s, seg| self.child_named(s, seg));
            if found.is_some() {
                return found;
            }
        }
        self.state_by_path(path)
    }
}

pub struct Ancestors<'a> {
    chart: &'a Statechart,
    next: Option<StateId>,
}

impl Iterator for Ancestors<'_> {
    type Item = StateId;

    fn next(&mut self) -> Option<StateId> {
        let cur = self.next?;
        self.next = self.chart.parent(cur);
        Some(cur)
    }
}

/// Builds the statechart IR from a parsed file, reporting every structural
/// problem found.
pub fn resolve(spec: &SpecAst) -> Result<Statechart, Vec<Diagnostic>> {
    let mut b = Builder::default();
    b.add_state(&spec.root, None);
    let mut pending = std::mem::take(&mut b.pending);
    pending.sort_by_key(|(_, idx, _)| *idx);

    let mut chart = Statechart {
        states: b.states,
        transitions: Vec::new(),
        root: StateId(0),
    };
    let mut diags = b.diags;

    let mut names: HashMap<&str, Span> = HashMap::new();
    for (scope, _, t) in &pending {
        if let Some(prev) = names.get(t.name.name.as_str()) {
            diags.push(Diagnostic::new(
                Code::Duplicate,
                t.name.span,
                format!("duplicate transition name `{}` (first declared at {prev})", t.name.name),
            ));
        } else {
            names.insert(&t.name.name, t.name.span);
        }

        let src = endpoint(&chart, *scope, &t.source, &t.name, &mut diags);
        let dst = endpoint(&chart, *scope, &t.destination, &t.name, &mut diags);
        let (Some(source), Some(destination)) = (src, dst) else {
            continue;
        };
        let id = TransitionId(chart.transitions.len());
        chart.transitions.push(Transition {
            id,
            name: t.name.name.clone(),
            scope: *scope,
            source,
            destination,
            trigger: t.trigger.as_ref().map(|i| i.name.clone()),
            guard: t.guard.clone(),
            action: t.action.clone(),
            span: t.span,
            name_span: t.name.span,
        });
    }

    if diags.is_empty() {
        Ok(chart)
    } else {
        sort_diagnostics(&mut diags);
        Err(diags)
    }
}

fn endpoint(
    chart: &Statechart,
    scope: StateId,
    q: &QName,
    transition: &Ident,
    diags: &mut Vec<Diagnostic>,
) -> Option<StateId> {
    let path: Vec<&str> = q.segments.iter().map(|s| s.name.as_str()).collect();
    let Some(s) = chart.resolve_endpoint(scope, &path) else {
        diags.push(Diagnostic::new(
            Code::UnknownState,
            q.span,
            format!("unknown state `{}` in transition `{}`", q.dotted(), transition.name),
        ));
        return None;
    };
    if s == scope || !chart.is_ancestor(scope, s) {
        diags.push(Diagnostic::new(
            Code::TransitionScope,
            q.span,
            format!(
                "endpoint `{}` of transition `{}` must be strictly inside `{}`, where the transition is declared",
                q.dotted(),
                transition.name,
                chart.qualified_name(scope)
            ),
        ));
        return None;
    }
    Some(s)
}

#[derive(Default)]
struct Builder<'a> {
    states: Vec<State>,
    /// (declaring state, declaration order, transition)
    pending: Vec<(StateId, usize, &'a crate::syntax::ast::TransitionAst)>,
    diags: Vec<Diagnostic>,
    order: usize,
}

impl<'a> Builder<'a> {
    fn add_state(&mut self, ast: &'a StateAst, parent: Option<StateId>) -> StateId {
        let id = StateId(self.states.len());
        let mut seen = HashSet::new();
        let mut locals = Vec::new();
        for d in &ast.var_decls {
            if !seen.insert(d.name.name.as_str()) {
                self.diags.push(Diagnostic::new(
                    Code::Duplicate,
                    d.name.span,
                    format!("variable `{}` declared twice in state `{}`", d.name.name, ast.name.name),
                ));
                continue;
            }
            locals.push(LocalDecl {
                name: d.name.name.clone(),
                is_input: d.is_input,
                ty: d.ty.clone(),
                span: d.name.span,
            });
        }
        self.states.push(State {
            id,
            name: ast.name.name.clone(),
            parent,
            children: Vec::new(),
            locals,
            entry: ast.entry.clone(),
            exit: ast.exit.clone(),
            initial_child: None,
            span: ast.span,
            name_span: ast.name.span,
        });

        let mut child_names: HashSet<&str> = HashSet::new();
        let mut initial = Vec::new();
        let mut children = Vec::new();
        for sub in &ast.sub_states {
            if !child_names.insert(sub.name.name.as_str()) {
                self.diags.push(Diagnostic::new(
                    Code::Duplicate,
                    sub.name.span,
                    format!("duplicate state `{}` in `{}`", sub.name.name, ast.name.name),
                ));
                continue;
            }
            let c = self.add_state(sub, Some(id));
            if sub.is_initial {
                initial.push((c, sub.name.span));
            }
            children.push(c);
        }
        for t in &ast.transitions {
            self.pending.push((id, self.order, t));
            self.order += 1;
        }

        if !children.is_empty() {
            match initial.as_slice() {
                [] => self.diags.push(Diagnostic::new(
                    Code::MissingInit,
                    ast.name.span,
                    format!("composite state `{}` is missing an initial sub-state", ast.name.name),
                )),
                [(c, _)] => self.states[id.0].initial_child = Some(*c),
                [_, rest @ ..] => {
                    for (_, span) in rest {
                        self.diags.push(Diagnostic::new(
                            Code::MultipleInit,
                            *span,
                            format!("state `{}` has more than one initial sub-state", ast.name.name),
                        ));
                    }
                }
            }
        }
        self.states[id.0].children = children;
        id
    }
}
