//! Environments and access rules for state-local variables.
//!
//! An environment is an ordered chain of declaration lists, closest scope
//! first, searched first-match. A state `s` sees `σ(s) = D(s) :: D(parent) ::
//! ... :: D(root) :: φ`. On a transition, names used as r-values are looked up
//! in the source state's environment and l-values in the destination's, which
//! yields exactly these access rights for a variable owned by state `o`:
//!
//! * `o` is the declaring state of the transition or one of its ancestors: RW
//! * `o` lies on the source's ancestor chain below the declaring state: RO
//! * `o` lies on the destination's ancestor chain below the declaring state: WO
//! * anything else, including descendants of the endpoints: no access

use crate::model::{LocalDecl, StateId, Statechart, TransitionId};
use crate::types::TypeExpr;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Who owns a declaration list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    State(StateId),
    /// Variables declared inside a code block; the number identifies the block.
    Block(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclEntry {
    pub name: String,
    pub is_input: bool,
    pub ty: TypeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclList {
    pub owner: Owner,
    pub entries: Vec<DeclEntry>,
}

impl DeclList {
    pub fn new(owner: Owner) -> Self {
        DeclList {
            owner,
            entries: Vec::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&DeclEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Binding<'a> {
    pub owner: Owner,
    pub entry: &'a DeclEntry,
}

/// `D¹ :: D² :: ... :: φ`. The empty environment is `Environment::default()`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    lists: Vec<Arc<DeclList>>,
}

impl Environment {
    pub fn empty() -> Self {
        Self::default()
    }

    /// New environment with `list` in front.
    pub fn cons(&self, list: Arc<DeclList>) -> Environment {
        let mut lists = Vec::with_capacity(self.lists.len() + 1);
        lists.push(list);
        lists.extend(self.lists.iter().cloned());
        Environment { lists }
    }

    /// First matching declaration, scanning from the closest scope outward.
    pub fn lookup(&self, name: &str) -> Option<Binding<'_>> {
        self.lists
            .iter()
            .find_map(|l| l.get(name).map(|entry| Binding { owner: l.owner, entry }))
    }

    pub fn lists(&self) -> &[Arc<DeclList>] {
        &self.lists
    }

    pub fn owners(&self) -> impl Iterator<Item = Owner> + '_ {
        self.lists.iter().map(|l| l.owner)
    }

    pub fn contains_owner(&self, owner: Owner) -> bool {
        self.owners().any(|o| o == owner)
    }

    pub fn head_owner(&self) -> Option<Owner> {
        self.lists.first().map(|l| l.owner)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Access {
    pub readable: bool,
    pub writable: bool,
}

impl Access {
    pub const RW: Access = Access {
        readable: true,
        writable: true,
    };
    pub const RO: Access = Access {
        readable: true,
        writable: false,
    };
    pub const WO: Access = Access {
        readable: false,
        writable: true,
    };
    pub const NONE: Access = Access {
        readable: false,
        writable: false,
    };

    pub fn label(self) -> &'static str {
        match (self.readable, self.writable) {
            (true, true) => "RW",
            (true, false) => "RO",
            (false, true) => "WO",
            (false, false) => "NONE",
        }
    }
}

impl fmt::Display for Access {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-state declaration lists for one chart.
#[derive(Debug, Clone)]
pub struct Scopes<'c> {
    chart: &'c Statechart,
    lists: Vec<Arc<DeclList>>,
}

impl<'c> Scopes<'c> {
    /// Builds declaration lists, using `type_of` to interpret each local's type.
    pub fn new(chart: &'c Statechart, mut type_of: impl FnMut(StateId, &LocalDecl) -> TypeExpr) -> Self {
        let lists = chart
            .states
            .iter()
            .map(|s| {
                Arc::new(DeclList {
                    owner: Owner::State(s.id),
                    entries: s
                        .locals
                        .iter()
                        .map(|d| DeclEntry {
                            name: d.name.clone(),
                            is_input: d.is_input,
                            ty: type_of(s.id, d),
                        })
                        .collect(),
                })
            })
            .collect();
        Scopes { chart, lists }
    }

    pub fn chart(&self) -> &'c Statechart {
        self.chart
    }

    pub fn decl_list(&self, s: StateId) -> &Arc<DeclList> {
        &self.lists[s.0]
    }

    /// `σ(s)`: the lists of `s`, its parent, ..., the root.
    pub fn state_env(&self, s: StateId) -> Environment {
        Environment {
            lists: self.chart.ancestors(s).map(|a| self.lists[a.0].clone()).collect(),
        }
    }

    /// `(σ_R, σ_W) = (σ(source), σ(destination))`.
    pub fn transition_envs(&self, t: TransitionId) -> (Environment, Environment) {
        let t = self.chart.transition(t);
        (self.state_env(t.source), self.state_env(t.destination))
    }

    /// Access rights on `t` to the locals of `owner`, read off the transition's
    /// environments: readable iff `owner`'s list is in σ_R, writable iff in σ_W.
    pub fn access(&self, t: TransitionId, owner: StateId) -> Access {
        let (read, write) = self.transition_envs(t);
        Access {
            readable: read.contains_owner(Owner::State(owner)),
            writable: write.contains_owner(Owner::State(owner)),
        }
    }

    /// Access from entry/exit code of state `s`, where σ_R = σ_W = σ(s).
    pub fn state_access(&self, s: StateId, owner: StateId) -> Access {
        if self.state_env(s).contains_owner(Owner::State(owner)) {
            Access::RW
        } else {
            Access::NONE
        }
    }

    /// Full access row for `t`, one entry per state in id order.
    pub fn access_row(&self, t: TransitionId) -> Vec<(StateId, Access)> {
        self.chart.state_ids().map(|s| (s, self.access(t, s))).collect()
    }
}
