//! Simulation scripts: one command per line.
//!
//! ```text
//! set <qualified-var> <literal>
//! emit <event>
//! expect state <qualified-state>
//! expect var <qualified-var> <literal>
//! ```
//!
//! Interactive sessions also accept `show config`, `show store` and `quit`.
//! Blank lines and lines starting with `//` are ignored.

use super::machine::{init_machine, resolve_var, set_input, step, Fault, MachineState, StepReport};
use super::value::Value;
use crate::typechecker::TypedSpec;
use crate::types::{BasicType, Container, TypeExpr, TypeTable};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Set { var: String, literal: String },
    Emit(String),
    ExpectState(String),
    ExpectVar { var: String, literal: String },
    ShowConfig,
    ShowStore,
    Quit,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Set { var, literal } => write!(f, "set {var} {literal}"),
            Command::Emit(e) => write!(f, "emit {e}"),
            Command::ExpectState(s) => write!(f, "expect state {s}"),
            Command::ExpectVar { var, literal } => write!(f, "expect var {var} {literal}"),
            Command::ShowConfig => f.write_str("show config"),
            Command::ShowStore => f.write_str("show store"),
            Command::Quit => f.write_str("quit"),
        }
    }
}

/// Parses one line. `Ok(None)` for blank and comment lines.
pub fn parse_command(line: &str) -> Result<Option<Command>, String> {
    let line = line.trim();
    if line.is_empty() || line.starts_with("//") {
        return Ok(None);
    }
    let (word, rest) = split_word(line);
    let cmd = match word {
        "set" => {
            let (var, literal) = split_word(rest);
            if var.is_empty() || literal.is_empty() {
                return Err("usage: set <variable> <value>".into());
            }
            Command::Set {
                var: var.into(),
                literal: literal.into(),
            }
        }
        "emit" => match split_word(rest) {
            (e, "") if !e.is_empty() => Command::Emit(e.into()),
            _ => return Err("usage: emit <event>".into()),
        },
        "expect" => match split_word(rest) {
            ("state", s) if !s.is_empty() && !s.contains(char::is_whitespace) => Command::ExpectState(s.into()),
            ("var", rest) => {
                let (var, literal) = split_word(rest);
                if var.is_empty() || literal.is_empty() {
                    return Err("usage: expect var <variable> <value>".into());
                }
                Command::ExpectVar {
                    var: var.into(),
                    literal: literal.into(),
                }
            }
            _ => return Err("usage: expect state <state> | expect var <variable> <value>".into()),
        },
        "show" => match rest {
            "config" => Command::ShowConfig,
            "store" => Command::ShowStore,
            _ => return Err("usage: show config | show store".into()),
        },
        "quit" if rest.is_empty() => Command::Quit,
        _ => return Err(format!("unknown command `{word}`")),
    };
    Ok(Some(cmd))
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => (s, ""),
    }
}

/// Reads a value literal, using `ty` to tell sets from maps and to check
/// element types.
pub fn parse_literal(text: &str, ty: &TypeExpr, table: &TypeTable) -> Result<Value, String> {
    let mut p = Lit {
        src: text,
        pos: 0,
        table,
    };
    let v = p.value(ty)?;
    p.ws();
    if p.pos != text.len() {
        return Err(format!("unexpected `{}` after value", &text[p.pos..]));
    }
    Ok(v)
}

struct Lit<'a> {
    src: &'a str,
    pos: usize,
    table: &'a TypeTable,
}

impl Lit<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let t = self.rest().trim_start();
        self.pos = self.src.len() - t.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}` at column {}", self.pos + 1))
        }
    }

    fn word(&mut self) -> &str {
        self.ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..self.pos]
    }

    /// Comma-separated items up to `close`.
    fn items(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<(), String>) -> Result<(), String> {
        if self.eat(close) {
            return Ok(());
        }
        loop {
            item(self)?;
            if self.eat(close) {
                return Ok(());
            }
            self.expect(',')?;
        }
    }

    fn value(&mut self, ty: &TypeExpr) -> Result<Value, String> {
        self.ws();
        match ty {
            TypeExpr::Basic(BasicType::Int) => {
                let neg = self.eat('-');
                let w = self.word();
                let digits = if neg { format!("-{w}") } else { w.to_string() };
                digits
                    .parse()
                    .map(Value::Int)
                    .map_err(|_| format!("`{digits}` is not an int"))
            }
            TypeExpr::Basic(BasicType::Boolean) => match self.word() {
                "true" => Ok(Value::Bool(true)),
                "false" => Ok(Value::Bool(false)),
                w => Err(format!("`{w}` is not a boolean")),
            },
            TypeExpr::Basic(BasicType::String) => self.string().map(Value::Str),
            _ => match ty.as_container() {
                Some((Container::List, [t])) => {
                    self.expect('[')?;
                    let mut xs = Vec::new();
                    self.items(']', |p| {
                        xs.push(p.value(t)?);
                        Ok(())
                    })?;
                    Ok(Value::List(xs))
                }
                Some((Container::Set, [t])) => {
                    self.expect('{')?;
                    let mut xs = BTreeSet::new();
                    self.items('}', |p| {
                        xs.insert(p.value(t)?);
                        Ok(())
                    })?;
                    Ok(Value::Set(xs))
                }
                Some((Container::Map, [k, v])) => {
                    self.expect('{')?;
                    let mut m = BTreeMap::new();
                    self.items('}', |p| {
                        let key = p.value(k)?;
                        p.expect(':')?;
                        let val = p.value(v)?;
                        if m.insert(key.clone(), val).is_some() {
                            return Err(format!("duplicate key {key}"));
                        }
                        Ok(())
                    })?;
                    Ok(Value::Map(m))
                }
                _ => self.structure(ty),
            },
        }
    }

    fn structure(&mut self, ty: &TypeExpr) -> Result<Value, String> {
        let (name, _) = ty.as_struct().ok_or_else(|| format!("no literal syntax for `{ty}`"))?;
        let decls = self
            .table
            .struct_fields(ty)
            .ok_or_else(|| format!("unknown struct `{name}`"))?;
        let w = self.word().to_string();
        if w != name {
            return Err(format!("expected a `{name}` value, found `{w}`"));
        }
        self.expect('{')?;
        let mut given: BTreeMap<String, Value> = BTreeMap::new();
        self.items('}', |p| {
            let f = p.word().to_string();
            let d = decls
                .iter()
                .find(|d| d.name == f)
                .ok_or_else(|| format!("`{name}` has no field `{f}`"))?;
            p.expect(':')?;
            let v = p.value(&d.ty)?;
            if given.insert(f.clone(), v).is_some() {
                return Err(format!("field `{f}` given twice"));
            }
            Ok(())
        })?;
        let fields = decls
            .iter()
            .map(|d| {
                let v = given
                    .remove(&d.name)
                    .unwrap_or_else(|| super::value::default_value(&d.ty, self.table));
                (d.name.clone(), v)
            })
            .collect();
        Ok(Value::Struct {
            name: name.to_string(),
            fields,
        })
    }

    fn string(&mut self) -> Result<String, String> {
        self.expect('"')?;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, 'n')) => out.push('\n'),
                    Some((_, 't')) => out.push('\t'),
                    Some((_, c @ ('"' | '\\'))) => out.push(c),
                    _ => return Err("bad escape in string".into()),
                },
                c => out.push(c),
            }
        }
        Err("unterminated string".into())
    }
}

/// What a successful command did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Set {
        var: String,
        value: String,
    },
    Step {
        event: String,
        /// The fired transition, or `None` when the event was discarded.
        fired: Option<String>,
        /// Active states, root first.
        config: Vec<String>,
    },
    Expect {
        check: String,
    },
    Config {
        config: Vec<String>,
    },
    Store {
        vars: Vec<(String, String)>,
    },
    Quit,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Set { var, value } => write!(f, "set {var} = {value}"),
            Outcome::Step { event, fired, config } => {
                let leaf = config.last().map(String::as_str).unwrap_or("");
                match fired {
                    Some(t) => write!(f, "{event}: fired {t} -> {leaf}"),
                    None => write!(f, "{event}: discarded, in {leaf}"),
                }
            }
            Outcome::Expect { check } => write!(f, "{check}: ok"),
            Outcome::Config { config } => write!(f, "{}", config.join(" > ")),
            Outcome::Store { vars } => {
                for (i, (n, v)) in vars.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "{n} = {v}")?;
                }
                Ok(())
            }
            Outcome::Quit => f.write_str("bye"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScriptError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Fault(Fault),
    #[error("expectation failed: expected {expected}, found {actual}")]
    Expectation { expected: String, actual: String },
}

/// A running simulation driven by commands.
#[derive(Debug, Clone)]
pub struct Session<'a> {
    spec: &'a TypedSpec,
    state: MachineState,
}

impl<'a> Session<'a> {
    pub fn new(spec: &'a TypedSpec) -> Result<Self, Fault> {
        Ok(Session {
            spec,
            state: init_machine(spec)?,
        })
    }

    pub fn state(&self) -> &MachineState {
        &self.state
    }

    fn config(&self) -> Vec<String> {
        self.state
            .configuration(self.spec)
            .into_iter()
            .map(|s| self.spec.chart.qualified_name(s))
            .collect()
    }

    fn literal(&self, var: &str, text: &str) -> Result<Value, ScriptError> {
        let (s, name) = resolve_var(self.spec, var).map_err(ScriptError::Fault)?;
        let ty = self.spec.var_type(s, name).expect("typed local");
        parse_literal(text, ty, &self.spec.table).map_err(ScriptError::Parse)
    }

    pub fn execute(&mut self, cmd: &Command) -> Result<Outcome, ScriptError> {
        let spec = self.spec;
        Ok(match cmd {
            Command::Set { var, literal } => {
                let v = self.literal(var, literal)?;
                self.state = set_input(spec, &self.state, var, v.clone()).map_err(ScriptError::Fault)?;
                Outcome::Set {
                    var: var.clone(),
                    value: v.to_string(),
                }
            }
            Command::Emit(event) => {
                let (next, report) = step(spec, &self.state, event);
                self.state = next;
                let fired = match report {
                    StepReport::Fired { transition, .. } => Some(spec.chart.transition(transition).name.clone()),
                    StepReport::Discarded => None,
                    StepReport::Fault(f) => return Err(ScriptError::Fault(f)),
                };
                Outcome::Step {
                    event: event.clone(),
                    fired,
                    config: self.config(),
                }
            }
            Command::ExpectState(q) => {
                let actual = spec.chart.qualified_name(self.state.leaf);
                let holds = spec
                    .chart
                    .state_by_qualified_name(q)
                    .is_some_and(|s| self.state.is_active(spec, s));
                if !holds {
                    return Err(ScriptError::Expectation {
                        expected: format!("state {q}"),
                        actual: format!("state {actual}"),
                    });
                }
                Outcome::Expect { check: cmd.to_string() }
            }
            Command::ExpectVar { var, literal } => {
                let want = self.literal(var, literal)?;
                let (s, name) = resolve_var(spec, var).map_err(ScriptError::Fault)?;
                let got = self.state.store.get(spec, s, name).expect("resolved");
                if *got != want {
                    return Err(ScriptError::Expectation {
                        expected: format!("{var} = {want}"),
                        actual: format!("{var} = {got}"),
                    });
                }
                Outcome::Expect { check: cmd.to_string() }
            }
            Command::ShowConfig => Outcome::Config { config: self.config() },
            Command::ShowStore => Outcome::Store {
                vars: self
                    .state
                    .store
                    .entries(spec)
                    .into_iter()
                    .map(|(n, v)| (n, v.to_string()))
                    .collect(),
            },
            Command::Quit => Outcome::Quit,
        })
    }
}

/// The result of running a whole script.
#[derive(Debug, Clone)]
pub struct ScriptRun {
    /// `(line number, command, outcome)` for every command that succeeded.
    pub steps: Vec<(usize, Command, Outcome)>,
    /// The first failure, with its line number; the script stops there.
    pub failure: Option<(usize, ScriptError)>,
}

impl ScriptRun {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn run_script(spec: &TypedSpec, text: &str) -> ScriptRun {
    let mut run = ScriptRun {
        steps: Vec::new(),
        failure: None,
    };
    let mut session = match Session::new(spec) {
        Ok(s) => s,
        Err(f) => {
            run.failure = Some((0, ScriptError::Fault(f)));
            return run;
        }
    };
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let cmd = match parse_command(line) {
            Ok(Some(c)) => c,
            Ok(None) => continue,
            Err(e) => {
                run.failure = Some((n, ScriptError::Parse(e)));
                break;
            }
        };
        match session.execute(&cmd) {
            Ok(Outcome::Quit) => break,
            Ok(o) => run.steps.push((n, cmd, o)),
            Err(e) => {
                run.failure = Some((n, e));
                break;
            }
        }
    }
    run
}
