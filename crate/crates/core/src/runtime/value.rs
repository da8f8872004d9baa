//! Runtime values. Values are immutable: container operations build new ones.

use crate::syntax::lexer::quote;
use crate::types::{BasicType, Container, TypeExpr, TypeTable};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
    Set(BTreeSet<Value>),
    Map(#[serde(serialize_with = "pairs")] BTreeMap<Value, Value>),
    Struct { name: String, fields: Vec<(String, Value)> },
}

fn pairs<S: Serializer>(m: &BTreeMap<Value, Value>, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for kv in m {
        seq.serialize_element(&kv)?;
    }
    seq.end()
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn field(&self, name: &str) -> Option<&Value> {
        match self {
            Value::Struct { fields, .. } => fields.iter().find(|(f, _)| f == name).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn field_mut(&mut self, name: &str) -> Option<&mut Value> {
        match self {
            Value::Struct { fields, .. } => fields.iter_mut().find(|(f, _)| f == name).map(|(_, v)| v),
            _ => None,
        }
    }
}

/// The value a freshly declared variable of type `ty` holds.
///
/// Panics if `ty` is not a ground type known to `table`; checked specs
/// never ask for one.
pub fn default_value(ty: &TypeExpr, table: &TypeTable) -> Value {
    match ty {
        TypeExpr::Basic(BasicType::Int) => Value::Int(0),
        TypeExpr::Basic(BasicType::Boolean) => Value::Bool(false),
        TypeExpr::Basic(BasicType::String) => Value::Str(String::new()),
        _ => {
            if let Some((c, _)) = ty.as_container() {
                return match c {
                    Container::Map => Value::Map(BTreeMap::new()),
                    Container::List => Value::List(Vec::new()),
                    Container::Set => Value::Set(BTreeSet::new()),
                };
            }
            let (name, _) = ty.as_struct().unwrap_or_else(|| panic!("no default for `{ty}`"));
            let fields = table
                .struct_fields(ty)
                .unwrap_or_else(|| panic!("unknown struct `{ty}`"));
            Value::Struct {
                name: name.to_string(),
                fields: fields
                    .iter()
                    .map(|f| (f.name.clone(), default_value(&f.ty, table)))
                    .collect(),
            }
        }
    }
}

/// Whether `v` is a well-formed value of type `ty`.
pub fn conforms(v: &Value, ty: &TypeExpr, table: &TypeTable) -> bool {
    match (v, ty) {
        (Value::Int(_), TypeExpr::Basic(BasicType::Int)) => true,
        (Value::Bool(_), TypeExpr::Basic(BasicType::Boolean)) => true,
        (Value::Str(_), TypeExpr::Basic(BasicType::String)) => true,
        (Value::Struct { name, fields }, _) => {
            let Some((tn, _)) = ty.as_struct() else { return false };
            let Some(decls) = table.struct_fields(ty) else {
                return false;
            };
            tn == name
                && fields.len() == decls.len()
                && fields
                    .iter()
                    .zip(&decls)
                    .all(|((f, v), d)| *f == d.name && conforms(v, &d.ty, table))
        }
        (_, _) => match (v, ty.as_container()) {
            (Value::List(xs), Some((Container::List, [t]))) => xs.iter().all(|x| conforms(x, t, table)),
            (Value::Set(xs), Some((Container::Set, [t]))) => xs.iter().all(|x| conforms(x, t, table)),
            (Value::Map(m), Some((Container::Map, [k, t]))) => {
                m.iter().all(|(a, b)| conforms(a, k, table) && conforms(b, t, table))
            }
            _ => false,
        },
    }
}

fn join<'a, T: fmt::Display + 'a>(f: &mut fmt::Formatter<'_>, items: impl IntoIterator<Item = T>) -> fmt::Result {
    for (i, x) in items.into_iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Literal syntax, as accepted by simulation scripts.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(&quote(s)),
            Value::List(xs) => {
                f.write_str("[")?;
                join(f, xs)?;
                f.write_str("]")
            }
            Value::Set(xs) => {
                f.write_str("{")?;
                join(f, xs)?;
                f.write_str("}")
            }
            Value::Map(m) => {
                f.write_str("{")?;
                join(f, m.iter().map(|(k, v)| format!("{k}: {v}")))?;
                f.write_str("}")
            }
            Value::Struct { name, fields } => {
                write!(f, "{name}{{")?;
                join(f, fields.iter().map(|(n, v)| format!("{n}: {v}")))?;
                f.write_str("}")
            }
        }
    }
}
