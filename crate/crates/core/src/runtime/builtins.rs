//! The container library. Every function returns a fresh value and leaves
//! its arguments untouched.

use super::value::Value;
use crate::diagnostic::Code;
use crate::types::Builtin;

/// A failed built-in call: fault code and message.
pub type BuiltinError = (Code, String);

pub fn call(b: Builtin, args: &[Value]) -> Result<Value, BuiltinError> {
    use Value::*;
    match (b, args) {
        (Builtin::GetMap, [Map(m), k]) => m
            .get(k)
            .cloned()
            .ok_or_else(|| (Code::KeyAbsent, format!("key {k} is not in the map"))),
        (Builtin::PutMap, [Map(m), k, v]) => {
            let mut m = m.clone();
            m.insert(k.clone(), v.clone());
            Ok(Map(m))
        }
        (Builtin::AddList, [List(xs), x]) => {
            let mut xs = xs.clone();
            xs.push(x.clone());
            Ok(List(xs))
        }
        (Builtin::GetList, [List(xs), Int(i)]) => {
            usize::try_from(*i)
                .ok()
                .and_then(|i| xs.get(i))
                .cloned()
                .ok_or_else(|| {
                    (
                        Code::Index,
                        format!("index {i} out of range for a list of length {}", xs.len()),
                    )
                })
        }
        (Builtin::SizeList, [List(xs)]) => Ok(Int(xs.len() as i64)),
        (Builtin::AddSet, [Set(xs), x]) => {
            let mut xs = xs.clone();
            xs.insert(x.clone());
            Ok(Set(xs))
        }
        (Builtin::ContainsSet, [Set(xs), x]) => Ok(Bool(xs.contains(x))),
        (Builtin::SizeSet, [Set(xs)]) => Ok(Int(xs.len() as i64)),
        _ => panic!("ill-typed call to {}", b.name()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn s(x: &str) -> Value {
        Value::Str(x.into())
    }

    #[test]
    fn put_map_leaves_argument_alone() {
        let m = Value::Map(BTreeMap::from([(Value::Int(1), s("p1"))]));
        let out = call(Builtin::PutMap, &[m.clone(), Value::Int(2), s("p2")]).unwrap();
        assert_eq!(out.to_string(), "{1: \"p1\", 2: \"p2\"}");
        assert_eq!(m.to_string(), "{1: \"p1\"}");
        assert_eq!(call(Builtin::GetMap, &[out, Value::Int(2)]).unwrap(), s("p2"));
    }

    #[test]
    fn get_map_absent_key() {
        let m = Value::Map(BTreeMap::new());
        assert_eq!(
            call(Builtin::GetMap, &[m, Value::Int(7)]).unwrap_err().0,
            Code::KeyAbsent
        );
    }

    #[test]
    fn lists() {
        let l = call(Builtin::AddList, &[Value::List(vec![]), Value::Int(4)]).unwrap();
        assert_eq!(
            call(Builtin::SizeList, std::slice::from_ref(&l)).unwrap(),
            Value::Int(1)
        );
        assert_eq!(
            call(Builtin::GetList, &[l.clone(), Value::Int(0)]).unwrap(),
            Value::Int(4)
        );
        assert_eq!(
            call(Builtin::GetList, &[l.clone(), Value::Int(1)]).unwrap_err().0,
            Code::Index
        );
        assert_eq!(call(Builtin::GetList, &[l, Value::Int(-1)]).unwrap_err().0, Code::Index);
    }

    #[test]
    fn sets_ignore_duplicates() {
        let mut v = Value::Set(BTreeSet::new());
        for x in [3, 1, 3] {
            v = call(Builtin::AddSet, &[v, Value::Int(x)]).unwrap();
        }
        assert_eq!(call(Builtin::SizeSet, &[v.clone()]).unwrap(), Value::Int(2));
        assert_eq!(
            call(Builtin::ContainsSet, &[v.clone(), Value::Int(1)]).unwrap(),
            Value::Bool(true)
        );
        assert_eq!(
            call(Builtin::ContainsSet, &[v, Value::Int(2)]).unwrap(),
            Value::Bool(false)
        );
    }
}
