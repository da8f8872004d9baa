//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use common::{corpus, expected_trace, mutants, random_chart};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use stabl::diagnostic::Code;
use stabl::model::StateId;
use stabl::runtime::builtins;
use stabl::runtime::{
    enabled, init_machine, parse_command, run_script, set_input, step, Command, MachineState, Session, StepReport,
    Value,
};
use stabl::typechecker::{check_source, TypedSpec};
use stabl::types::{structural_eq, Builtin, TypeExpr};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_corpus() -> Verdict {
    let src = corpus("student.stabl");
    let t0 = Instant::now();
    let spec = check_source(&src).map_err(|ds| format!("{} diagnostics, first: {}", ds.len(), ds[0]))?;
    let elapsed = t0.elapsed();
    ensure(spec.warnings.is_empty(), || format!("{} warnings", spec.warnings.len()))?;
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("Student checks clean in {elapsed:?}"))
}

fn mutation_suite() -> Verdict {
    let ms = mutants();
    ensure(ms.len() >= 10, || format!("only {} mutants", ms.len()))?;
    for m in &ms {
        let diags = match check_source(&m.source) {
            Ok(spec) => spec.warnings,
            Err(ds) => ds,
        };
        let [d] = diags.as_slice() else {
            return Err(format!("{}: expected one diagnostic, got {}", m.file, diags.len()));
        };
        let start = (d.span.start.line, d.span.start.col);
        let end = (d.span.end.line, d.span.end.col);
        ensure(d.code.as_str() == m.code, || {
            format!("{}: got {} want {}", m.file, d.code, m.code)
        })?;
        ensure((start, end) == (m.start, m.end), || {
            format!("{}: span {start:?}..{end:?}, want {:?}..{:?}", m.file, m.start, m.end)
        })?;
    }
    let required = [
        "E_READ_VIOLATION",
        "E_WRITE_VIOLATION",
        "E_UNDECLARED",
        "E_TYPE_MISMATCH",
        "E_RECURSIVE_TYPE",
        "E_ARITY",
    ];
    for code in required {
        ensure(ms.iter().any(|m| m.code == code), || format!("no mutant for {code}"))?;
    }
    Ok(format!(
        "{} mutants, each with exactly the expected code and span",
        ms.len()
    ))
}

fn scoping_oracle() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5ca1ab1e);
    let mut pairs = 0usize;
    let charts = 1500;
    for n in 0..charts {
        let rc = random_chart(&mut rng, 12, 8);
        let spec = check_source(&rc.source).map_err(|ds| format!("chart {n} rejected: {}\n{}", ds[0], rc.source))?;
        let scopes = spec.scopes();
        let ids: Vec<StateId> = (0..rc.parent.len())
            .map(|i| {
                spec.chart
                    .state_by_qualified_name(&rc.qualified(i))
                    .expect("state present")
            })
            .collect();
        for t in 0..rc.transitions.len() {
            let tid = spec
                .chart
                .transition_by_name(&format!("t{t}"))
                .expect("transition present");
            let (read, write) = scopes.transition_envs(tid);
            for (i, &s) in ids.iter().enumerate() {
                let want = rc.rule3(t, i);
                let got = scopes.access(tid, s);
                ensure(got.label() == want, || {
                    format!(
                        "chart {n}, t{t}, S{i}: environment says {got}, rule says {want}\n{}",
                        rc.source
                    )
                })?;
                let var = format!("v_{i}");
                let readable = read.lookup(&var).is_some();
                let writable = write.lookup(&var).is_some();
                ensure((readable, writable) == (got.readable, got.writable), || {
                    format!("chart {n}, t{t}: lookup of {var} disagrees with access {got}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!(
        "{charts} charts, {pairs} (transition, state) pairs, 0 disagreements"
    ))
}

fn snapshot(spec: &TypedSpec, m: &MachineState) -> (String, Vec<(String, String)>) {
    let leaf = spec.chart.qualified_name(m.leaf);
    let vars = m
        .store
        .entries(spec)
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect();
    (leaf, vars)
}

fn trace_oracle() -> Verdict {
    let spec = check_source(&corpus("student.stabl")).map_err(|_| "Student rejected".to_string())?;
    let rows = expected_trace();
    let mut session = Session::new(&spec).map_err(|f| f.to_string())?;
    let mut snaps = vec![snapshot(&spec, session.state())];
    for line in corpus("student_login.script").lines() {
        let Some(cmd) = parse_command(line)? else { continue };
        session.execute(&cmd).map_err(|e| format!("`{line}`: {e}"))?;
        if matches!(cmd, Command::Set { .. } | Command::Emit(_)) {
            snaps.push(snapshot(&spec, session.state()));
        }
    }
    ensure(snaps.len() == rows.len(), || {
        format!("{} snapshots, {} expected rows", snaps.len(), rows.len())
    })?;
    for (row, (leaf, vars)) in rows.iter().zip(&snaps) {
        ensure(*leaf == row.leaf, || {
            format!("after {}: leaf {leaf}, want {}", row.label, row.leaf)
        })?;
        ensure(*vars == row.vars, || {
            format!("after {}: store {vars:?}, want {:?}", row.label, row.vars)
        })?;
    }
    let wrong = run_script(&spec, &corpus("student_wrong_password.script"));
    ensure(wrong.passed(), || {
        format!("wrong-password run failed: {:?}", wrong.failure)
    })?;
    let m = init_machine(&spec).map_err(|f| f.to_string())?;
    let m = set_input(&spec, &m, "Student.LoggedOut.user", Value::Int(1)).map_err(|f| f.to_string())?;
    let m = set_input(&spec, &m, "Student.LoggedOut.password", Value::Str("zzz".into())).map_err(|f| f.to_string())?;
    let (after, report) = step(&spec, &m, "eLogin");
    ensure(report == StepReport::Discarded && after == m, || {
        "wrong password did not stay put".into()
    })?;
    Ok(format!(
        "{} steps match the hand-computed trace; wrong password stays in LoggedOut",
        rows.len()
    ))
}

fn random_value(rng: &mut StdRng, ty: &TypeExpr, spec: &TypedSpec) -> Value {
    match ty {
        t if *t == TypeExpr::INT => Value::Int(rng.gen_range(-2..6)),
        t if *t == TypeExpr::BOOLEAN => Value::Bool(rng.gen()),
        t if *t == TypeExpr::STRING => Value::Str(["", "p1", "p2", "zzz"].choose(rng).unwrap().to_string()),
        _ => stabl::runtime::default_value(ty, &spec.table),
    }
}

fn random_container(rng: &mut StdRng) -> Value {
    let ints = |rng: &mut StdRng| -> Vec<i64> { (0..rng.gen_range(0..6)).map(|_| rng.gen_range(-3..4)).collect() };
    match rng.gen_range(0..3) {
        0 => Value::List(ints(rng).into_iter().map(Value::Int).collect()),
        1 => Value::Set(ints(rng).into_iter().map(Value::Int).collect::<BTreeSet<_>>()),
        _ => Value::Map(
            ints(rng)
                .into_iter()
                .map(|k| (Value::Int(k), Value::Str(format!("v{k}"))))
                .collect::<BTreeMap<_, _>>(),
        ),
    }
}

fn purity_and_determinism() -> Verdict {
    let mut rng = StdRng::seed_from_u64(7);
    let mut calls = 0;
    for _ in 0..5000 {
        let c = random_container(&mut rng);
        let x = Value::Int(rng.gen_range(-3..4));
        let (b, args) = match &c {
            Value::List(_) => {
                let b = *[Builtin::AddList, Builtin::GetList, Builtin::SizeList]
                    .choose(&mut rng)
                    .unwrap();
                (
                    b,
                    if b == Builtin::SizeList {
                        vec![c.clone()]
                    } else {
                        vec![c.clone(), x]
                    },
                )
            }
            Value::Set(_) => {
                let b = *[Builtin::AddSet, Builtin::ContainsSet, Builtin::SizeSet]
                    .choose(&mut rng)
                    .unwrap();
                (
                    b,
                    if b == Builtin::SizeSet {
                        vec![c.clone()]
                    } else {
                        vec![c.clone(), x]
                    },
                )
            }
            _ => {
                if rng.gen() {
                    (Builtin::GetMap, vec![c.clone(), x])
                } else {
                    (Builtin::PutMap, vec![c.clone(), x, Value::Str("new".into())])
                }
            }
        };
        let before = serde_json::to_string(&args).unwrap();
        let _ = builtins::call(b, &args);
        let after = serde_json::to_string(&args).unwrap();
        ensure(before == after, || format!("{} mutated its arguments", b.name()))?;
        calls += 1;
    }

    let mut steps = 0;
    for name in ["student.stabl", "shop.stabl", "nondet.stabl"] {
        let spec = check_source(&corpus(name)).map_err(|_| format!("{name} rejected"))?;
        let events = events_of(&spec);
        let inputs = inputs_of(&spec);
        let mut m = init_machine(&spec).map_err(|f| f.to_string())?;
        for _ in 0..500 {
            m = random_input(&mut rng, &spec, &inputs, m);
            let e = events.choose(&mut rng).unwrap();
            let a = step(&spec, &m, e);
            let b = step(&spec, &m, e);
            let ja = (a.0.to_json(), serde_json::to_string(&a.1).unwrap());
            let jb = (b.0.to_json(), serde_json::to_string(&b.1).unwrap());
            ensure(ja == jb, || format!("{name}: step on `{e}` is not deterministic"))?;
            m = a.0;
            steps += 1;
        }
        let chart = stabl::model::resolve(&stabl::syntax::parse_source(&corpus(name)).unwrap()).unwrap();
        let again = stabl::model::resolve(&stabl::syntax::parse_source(&corpus(name)).unwrap()).unwrap();
        ensure(stabl::dot::to_dot(&chart) == stabl::dot::to_dot(&again), || {
            format!("{name}: DOT differs")
        })?;
    }
    Ok(format!(
        "{calls} built-in calls left arguments intact; {steps} repeated steps byte-identical; DOT stable"
    ))
}

fn events_of(spec: &TypedSpec) -> Vec<String> {
    let mut es: Vec<String> = spec
        .chart
        .transitions
        .iter()
        .filter_map(|t| t.trigger.clone())
        .collect();
    es.sort();
    es.dedup();
    es.push("eUnused".into());
    es
}

fn inputs_of(spec: &TypedSpec) -> Vec<(StateId, String, TypeExpr)> {
    let mut out = Vec::new();
    for s in spec.chart.state_ids() {
        for l in &spec.chart.state(s).locals {
            if l.is_input {
                out.push((s, l.name.clone(), spec.var_type(s, &l.name).unwrap().clone()));
            }
        }
    }
    out
}

fn random_input(
    rng: &mut StdRng,
    spec: &TypedSpec,
    inputs: &[(StateId, String, TypeExpr)],
    m: MachineState,
) -> MachineState {
    if inputs.is_empty() || rng.gen_bool(0.6) {
        return m;
    }
    let (s, name, ty) = inputs.choose(rng).unwrap();
    let q = format!("{}.{name}", spec.chart.qualified_name(*s));
    let v = random_value(rng, ty, spec);
    match set_input(spec, &m, &q, v) {
        Ok(next) => next,
        Err(f) => {
            assert_eq!(f.code, Code::NotInConfig, "{f}");
            m
        }
    }
}

/// Checks the leaf-plus-ancestors shape using only parent links.
fn configuration_ok(spec: &TypedSpec, m: &MachineState) -> bool {
    let config = m.configuration(spec);
    let leaf = spec.chart.state(m.leaf);
    leaf.children.is_empty()
        && config.first() == Some(&spec.chart.root)
        && config.last() == Some(&m.leaf)
        && config.windows(2).all(|w| spec.chart.state(w[1]).parent == Some(w[0]))
        && spec.chart.state(config[0]).parent.is_none()
}

fn configuration_invariant() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0xc0ffee);
    let specs: Vec<TypedSpec> = ["student.stabl", "shop.stabl", "nondet.stabl"]
        .iter()
        .map(|n| check_source(&corpus(n)).unwrap())
        .collect();
    let (mut steps, mut nondet, mut fired) = (0usize, 0usize, 0usize);
    for round in 0..60 {
        let spec = &specs[round % specs.len()];
        let events = events_of(spec);
        let inputs = inputs_of(spec);
        let mut m = init_machine(spec).map_err(|f| f.to_string())?;
        let mut balance: HashMap<StateId, i64> = m.configuration(spec).into_iter().map(|s| (s, 1)).collect();
        for _ in 0..200 {
            m = random_input(&mut rng, spec, &inputs, m);
            let e = events.choose(&mut rng).unwrap();
            let expected = enabled(spec, &m, e);
            let (next, report) = step(spec, &m, e);
            match (&expected, &report) {
                (
                    Ok(ts),
                    StepReport::Fired {
                        transition,
                        exited,
                        entered,
                    },
                ) if ts.len() == 1 && ts[0] == *transition => {
                    fired += 1;
                    for s in exited {
                        *balance.entry(*s).or_default() -= 1;
                    }
                    for s in entered {
                        *balance.entry(*s).or_default() += 1;
                    }
                }
                (Ok(ts), StepReport::Discarded) if ts.is_empty() => {}
                (Ok(ts), StepReport::Fault(f)) if ts.len() > 1 => {
                    ensure(f.code == Code::Nondeterminism, || {
                        format!("{} enabled but fault {f}", ts.len())
                    })?;
                    nondet += 1;
                }
                (Err(_), StepReport::Fault(_)) => {}
                (Ok(ts), StepReport::Fault(f)) if ts.len() == 1 => {
                    ensure(f.code != Code::Nondeterminism, || {
                        "single enabled transition reported as nondeterminism".into()
                    })?;
                }
                _ => return Err(format!("enabled {expected:?} but report {report:?}")),
            }
            if matches!(report, StepReport::Fault(_)) {
                ensure(next == m, || "faulting step changed the machine".into())?;
            }
            ensure(configuration_ok(spec, &next), || {
                format!("bad configuration {:?}", next.configuration(spec))
            })?;
            ensure(next.store.well_typed(spec), || "store lost type correctness".into())?;
            for s in spec.chart.state_ids() {
                let b = balance.get(&s).copied().unwrap_or(0);
                let active = next.is_active(spec, s);
                ensure(b == i64::from(active), || {
                    format!("state {s}: entries - exits = {b}, active {active}")
                })?;
            }
            m = next;
            steps += 1;
        }
    }
    ensure(steps >= 10_000, || format!("only {steps} steps"))?;
    ensure(nondet > 0, || "fuzzer never hit a nondeterministic enabling".into())?;
    Ok(format!(
        "{steps} fuzzed steps ({fired} fired, {nondet} nondeterminism faults), invariants held"
    ))
}

fn type_expr() -> impl Strategy<Value = TypeExpr> {
    let leaf = prop_oneof![
        Just(TypeExpr::INT),
        Just(TypeExpr::BOOLEAN),
        Just(TypeExpr::STRING),
        prop::sample::select(vec!["A", "B", "C"]).prop_map(TypeExpr::var),
        Just(TypeExpr::named("unit", vec![])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(TypeExpr::list),
            inner.clone().prop_map(TypeExpr::set),
            (inner.clone(), inner.clone()).prop_map(|(k, v)| TypeExpr::map(k, v)),
            inner.clone().prop_map(|t| TypeExpr::named("box", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| TypeExpr::named("pair", vec![a, b])),
        ]
    })
}

fn ground_type() -> impl Strategy<Value = TypeExpr> {
    type_expr().prop_filter("ground", |t| t.is_ground())
}

fn type_properties() -> Verdict {
    let table = check_source(
        "struct unit { } struct<T> box { v : T; all : list<T>; } struct<A, B> pair { first : A; second : B; }
         statechart S {}",
    )
    .map_err(|ds| ds[0].to_string())?
    .table;
    let cases = 10_000;
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (
        type_expr(),
        type_expr(),
        type_expr(),
        any::<(bool, bool)>(),
        (ground_type(), ground_type(), ground_type()),
    );
    runner
        .run(&strategy, |(a, x, y, (same_b, same_c), (ga, gb, gc))| {
            let b = if same_b { a.clone() } else { x };
            let c = if same_c { b.clone() } else { y };
            // Equivalence laws.
            prop_assert!(structural_eq(&a, &a));
            prop_assert_eq!(structural_eq(&a, &b), structural_eq(&b, &a));
            if structural_eq(&a, &b) && structural_eq(&b, &c) {
                prop_assert!(structural_eq(&a, &c));
            }
            // Independent oracle: the printed forms coincide.
            prop_assert_eq!(structural_eq(&a, &b), a.to_string() == b.to_string());
            // Substitution preserves equality and grounds every variable.
            let sigma: HashMap<&str, &TypeExpr> = [("A", &ga), ("B", &gb), ("C", &gc)].into_iter().collect();
            let (sa, sb) = (a.subst(&sigma), b.subst(&sigma));
            prop_assert!(sa.is_ground());
            if structural_eq(&a, &b) {
                prop_assert!(structural_eq(&sa, &sb));
            }
            // Substantiating a struct commutes with equality of arguments.
            let boxed = table.get_struct("box").unwrap();
            let (ba, bb) = (
                boxed.substantiate(std::slice::from_ref(&sa)).unwrap(),
                boxed.substantiate(std::slice::from_ref(&sb)).unwrap(),
            );
            prop_assert!(structural_eq(&ba.fields[0].ty, &sa));
            prop_assert!(structural_eq(&ba.fields[1].ty, &TypeExpr::list(sa.clone())));
            prop_assert_eq!(
                ba.fields
                    .iter()
                    .zip(&bb.fields)
                    .all(|(f, g)| structural_eq(&f.ty, &g.ty)),
                structural_eq(&sa, &sb)
            );
            let p = table
                .get_struct("pair")
                .unwrap()
                .substantiate(&[a.clone(), b.clone()])
                .unwrap();
            let q = table
                .get_struct("pair")
                .unwrap()
                .substantiate(&[sa.clone(), sb.clone()])
                .unwrap();
            prop_assert!(structural_eq(&p.fields[0].ty.subst(&sigma), &q.fields[0].ty));
            prop_assert!(structural_eq(&p.fields[1].ty.subst(&sigma), &q.fields[1].ty));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{cases} cases of 5+ type expressions each: laws and commutation hold"
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden corpus", golden_corpus),
        ("mutation suite", mutation_suite),
        ("scoping oracle equivalence", scoping_oracle),
        ("trace oracle", trace_oracle),
        ("purity and determinism", purity_and_determinism),
        ("configuration invariant", configuration_invariant),
        ("type-system properties", type_properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
