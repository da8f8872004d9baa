//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use std::path::PathBuf;

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// A mutant with the span its single diagnostic must carry.
pub struct Mutant {
    pub file: String,
    pub code: String,
    pub source: String,
    /// 1-based `(line, col)`; `end` is exclusive.
    pub start: (u32, u32),
    pub end: (u32, u32),
}

fn line_col(src: &str, offset: usize) -> (u32, u32) {
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().unwrap().chars().count() + 1;
    (line as u32, col as u32)
}

/// Reads `corpus/mutants/MANIFEST`. Each context string must occur exactly
/// once in its mutant; `[[...]]` marks the expected span.
pub fn mutants() -> Vec<Mutant> {
    corpus("mutants/MANIFEST")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<_> = l.splitn(3, " | ").collect();
            let [file, code, context] = parts[..] else {
                panic!("bad manifest line {l}")
            };
            let source = corpus(&format!("mutants/{file}"));
            let open = context.find("[[").expect("span start marker");
            let close = context.find("]]").expect("span end marker");
            let plain = context.replace("[[", "").replace("]]", "");
            assert_eq!(
                source.matches(&plain).count(),
                1,
                "{file}: context `{plain}` is not unique"
            );
            let at = source.find(&plain).unwrap();
            let start = at + open;
            let end = at + close - 2;
            Mutant {
                file: file.to_string(),
                code: code.to_string(),
                start: line_col(&source, start),
                end: line_col(&source, end),
                source,
            }
        })
        .collect()
}

/// One line of `student_trace.expected`.
pub struct TraceRow {
    pub label: String,
    pub leaf: String,
    pub vars: Vec<(String, String)>,
}

pub fn expected_trace() -> Vec<TraceRow> {
    corpus("student_trace.expected")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let cols: Vec<_> = l.split(" | ").collect();
            let vars = cols[2]
                .split("; ")
                .map(|kv| {
                    let (k, v) = kv.split_once('=').unwrap();
                    (k.to_string(), v.to_string())
                })
                .collect();
            TraceRow {
                label: cols[0].to_string(),
                leaf: cols[1].to_string(),
                vars,
            }
        })
        .collect()
}

/// A randomly shaped chart, kept as plain parent links so oracles can work
/// without the library's model.
pub struct RandomChart {
    /// `parent[i]` of state `S{i}`; state 0 is the root.
    pub parent: Vec<Option<usize>>,
    /// `(scope, source, destination)` of transition `t{i}`.
    pub transitions: Vec<(usize, usize, usize)>,
    pub source: String,
}

impl RandomChart {
    /// `s` and its ancestors, `s` first.
    pub fn chain(&self, mut s: usize) -> Vec<usize> {
        let mut out = vec![s];
        while let Some(p) = self.parent[s] {
            out.push(p);
            s = p;
        }
        out
    }

    pub fn children(&self, s: usize) -> Vec<usize> {
        (0..self.parent.len()).filter(|&c| self.parent[c] == Some(s)).collect()
    }

    /// Dotted path from just below `from` down to `to`.
    fn relative(&self, from: usize, to: usize) -> String {
        let mut names: Vec<_> = self
            .chain(to)
            .into_iter()
            .take_while(|&s| s != from)
            .map(|s| format!("S{s}"))
            .collect();
        names.reverse();
        names.join(".")
    }

    /// Qualified name as printed by the library (`S0.S3.S7`).
    pub fn qualified(&self, s: usize) -> String {
        let mut names: Vec<_> = self.chain(s).into_iter().map(|s| format!("S{s}")).collect();
        names.reverse();
        names.join(".")
    }

    /// Access of transition `t` to variables of state `s`, read straight off
    /// the rule: the declaring state and everything above it is RW; the
    /// source chain below it is RO, the destination chain below it is WO,
    /// and a state on both chains is RW.
    pub fn rule3(&self, t: usize, s: usize) -> &'static str {
        let (scope, src, dst) = self.transitions[t];
        let above = self.chain(scope);
        if above.contains(&s) {
            return "RW";
        }
        let on_src = self.chain(src).contains(&s);
        let on_dst = self.chain(dst).contains(&s);
        match (on_src, on_dst) {
            (true, true) => "RW",
            (true, false) => "RO",
            (false, true) => "WO",
            (false, false) => "NONE",
        }
    }

    fn emit(&self, s: usize, depth: usize, initial: bool, out: &mut String) {
        let pad = "  ".repeat(depth);
        let kw = if s == 0 {
            "statechart".to_string()
        } else if initial {
            "init state".to_string()
        } else {
            "state".to_string()
        };
        out.push_str(&format!("{pad}{kw} S{s} {{\n{pad}  var v_{s} : int;\n"));
        for (i, c) in self.children(s).into_iter().enumerate() {
            self.emit(c, depth + 1, i == 0, out);
        }
        for (i, &(scope, a, b)) in self.transitions.iter().enumerate() {
            if scope == s {
                out.push_str(&format!(
                    "{pad}  transition t{i} : {} -> {} on e{};\n",
                    self.relative(s, a),
                    self.relative(s, b),
                    i % 3
                ));
            }
        }
        out.push_str(&format!("{pad}}}\n"));
    }
}

/// A chart with 2 to `max_states` states and up to `max_transitions`
/// transitions, each declared in a random common proper ancestor of its
/// endpoints.
pub fn random_chart(rng: &mut impl Rng, max_states: usize, max_transitions: usize) -> RandomChart {
    let n = rng.gen_range(2..=max_states);
    let mut parent = vec![None];
    for i in 1..n {
        parent.push(Some(rng.gen_range(0..i)));
    }
    let mut chart = RandomChart {
        parent,
        transitions: Vec::new(),
        source: String::new(),
    };
    let k = rng.gen_range(0..=max_transitions);
    for _ in 0..k {
        let a = rng.gen_range(1..n);
        let b = rng.gen_range(1..n);
        let above_b = chart.chain(b);
        let common: Vec<usize> = chart.chain(a)[1..]
            .iter()
            .copied()
            .filter(|s| above_b[1..].contains(s))
            .collect();
        let scope = *common.choose(rng).expect("root is a common ancestor");
        chart.transitions.push((scope, a, b));
    }
    let mut src = String::new();
    chart.emit(0, 0, false, &mut src);
    chart.source = src;
    chart
}
