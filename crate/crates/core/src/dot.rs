//! Graphviz rendering. Composite states become clusters; output depends
//! only on the chart, so equal charts render to identical text.

use crate::model::{StateId, Statechart};
use crate::syntax::print_expr;
use std::fmt::Write;

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Edge attributes that clip at a composite state's cluster border.
fn clip(chart: &Statechart, s: StateId, attr: &str) -> String {
    if chart.state(s).is_atomic() {
        String::new()
    } else {
        format!(", {attr}=cluster_{s}")
    }
}

pub fn to_dot(chart: &Statechart) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(chart.name())).unwrap();
    out.push_str("  compound=true;\n  node [shape=box, style=rounded];\n");
    state(chart, chart.root, 1, &mut out);
    for t in &chart.transitions {
        let mut label = t.name.clone();
        if let Some(e) = &t.trigger {
            write!(label, " / {e}").unwrap();
        }
        if let Some(g) = &t.guard {
            write!(label, " [{}]", print_expr(g)).unwrap();
        }
        writeln!(
            out,
            "  {} -> {} [label={}{}{}];",
            t.source,
            t.destination,
            quote(&label),
            clip(chart, t.source, "ltail"),
            clip(chart, t.destination, "lhead"),
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn state(chart: &Statechart, s: StateId, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let st = chart.state(s);
    if st.is_atomic() {
        writeln!(out, "{pad}{s} [label={}];", quote(&st.name)).unwrap();
        return;
    }
    writeln!(out, "{pad}subgraph cluster_{s} {{").unwrap();
    writeln!(out, "{pad}  label={};", quote(&st.name)).unwrap();
    // Anchor for edges that end at the cluster itself.
    writeln!(out, "{pad}  {s} [shape=point, style=invis];").unwrap();
    if let Some(init) = st.initial_child {
        writeln!(out, "{pad}  {s}_init [shape=point, width=0.15];").unwrap();
        let attr = if chart.state(init).is_atomic() {
            String::new()
        } else {
            format!(" [lhead=cluster_{init}]")
        };
        writeln!(out, "{pad}  {s}_init -> {init}{attr};").unwrap();
    }
    for &c in &st.children {
        state(chart, c, depth + 1, out);
    }
    writeln!(out, "{pad}}}").unwrap();
}
