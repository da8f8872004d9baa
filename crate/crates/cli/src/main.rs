//! `stablc`: check, simulate and render StaBL specifications.
//!
//! Exit codes: 0 success, 1 spec or expectation failure, 2 I/O or usage error.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use stabl::diagnostic::{Diagnostic, Severity};
use stabl::runtime::{parse_command, run_script, Command, Outcome, ScriptError, Session};
use stabl::typechecker::{check_source, TypedSpec};
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "stablc", version, about = "StaBL specification checker and simulator")]
struct Cli {
    /// Output format for diagnostics and traces.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Colorize human-readable output.
    #[arg(long, global = true, value_enum, default_value_t = Color::Auto)]
    color: Color,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Color {
    Auto,
    Always,
    Never,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and typecheck a specification.
    Check { file: PathBuf },
    /// Run a simulation script against a specification.
    Run {
        file: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Interactive simulation reading commands from stdin.
    Repl { file: PathBuf },
    /// Render the state hierarchy as Graphviz DOT.
    Dot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print each state's access mode for a transition's code.
    Access { file: PathBuf, transition: String },
}

/// Failure modes that map onto exit codes.
enum Failure {
    /// The spec or script was rejected (exit 1).
    Rejected,
    /// The environment failed us (exit 2).
    Io(String),
}

type CmdResult = Result<(), Failure>;

struct Out {
    format: Format,
    color: bool,
}

impl Out {
    fn paint(&self, text: &str, ansi: &str) -> String {
        if self.color {
            format!("\x1b[{ansi}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn diagnostic(&self, d: &Diagnostic, file: &str) {
        match self.format {
            Format::Structured => println!("{}", d.render_structured(file)),
            Format::Human => {
                let line = d.render_human(file);
                let line = match d.severity {
                    Severity::Error => line.replacen("error[", &format!("{}[", self.paint("error", "1;31")), 1),
                    Severity::Warning => line.replacen("warning[", &format!("{}[", self.paint("warning", "1;33")), 1),
                };
                eprintln!("{line}");
            }
        }
    }

    fn record(&self, value: serde_json::Value) {
        println!("{value}");
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load(out: &Out, path: &Path) -> Result<TypedSpec, Failure> {
    let src = read(path)?;
    let file = path.display().to_string();
    match check_source(&src) {
        Ok(spec) => {
            for w in &spec.warnings {
                out.diagnostic(w, &file);
            }
            Ok(spec)
        }
        Err(diags) => {
            for d in &diags {
                out.diagnostic(d, &file);
            }
            Err(Failure::Rejected)
        }
    }
}

fn cmd_check(out: &Out, path: &Path) -> CmdResult {
    let spec = load(out, path)?;
    if out.format == Format::Structured {
        out.record(json!({"kind": "summary", "errors": 0, "warnings": spec.warnings.len()}));
    }
    Ok(())
}

fn error_code(e: &ScriptError) -> &'static str {
    match e {
        ScriptError::Parse(_) => "SCRIPT_SYNTAX",
        ScriptError::Fault(f) => f.code.as_str(),
        ScriptError::Expectation { .. } => "EXPECT_FAILED",
    }
}

fn outcome(out: &Out, line: usize, o: &Outcome) {
    match out.format {
        Format::Human => println!("{o}"),
        Format::Structured => {
            let mut v = serde_json::to_value(o).expect("outcomes serialize");
            v["line"] = json!(line);
            out.record(v);
        }
    }
}

fn script_error(out: &Out, file: &str, line: usize, e: &ScriptError) {
    let message = match e {
        ScriptError::Fault(f) => f.message.clone(),
        e => e.to_string(),
    };
    match out.format {
        Format::Human => println!("{file}:{line}: {}: {message}", out.paint(error_code(e), "1;31")),
        Format::Structured => out.record(json!({
            "kind": "failure",
            "file": file,
            "line": line,
            "code": error_code(e),
            "message": message,
        })),
    }
}

fn cmd_run(out: &Out, path: &Path, script: &Path) -> CmdResult {
    let spec = load(out, path)?;
    let text = read(script)?;
    let run = run_script(&spec, &text);
    for (line, _, o) in &run.steps {
        outcome(out, *line, o);
    }
    match &run.failure {
        None => Ok(()),
        Some((line, e)) => {
            script_error(out, &script.display().to_string(), *line, e);
            Err(Failure::Rejected)
        }
    }
}

fn cmd_repl(out: &Out, path: &Path) -> CmdResult {
    let spec = load(out, path)?;
    let mut session = match Session::new(&spec) {
        Ok(s) => s,
        Err(f) => {
            script_error(out, "<init>", 0, &ScriptError::Fault(f));
            return Err(Failure::Rejected);
        }
    };
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let prompt = || {
        if interactive {
            print!("> ");
            let _ = io::stdout().flush();
        }
    };
    prompt();
    for (i, line) in stdin.lock().lines().enumerate() {
        let line = line.map_err(|e| Failure::Io(e.to_string()))?;
        let result = match parse_command(&line) {
            Ok(Some(cmd)) => session.execute(&cmd).map(|o| (cmd, o)),
            Ok(None) => {
                prompt();
                continue;
            }
            Err(e) => Err(ScriptError::Parse(e)),
        };
        match result {
            Ok((Command::Quit, _)) => break,
            Ok((_, o)) => outcome(out, i + 1, &o),
            Err(e) => script_error(out, "<stdin>", i + 1, &e),
        }
        prompt();
    }
    Ok(())
}

fn cmd_dot(out: &Out, path: &Path, dest: Option<&Path>) -> CmdResult {
    let src = read(path)?;
    let file = path.display().to_string();
    let chart = stabl::syntax::parse_source(&src).and_then(|ast| stabl::model::resolve(&ast));
    let chart = match chart {
        Ok(c) => c,
        Err(diags) => {
            for d in &diags {
                out.diagnostic(d, &file);
            }
            return Err(Failure::Rejected);
        }
    };
    let dot = stabl::dot::to_dot(&chart);
    match dest {
        Some(p) => std::fs::write(p, dot).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn cmd_access(out: &Out, path: &Path, name: &str) -> CmdResult {
    let spec = load(out, path)?;
    let Some(t) = spec.chart.transition_by_name(name) else {
        eprintln!("no such transition `{name}`");
        return Err(Failure::Rejected);
    };
    let scopes = spec.scopes();
    for (s, access) in scopes.access_row(t) {
        let state = spec.chart.qualified_name(s);
        match out.format {
            Format::Human => println!("{state}: {access}"),
            Format::Structured => out.record(json!({"state": state, "access": access.label()})),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Any non-empty STABLC_NO_COLOR wins over --color.
    let no_color = std::env::var_os("STABLC_NO_COLOR").is_some_and(|v| !v.is_empty());
    let color = !no_color
        && match cli.color {
            Color::Always => true,
            Color::Never => false,
            Color::Auto => io::stdout().is_terminal() && io::stderr().is_terminal(),
        };
    let out = Out {
        format: cli.format,
        color: color && cli.format == Format::Human,
    };
    let result = match &cli.command {
        Cmd::Check { file } => cmd_check(&out, file),
        Cmd::Run { file, script } => cmd_run(&out, file, script),
        Cmd::Repl { file } => cmd_repl(&out, file),
        Cmd::Dot { file, out: dest } => cmd_dot(&out, file, dest.as_deref()),
        Cmd::Access { file, transition } => cmd_access(&out, file, transition),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("stablc: {msg}");
            ExitCode::from(2)
        }
    }
}
