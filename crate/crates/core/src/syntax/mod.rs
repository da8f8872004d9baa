//! Concrete syntax: tokens, syntax tree, parser and pretty printer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod token;

pub use ast::SpecAst;
pub use lexer::tokenize;
pub use parser::{parse, parse_expr_source, parse_source, parse_type_source};
pub use pretty::{print_expr, print_spec, print_type};
