//! Expression language: syntax tree, parser, macros and compiler.

pub mod ast;
mod compile;
mod macros;
mod parser;

pub use ast::Expr;
pub use compile::Compiler;
pub use macros::{MacroDef, MacroEnv, BUILTINS};
pub use parser::{parse_expr, parse_file, parse_ranking, GrammarFile, RankSpec};
