//! Front end for the sized-types checker: concrete syntax, file driver and
//! LaTeX proof output. The checker itself lives in `szm-core`.

pub mod driver;
pub mod latex;
pub mod lexer;
pub mod parser;

pub use driver::{check_source, run_file, FileReport, Options, Outcome};
pub use parser::{parse_program, parse_term, parse_type, Env, Item, ParseError, SourceFile};
