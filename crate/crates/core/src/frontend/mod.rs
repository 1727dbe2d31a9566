//! Concrete syntax, source files, traces, the corpus runner, and the CLI.

pub mod cli;
pub mod corpus;
pub mod parse;
pub mod print;
pub mod source;
pub mod trace;
