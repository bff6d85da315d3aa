//! Surface syntax, signature resolution and grounding.

pub mod ast;
pub mod ground;
pub mod parser;
pub mod printer;
pub mod program;
mod sortprog;
pub mod term;
