//! Library surface of the `engel` command line: expression parser, file
//! formats and command implementations, reused by the integration tests.

pub mod commands;
pub mod expr;
pub mod files;
