//! Library surface of the command-line tool, exposed so integration and
//! acceptance tests can drive the benchmark harness in-process.

pub mod args;
pub mod bench;
pub mod commands;
pub mod svg;
