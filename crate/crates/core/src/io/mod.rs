//! Profile files, random generators, the benchmark harness and the CLI.

pub mod bench;
pub mod cli;
pub mod generate;
pub mod profile;

pub use generate::{generate, GenError, GenParams, Model};
pub use profile::{parse_profile, serialize_profile, ParseError, ParseErrorKind};
