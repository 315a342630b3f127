//! Front end for `finv`: JSON documents and the subcommands that use them.

pub mod commands;
pub mod document;

pub use commands::{run, Cli, Command, Failure, Success};
pub use document::{MapDocument, PolyDocument, TermDocument};
