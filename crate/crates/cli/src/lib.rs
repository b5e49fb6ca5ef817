//! Library side of the `envelope` command: scenario loading, subcommands
//! and rendering. The binary in `main.rs` only parses flags and prints.

pub mod commands;
pub mod error;
pub mod render;
pub mod scenario;

pub use error::CliError;
pub use render::Format;
pub use scenario::{Engine, Scenario};
