//! Run configuration, subcommands and table serialization for the `dqpt`
//! binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

pub use commands::{run_command, Command};
pub use config::{load_config, load_config_str, Overrides, RunConfig};
pub use error::CliError;
pub use table::{read_ndjson, write_table, Cell, Format, OutputTable, Provenance};
