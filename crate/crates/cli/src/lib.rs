//! Robot description files, record output and the command implementations
//! behind the `ga-singular` binary.

pub mod commands;
pub mod output;
pub mod robot_file;

pub use commands::CliError;
pub use output::Format;
pub use robot_file::{parse_robot_file, to_robot_file, RobotFile, RobotFileError};
