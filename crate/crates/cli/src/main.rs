use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ga_singular::commands::{self, parse_axis, parse_configuration, CliError, EXIT_ERROR, EXIT_OK};
use ga_singular::Format;
use ga_singular_core::singularity::{SweepAxis, DEFAULT_TOL};

/// Comma-separated joint values, taken as one argument.
#[derive(Clone, Debug)]
struct Joints(Vec<f64>);

fn joints(text: &str) -> Result<Joints, String> {
    parse_configuration(text).map(Joints)
}

/// Singularity analysis of serial manipulators through exterior products of joint twists.
#[derive(Parser)]
#[command(name = "ga-singular", version)]
struct Cli {
    /// Threshold on normalized wedge magnitudes.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one configuration; exits 2 when singular.
    Check {
        robot: PathBuf,
        /// Joint values, comma separated.
        #[arg(allow_hyphen_values = true, value_parser = joints)]
        q: Joints,
    },
    /// Classify every point of a grid over up to three joints.
    Sweep {
        robot: PathBuf,
        /// Free joint as joint:min:max:step (one-based joint); repeatable.
        #[arg(long = "free", allow_hyphen_values = true, value_parser = parse_axis)]
        free: Vec<SweepAxis>,
        /// Values of all joints; free joints are overwritten.
        #[arg(long, allow_hyphen_values = true, value_parser = joints)]
        fixed: Joints,
    },
    /// Rotor distance from a configuration to declared singularities.
    Distance {
        robot: PathBuf,
        #[arg(allow_hyphen_values = true, value_parser = joints)]
        q: Joints,
        /// Name of a singularity declared in the robot file; all when omitted.
        #[arg(long)]
        singularity: Option<String>,
    },
    /// Repulsive potential for each declared singularity and the admission verdict.
    Potential {
        robot: PathBuf,
        #[arg(allow_hyphen_values = true, value_parser = joints)]
        q: Joints,
        /// Distance threshold D0.
        #[arg(long)]
        d0: f64,
        /// Potential gain.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let out = io::stdout().lock();
    match cli.command {
        Command::Check { robot, q } => {
            let file = commands::load_robot(&robot)?;
            commands::check(&file, &q.0, cli.tol, cli.format, out)
        }
        Command::Sweep { robot, free, fixed } => {
            let file = commands::load_robot(&robot)?;
            commands::sweep(&file, free, fixed.0, cli.tol, cli.format, out).map(|_| EXIT_OK)
        }
        Command::Distance { robot, q, singularity } => {
            let file = commands::load_robot(&robot)?;
            commands::distance(&file, &q.0, singularity.as_deref(), cli.format, out).map(|_| EXIT_OK)
        }
        Command::Potential { robot, q, d0, kappa } => {
            let file = commands::load_robot(&robot)?;
            commands::potential(&file, &q.0, d0, kappa, cli.format, out).map(|_| EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
