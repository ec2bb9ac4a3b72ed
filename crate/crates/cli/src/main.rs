//! `numwall`: number walls, tile discovery and verification from the shell.
//!
//! The first line printed by every command is a set of `key=value` pairs.
//! Exit codes: 0 success, 2 window too large, 3 verification failed,
//! 4 usage error, 1 anything else.

/// `println!` that returns broken pipes and other write errors to the caller.
macro_rules! say {
    ($($t:tt)*) => {
        std::io::Write::write_fmt(&mut std::io::stdout().lock(), format_args!("{}\n", format_args!($($t)*)))?
    };
}

mod commands;
mod config;
mod source;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "numwall",
    version,
    about = "Number walls over prime fields and their tilings"
)]
pub struct Cli {
    /// TOML file with default flag values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the wall of a sequence prefix.
    Wall(commands::WallArgs),
    /// Discover the tiles and two-dimensional morphism of a wall.
    Tile(commands::TileArgs),
    /// Check a closed tile set against the frame constraints.
    Verify(commands::VerifyArgs),
    /// Find the shortest length at which every sequence has a window.
    Search(commands::SearchArgs),
    /// Substitute a polynomial into the Laurent series of a sequence.
    Subst(commands::SubstArgs),
}

/// An error in what the user asked for, as opposed to one met while doing it.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub const EXIT_WINDOW_TOO_LARGE: u8 = 2;
pub const EXIT_FAIL: u8 = 3;
pub const EXIT_USAGE: u8 = 4;

fn main() -> ExitCode {
    let args = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return report(e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    debug_assert!(cli.config.is_none(), "consumed by config::expand");
    let result = match cli.command {
        Command::Wall(a) => commands::wall(a),
        Command::Tile(a) => commands::tile(a),
        Command::Verify(a) => commands::verify(a),
        Command::Search(a) => commands::search(a),
        Command::Subst(a) => commands::subst(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => report(e),
    }
}

fn report(e: anyhow::Error) -> ExitCode {
    if e.downcast_ref::<std::io::Error>()
        .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    {
        return ExitCode::SUCCESS;
    }
    eprintln!("error: {e:#}");
    if e.downcast_ref::<Usage>().is_some() {
        ExitCode::from(EXIT_USAGE)
    } else {
        ExitCode::FAILURE
    }
}
