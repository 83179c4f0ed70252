//! Command-line front end for `thirdbvp-core`.
//!
//! Exit codes: 0 success, 1 input error, 2 no convergence, 3 the contraction
//! hypothesis `q < 1` fails (`check` only).

pub mod args;
pub mod commands;
pub mod svg;
pub mod table;

use std::io::Write;

pub use args::{Cli, Command};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_HYPOTHESIS: u8 = 3;

/// Run a parsed command line, reporting errors on `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let res = match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a, out, err),
        Command::Study(a) => commands::cmd_study(a, out, err),
        Command::Check(a) => commands::cmd_check(a, out, err),
        Command::Plot(a) => commands::cmd_plot(a, out, err),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}
