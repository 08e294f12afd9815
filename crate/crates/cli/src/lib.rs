//! Command-line front end: instance files, checks, differentials and cohomology.

pub mod commands;
pub mod instance;
pub mod report;

use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_INPUT } else { commands::EXIT_PASS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let outcome = commands::dispatch(&cli);
    let written = match cli.emit {
        commands::Emit::Json => {
            let body = serde_json::to_string_pretty(&outcome.json).expect("JSON values always serialize");
            writeln!(out, "{body}")
        }
        commands::Emit::Text => {
            let sink: &mut dyn Write = if outcome.code == commands::EXIT_INPUT { err } else { out };
            outcome.text.iter().try_for_each(|l| writeln!(sink, "{l}"))
        }
    };
    if written.is_err() {
        return commands::EXIT_INPUT;
    }
    outcome.code
}
