//! Command-line front end: expression parsing, subcommands and JSON reports.

pub mod commands;
pub mod expr;
pub mod input;
pub mod report;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

/// Arguments such as `-3/4` or `-T` are values, not flags: their leading
/// hyphen becomes a Unicode minus, which the expression reader maps back.
fn protect_leading_minus(arg: &str) -> String {
    let arg = expr::normalize(arg);
    match arg.strip_prefix('-') {
        Some(rest) if !rest.is_empty() && !rest.starts_with('-') && !matches!(rest, "h" | "V") => {
            format!("\u{2212}{rest}")
        }
        _ => arg,
    }
}

/// Runs one invocation and returns the text for stdout and the exit code.
pub fn execute<I, S>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args
        .into_iter()
        .map(|a| match a.into().into_string() {
            Ok(s) => protect_leading_minus(&s).into(),
            Err(raw) => raw,
        })
        .collect();
    let cli = match commands::Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return (e.to_string(), report::EXIT_OK);
        }
        Err(e) => {
            let command = args.get(1).and_then(|a| a.to_str()).unwrap_or("").to_string();
            let detail = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let (value, code) = report::render(
                &command,
                json!({}),
                Err(report::Failure::Input(input::InputError::Invalid(detail))),
            );
            return (report::to_text(&value), code);
        }
    };
    let (inputs, outcome) = commands::run(&cli);
    let (value, code) = report::render(cli.command.name(), inputs, outcome);
    (report::to_text(&value), code)
}
