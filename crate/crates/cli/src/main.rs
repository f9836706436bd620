use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;

use curvtool::error::{CliError, EXIT_OK, EXIT_PARSE, EXIT_PROPERTY};
use curvtool::{execute, parse_args, SEED_ENV};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse_args(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_PARSE),
            };
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    let result = execute(&cli, &argv, env_seed.as_deref()).and_then(|report| {
        let text = report.to_text();
        match &cli.out {
            Some(path) => std::fs::write(path, &text)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
            None => {
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
        }
        Ok(report)
    });
    match result {
        Ok(report) if report.passed() => ExitCode::from(EXIT_OK),
        Ok(report) => {
            let failed: Vec<&str> = report.flags.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k.as_str()).collect();
            eprintln!("error: expected property violated: {}", failed.join(", "));
            ExitCode::from(EXIT_PROPERTY)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
