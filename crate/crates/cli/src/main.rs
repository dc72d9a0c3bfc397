use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mvfix::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let summary: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("mvfix: {}", summary.join(" ").trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let outcome = execute(&cli.command);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(3);
    }
    if let Some(msg) = outcome.diagnostic {
        eprintln!("mvfix: {msg}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
