use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qinfo::commands::{self, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::OracleServe { common, fail_after } = &cli.command {
        let stdin = std::io::stdin();
        return match commands::serve(common, *fail_after, stdin.lock(), std::io::stdout().lock()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code())
            }
        };
    }
    let common = cli.command.common().clone();
    let result = commands::run(&cli.command).and_then(|out| {
        if let Some(prefix) = &common.out {
            out.write_files(prefix)?;
        }
        let text = out.render(common.format)?;
        std::io::stdout().write_all(text.as_bytes()).map_err(|e| qinfo::CliError::Io(e.to_string()))?;
        Ok(out.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
