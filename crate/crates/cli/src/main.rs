use std::process::ExitCode;

use chromatope_cli::args::{Command, HexCmd};
use chromatope_cli::{run, server, Cli, CliError};
use clap::error::ErrorKind;
use clap::Parser;

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.envelope());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CHROMATOPE_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    if let Command::Hex(HexCmd::Serve { host, port }) = &cli.command {
        let runtime = match tokio::runtime::Runtime::new() {
            Ok(r) => r,
            Err(e) => return fail(&CliError::Io(e.to_string())),
        };
        return match runtime.block_on(server::serve(host, *port)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&CliError::Io(e.to_string())),
        };
    }
    match run(cli) {
        Ok(outcome) => {
            let text = outcome.render();
            match &outcome.output.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        return fail(&CliError::Io(format!("{}: {e}", path.display())));
                    }
                }
                None => print!("{text}"),
            }
            if !outcome.ok {
                eprintln!(
                    "{}",
                    serde_json::json!({ "error": { "kind": "witness_absent", "message": "check failed; probable bug" } })
                );
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => fail(&e),
    }
}
