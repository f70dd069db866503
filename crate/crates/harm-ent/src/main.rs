use std::io;
use std::process::ExitCode;

use clap::Parser;
use harm_ent::cli::Cli;
use harm_ent::commands::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, &mut io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
