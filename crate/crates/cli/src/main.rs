use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use heegner1_cli::{load_config, render, run, Cli, USAGE_EXIT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(std::io::stdout(), "{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(USAGE_EXIT as u8);
        }
    };
    let outcome = load_config(&cli.flags(), &|k| std::env::var(k).ok())
        .and_then(|cfg| run(&cli.command, &cfg).map(|env| (env, cfg)));
    match outcome {
        Ok((env, cfg)) => {
            // a closed pipe is not an error of the run
            let _ = writeln!(std::io::stdout(), "{}", render(&env, cfg.output_format));
            ExitCode::from(env.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT as u8)
        }
    }
}
