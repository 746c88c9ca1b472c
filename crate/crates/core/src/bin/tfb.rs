use std::process::ExitCode;

use clap::Parser;
use tfb_core::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.stdout).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", out.stdout);
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(tfb_core::cli::EXIT_USAGE as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
