use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use weylhull::cli::{run, Cli};
use weylhull::format::schema_excerpt;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{}", schema_excerpt());
            return ExitCode::from(1);
        }
    };
    match run(&cli).and_then(|o| o.emit()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
