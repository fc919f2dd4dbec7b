use std::io::{self, Write};
use std::process::ExitCode;

use citeflow_cli::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let result = citeflow_cli::run(cli, &mut out, &mut err);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(e), _) => {
            let _ = writeln!(err, "error: {e}");
            ExitCode::from(e.exit_code())
        }
        (Ok(()), Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            ExitCode::from(2)
        }
    }
}
