use std::{io, process::ExitCode};

use clap::Parser;
use graph_mend_cli::{run, Cli};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors by itself
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr());
    match run(cli, &mut out, &mut err) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("graph-mend: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
