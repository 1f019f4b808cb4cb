use std::io::{self, Write};
use std::process::ExitCode;

use agm_pi::{run, CliConfig, EXIT_USAGE};
use clap::Parser;

fn main() -> ExitCode {
    let cfg = CliConfig::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cfg, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("agm-pi: {e}");
            if e.exit_code() == EXIT_USAGE {
                eprintln!("try 'agm-pi --help'");
            }
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
