use std::process::ExitCode;

use clap::Parser;
use jb_cli::{run, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(&cli, &argv[1..]) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("jbcalc: {e}");
            ExitCode::from(2)
        }
    }
}
