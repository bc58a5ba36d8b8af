use std::process::ExitCode;

use clap::Parser;
use lbconn_cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli.command);
    if cli.json {
        println!("{}", report.to_json());
    } else if report.status == Status::Error && report.payload.get("rows").is_none() {
        eprint!("{}", report.to_human());
    } else {
        print!("{}", report.to_human());
    }
    report.exit_code()
}
