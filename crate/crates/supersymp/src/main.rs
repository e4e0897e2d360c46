use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use supersymp::commands::{run, Cli};
use supersymp::report::error_json;

fn emit(v: &serde_json::Value) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            emit(&r.to_json());
            ExitCode::from(r.exit_code() as u8)
        }
        Err(e) => {
            emit(&error_json(&e));
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
