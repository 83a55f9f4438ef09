mod args;
mod commands;
mod error;
mod files;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use error::EX_USAGE;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match &cli.command {
        Command::Factor(a) => commands::factor(a),
        Command::Verify(a) => commands::verify(a),
        Command::ClassifyDiag3(a) => commands::classify_diag3(a),
        Command::CertifyDiag3(a) => commands::certify_diag3(a),
        Command::EmitSystem(a) => commands::emit_system(a),
        Command::Decide(a) => commands::decide(a),
        Command::Search(a) => commands::search(a),
        Command::Solve(a) => commands::solve(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("toepfactor: {e}");
            if cli.json {
                println!("{}", json!({"error": e.msg, "code": e.code}));
            }
            ExitCode::from(e.code as u8)
        }
    }
}
