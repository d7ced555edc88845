use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qo_toric_cli::{run, JobSpec, EXIT_PARSE};

fn main() -> ExitCode {
    let job = match JobSpec::try_parse() {
        Ok(job) => job,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let out = serde_json::json!({"errors": [{"kind": "Usage", "message": e.kind().to_string()}]});
            println!("{}", serde_json::to_string_pretty(&out).expect("JSON values always serialize"));
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let outcome = run(&job);
    if let Some(errors) = outcome.output["errors"].as_array() {
        for e in errors {
            eprintln!("qo-toric: {}", e["message"].as_str().unwrap_or_default());
        }
    }
    print!("{}", outcome.render());
    ExitCode::from(outcome.status as u8)
}
