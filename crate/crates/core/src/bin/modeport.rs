use std::process::ExitCode;

use modeport::cli::{execute_and_report, violations_json, EXIT_INVARIANT, EXIT_IO};
use modeport::config::{parse_config, ConfigError};
use modeport::report::Violation;

fn main() -> ExitCode {
    let code = match parse_config(std::env::args_os()) {
        Ok(cfg) => execute_and_report(
            &cfg,
            &mut std::io::stdout().lock(),
            &mut std::io::stderr().lock(),
        ),
        Err(ConfigError::Usage(e)) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INVARIANT
            } else {
                0
            }
        }
        Err(e @ ConfigError::Io { .. }) => {
            eprintln!("{e}");
            EXIT_IO
        }
        Err(e) => {
            eprint!(
                "{}",
                violations_json(&[Violation::new("config", e.to_string())])
            );
            EXIT_INVARIANT
        }
    };
    ExitCode::from(code as u8)
}
