use std::io::{self, Write};
use std::process::ExitCode;

use shor_noise_cli::{parse_config, run, ConfigError};

fn main() -> ExitCode {
    let cfg = match parse_config(std::env::args_os()) {
        Ok(cfg) => cfg,
        Err(ConfigError::Clap(e)) => e.exit(),
        Err(ConfigError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cfg, &mut lock) {
        Ok(summary) => {
            // With no --out the CSV owns stdout, so the summary goes to stderr.
            if cfg.out.is_some() {
                let _ = writeln!(lock, "{summary}");
            } else {
                let _ = lock.flush();
                eprintln!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
