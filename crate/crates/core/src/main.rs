use std::process::ExitCode;

use clap::Parser;
use dbsampler::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("DBSAMPLER_THREADS") {
        let threads = match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => t,
            _ => {
                eprintln!("error code=2 kind=config message=\"DBSAMPLER_THREADS must be a positive integer, got '{v}'\"");
                return ExitCode::from(2);
            }
        };
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let code = execute(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
