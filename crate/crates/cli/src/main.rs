use std::process::ExitCode;

use photon_clusters_cli::error::CliError;
use photon_clusters_cli::output::PRECISION_ENV;
use photon_clusters_cli::{precision_from_env, run};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = precision_from_env(std::env::var(PRECISION_ENV).ok().as_deref())
        .and_then(|precision| run(&argv, precision, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Display(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
