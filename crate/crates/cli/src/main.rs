use std::io::{self, Write};
use std::process::ExitCode;

use absum_cli::{run, CliError, RunConfig, THREADS_ENV};

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        CliError::Usage(format!("{THREADS_ENV}={raw:?} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let result = configure_threads()
        .and_then(|()| RunConfig::from_args(std::env::args_os()))
        .and_then(|config| {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            let code = run(&config, &mut out)?;
            out.flush()?;
            Ok(code)
        });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("absum: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
