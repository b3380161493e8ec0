use std::io;
use std::process::ExitCode;

use jamtexter::harness::cli::{self, SEED_ENV};

fn main() -> ExitCode {
    let code = cli::run(
        std::env::args_os(),
        std::env::var(SEED_ENV).ok(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
