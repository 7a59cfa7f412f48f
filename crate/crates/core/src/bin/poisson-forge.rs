use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    poisson_forge::cli::configure_threads();
    let code = poisson_forge::cli::run(std::env::args_os(), &mut stdout().lock(), &mut stderr().lock());
    ExitCode::from(code as u8)
}
