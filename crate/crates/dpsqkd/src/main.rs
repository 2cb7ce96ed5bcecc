use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dpsqkd::cli::run_from_env() as u8)
}
