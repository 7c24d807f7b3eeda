use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(realquad_cli::run(std::env::args_os()) as u8)
}
