use std::process::ExitCode;

fn main() -> ExitCode {
    happening::cli::run(std::env::args_os())
}
