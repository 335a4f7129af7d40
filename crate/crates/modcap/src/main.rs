use std::process::ExitCode;

fn main() -> ExitCode {
    modcap::cli::run()
}
