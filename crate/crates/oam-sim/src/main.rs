use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(oam_sim::cli::run(std::env::args()) as u8)
}
