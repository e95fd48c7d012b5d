use std::process::ExitCode;

fn main() -> ExitCode {
    dualvol_cli::run()
}
