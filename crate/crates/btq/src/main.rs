use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(btq::dispatch(std::env::args_os()))
}
