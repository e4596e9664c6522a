use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    stlgo_cli::init_threads();
    let code = stlgo_cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
