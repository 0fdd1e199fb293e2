use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let code = sleuth_cli::run(std::env::args_os(), &mut out);
    let _ = out.flush();
    ExitCode::from(code)
}
