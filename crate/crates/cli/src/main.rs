use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, code) = supergv_cli::run(std::env::args_os());
    println!("{out}");
    ExitCode::from(code as u8)
}
