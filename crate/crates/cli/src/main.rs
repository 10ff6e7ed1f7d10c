use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = ncstar_cli::run_command(std::env::args().skip(1));
    // a closed pipe downstream is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    let _ = stdout
        .write_all(out.stdout.as_bytes())
        .and_then(|_| stdout.flush());
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr.trim_end());
    }
    ExitCode::from(out.code as u8)
}
