use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cap = std::env::var(ksw::CAP_ENV).ok();
    let out = ksw::run(std::env::args_os(), cap.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
