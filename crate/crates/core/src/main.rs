use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = residue_kernel::cli::main_with(std::env::args_os(), &mut out, &mut io::stderr());
    let flushed = out.flush();
    match flushed {
        Ok(()) => ExitCode::from(code as u8),
        Err(_) => ExitCode::from(2),
    }
}
