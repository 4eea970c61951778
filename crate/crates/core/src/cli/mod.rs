//! The `residue-verify` command line: goldens reader, expression language,
//! argument parsing, the runner and report emitters.
//!
//! Exit codes: 0 verified, 1 mismatch found, 2 usage or I/O error,
//! 3 pipeline error.

pub mod args;
pub mod expr;
pub mod goldens;
pub mod report;
pub mod run;

use std::io::Write;

use args::{parse_args, Format, RunConfig, UsageError};

/// Run the CLI on `argv`, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(c) => c,
        Err(UsageError::Clap(text)) => {
            // clap renders help/version as "errors" too; those go to stdout with status 0.
            let is_help = !text.starts_with("error:");
            let sink: &mut dyn Write = if is_help { out } else { err };
            let _ = write!(sink, "{}", text);
            return if is_help { 0 } else { 2 };
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            return 2;
        }
    };
    let session = match run::open_session(&cfg) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            return e.exit_code();
        }
    };
    let result = match &cfg {
        RunConfig::Show { name, m, format, .. } => {
            run::show(&session, name.as_deref(), *m, *format == Format::Json).map(|text| out.write_all(text.as_bytes()).map(|_| 0))
        }
        RunConfig::Verify { format, limit, .. } => {
            run::build_report(&cfg, &session).map(|rep| rep.emit(*format, *limit, out).map(|_| rep.exit_code()))
        }
    };
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(io)) => {
            let _ = writeln!(err, "error: cannot write report: {}", io);
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}
