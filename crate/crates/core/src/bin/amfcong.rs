use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match amfcong::cli::run_args(std::env::args_os()) {
        Ok(outcome) => {
            // A closed pipe is not an error worth a panic.
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.render());
            ExitCode::from(outcome.code as u8)
        }
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            ExitCode::from(amfcong::cli::EXIT_PARSE as u8)
        }
        Err(e) => {
            let _ = e.print();
            ExitCode::SUCCESS
        }
    }
}
