use std::io::Write;
use std::process::ExitCode;

use farey_dim_cli::{dispatch, serialize, CliError};

fn main() -> ExitCode {
    match dispatch(std::env::args_os()) {
        Ok((report, format)) => {
            let bytes = serialize(&report, format);
            if std::io::stdout().lock().write_all(&bytes).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(CliError::Usage(e).exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
