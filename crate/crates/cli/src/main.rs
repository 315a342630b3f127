use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;

use finv_cli::commands::reads_input;
use finv_cli::{run, Cli, Failure};

fn read_input(cli: &Cli) -> Result<String, Failure> {
    let mut buf = String::new();
    match &cli.input {
        Some(path) => {
            buf = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(buf)
}

fn write_output(cli: &Cli, output: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, output),
        None => std::io::stdout().write_all(output.as_bytes()),
    }
}

fn execute(cli: &Cli) -> Result<finv_cli::Success, Failure> {
    let input = if reads_input(&cli.command) {
        Some(read_input(cli)?)
    } else {
        None
    };
    run(cli, input.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let (output, report, code) = match execute(&cli) {
        Ok(s) => (s.output, s.report, 0),
        Err(f) => {
            let code = f.exit_code();
            match f {
                Failure::Verification { output, report } => (output, report, code),
                Failure::Input(msg) => (String::new(), format!("error: {msg}\n"), code),
                Failure::Precondition(e) => (String::new(), format!("error: {e}\n"), code),
            }
        }
    };
    if !output.is_empty() {
        if let Err(e) = write_output(&cli, &output) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    eprint!("{report}");
    ExitCode::from(code as u8)
}
