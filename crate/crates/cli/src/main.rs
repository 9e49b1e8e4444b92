use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use eqbundle_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let name = cli.command.name();
    let outcome = match run(&cli.command).and_then(|o| o.write_output().map(|()| o)) {
        Ok(o) => o,
        Err(err) => {
            let o = Outcome::from_error(&err);
            if !cli.json {
                eprintln!("{}", o.summary);
                return ExitCode::from(o.exit as u8);
            }
            o
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.render(name, cli.json).as_bytes());
    ExitCode::from(outcome.exit as u8)
}
