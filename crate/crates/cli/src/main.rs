mod args;
mod commands;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure of a run: a domain error from the solvers or an I/O problem.
#[derive(Debug)]
pub enum Failure {
    Domain(fperp::Error),
    Io(String),
    /// Checks ran but at least one failed.
    Checks(usize),
}

impl From<fperp::Error> for Failure {
    fn from(e: fperp::Error) -> Self {
        Failure::Domain(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
            Failure::Checks(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("error: cannot start the worker pool: {e}");
        return ExitCode::from(1);
    }
    echo_config(&cli, threads);
    let outcome = match &cli.command {
        Command::Transform(a) => commands::transform(a),
        Command::MultPower(a) => commands::mult_power(a),
        Command::Subordinate(a) => commands::subordinate(a, cli.verbose),
        Command::Perpetuity(a) => commands::perpetuity(a, cli.verbose),
        Command::Tails(a) => commands::tails(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Validate(a) => validate::run(a.suite),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn echo_config(cli: &Cli, threads: usize) {
    let mut v = serde_json::to_value(cli).expect("arguments serialize");
    v["threads"] = threads.into();
    v["version"] = env!("CARGO_PKG_VERSION").into();
    println!("# config");
    println!("{}", serde_json::to_string_pretty(&v).expect("config serializes"));
    println!("# summary");
}
