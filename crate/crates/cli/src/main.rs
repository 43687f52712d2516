mod commands;
mod error;
mod repl;
mod report;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use qcbracket::algebra::FunctionSymbol;
use qcbracket::{BracketKind, SymbolTable};

use commands::{run_scenario, Session};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qcbracket", version, about = "Exact hybrid quantum-classical bracket calculator")]
struct Cli {
    /// Number of quantum (q, p) pairs.
    #[arg(long, global = true, default_value_t = 1)]
    modes: usize,
    /// Number of classical (x, k) pairs.
    #[arg(long, global = true, default_value_t = 1)]
    dofs: usize,
    /// Declare a real function symbol (repeatable; default: V).
    #[arg(long = "func", global = true, value_name = "NAME")]
    funcs: Vec<String>,
    /// Double-check results against the operator-action oracle.
    #[arg(long, global = true)]
    oracle: bool,
    /// Write the JSON report of `run` here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Exit 1 when a check contradicts its "expect" annotation.
    #[arg(long, global = true)]
    assert: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of an expression.
    Canon { expr: String },
    /// Evaluate a bracket of two expressions.
    Bracket {
        #[arg(long, value_parser = parse_kind)]
        kind: BracketKind,
        a: String,
        b: String,
    },
    /// Time derivative of an observable under a hamiltonian.
    Eom {
        #[arg(long, value_parser = parse_kind)]
        kind: BracketKind,
        #[arg(long)]
        ham: String,
        a: String,
    },
    /// Run a scenario file.
    Run { path: PathBuf },
    /// Interactive session reading from standard input.
    Repl,
}

fn parse_kind(s: &str) -> Result<BracketKind, String> {
    s.parse().map_err(|e: qcbracket::calculus::UnknownBracket| e.to_string())
}

fn table(cli: &Cli) -> Result<Arc<SymbolTable>, CliError> {
    let names = if cli.funcs.is_empty() { vec!["V".to_string()] } else { cli.funcs.clone() };
    let functions = names.into_iter().map(|name| FunctionSymbol { name, real: true }).collect();
    SymbolTable::new(cli.modes, cli.dofs, functions).map(Arc::new).map_err(CliError::from)
}

fn print(lines: &[String]) {
    for l in lines {
        println!("{l}");
    }
}

/// Prints results already computed before a failure so the user sees them.
fn one_shot(result: Result<Vec<String>, CliError>) -> Result<(), CliError> {
    print(&result?);
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Canon { expr } => one_shot(Session::new(table(cli)?, cli.oracle, cli.seed).canon(expr)),
        Command::Bracket { kind, a, b } => {
            one_shot(Session::new(table(cli)?, cli.oracle, cli.seed).bracket(*kind, a, b))
        }
        Command::Eom { kind, ham, a } => one_shot(Session::new(table(cli)?, cli.oracle, cli.seed).eom(*kind, ham, a)),
        Command::Run { path } => {
            let outcome = run_scenario(path, cli.oracle, cli.seed)?;
            print(&outcome.text);
            if let Some(out) = &cli.out {
                std::fs::write(out, &outcome.json).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            }
            if outcome.oracle_failures > 0 {
                return Err(CliError::Failed(format!("oracle disagreed on {} check(s)", outcome.oracle_failures)));
            }
            if cli.assert && outcome.unexpected > 0 {
                return Err(CliError::Failed(format!("{} check(s) contradict their expectation", outcome.unexpected)));
            }
            Ok(())
        }
        Command::Repl => {
            let mut session = Session::new(table(cli)?, cli.oracle, cli.seed);
            let stdin = std::io::stdin();
            let prompt = stdin.is_terminal();
            repl::run(&mut session, stdin.lock(), std::io::stdout(), std::io::stderr(), prompt)
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
