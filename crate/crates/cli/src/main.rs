use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use weakhopf_cli::output::{render, Format};
use weakhopf_cli::pipeline::{self, builtin, builtin_names, InputError, Outcome, TowerOptions};
use weakhopf_cli::spec::SpecFile;
use weakhopf_cli::{EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

/// Exact verification of weak Hopf algebras and depth-2 Markov extensions.
///
/// FILE is a JSON spec file, or `builtin:NAME` for a built-in example (see
/// `weakhopf examples`).
#[derive(Parser)]
#[command(name = "weakhopf", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the weak Hopf axioms, counital subalgebras, integrals and dual.
    VerifyWha { file: String },
    /// Build the Jones tower of a Markov extension and run later stages.
    Tower {
        file: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Derive the weak Hopf structure, its actions and the smash
        /// product isomorphisms.
        #[arg(long)]
        derive: bool,
        /// Check the composite idempotents f_0, ..., f_N.
        #[arg(long, value_name = "N")]
        appendix_fn: Option<usize>,
        /// Largest allowed dimension of a tower level.
        #[arg(long, default_value_t = 256)]
        budget: usize,
    },
    /// Check kG, and optionally (kG)* and the integral spaces.
    Groupoid {
        file: String,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        integrals: bool,
    },
    /// Check separability of an algebra.
    Algebra { file: String },
    /// Run every built-in example.
    Report,
    /// List built-in examples, or print one as a spec file.
    Examples { name: Option<String> },
}

fn load(file: &str) -> Result<SpecFile, InputError> {
    if let Some(name) = file.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| InputError::Usage(format!("no built-in example {name:?}")));
    }
    let text = std::fs::read_to_string(PathBuf::from(file)).map_err(|e| InputError::Usage(format!("{file}: {e}")))?;
    SpecFile::parse(&text).map_err(|e| InputError::Usage(format!("{file}: {e}")))
}

fn run(cli: Cli) -> Result<Option<Outcome>, InputError> {
    let outcome = match cli.command {
        Command::VerifyWha { file } => pipeline::verify_wha(&load(&file)?)?,
        Command::Tower { file, depth, derive, appendix_fn, budget } => {
            pipeline::tower(&load(&file)?, TowerOptions { depth, derive, appendix_fn, budget })?
        }
        Command::Groupoid { file, dual, integrals } => pipeline::groupoid(&load(&file)?, dual, integrals)?,
        Command::Algebra { file } => pipeline::algebra(&load(&file)?)?,
        Command::Report => pipeline::full_report(),
        Command::Examples { name: None } => {
            println!("{}", builtin_names().join("\n"));
            return Ok(None);
        }
        Command::Examples { name: Some(name) } => {
            let spec = builtin(&name).ok_or_else(|| InputError::Usage(format!("no built-in example {name:?}")))?;
            print!("{}", spec.to_json());
            return Ok(None);
        }
    };
    Ok(Some(outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let code = match run(cli) {
        Ok(None) => EXIT_PASS,
        Ok(Some(out)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(render(&out, format).as_bytes());
            if out.all_passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}
