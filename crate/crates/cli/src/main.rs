use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use semikernel::error::Budget;
use semikernel_cli::doc::Side;
use semikernel_cli::{parse, run, Command, Document, Options};

#[derive(Parser)]
#[command(name = "semik", version, about = "Checks semirings, semimodules, semicorings and semicomodules")]
struct Cli {
    /// Node budget for saturations and enumerations.
    #[arg(long, global = true, env = "SEMIK_BUDGET", default_value_t = Budget::DEFAULT.0)]
    budget: usize,
    /// Document whose table modules form the test family for `rational`.
    #[arg(long, global = true)]
    family: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Jsonl,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the axioms of the named declarations (all of them by default).
    Validate { file: PathBuf, names: Vec<String> },
    /// Tensor two declared modules.
    Tensor { file: PathBuf, left: String, right: String },
    /// Convolution semiring of a declared coring.
    Dual {
        file: PathBuf,
        coring: String,
        #[arg(long, default_value = "left")]
        side: Side,
    },
    /// Coideal test for the subsemimodule generated by the given elements.
    Coideal { file: PathBuf, coring: String, elements: Vec<String> },
    /// Rational part of a module (or of a comodule's induced module) over a pairing.
    Rational { file: PathBuf, pairing: String, module: String },
    /// Exactness of 0 → L̄ → M → M/L → 0 for every L ≤ M.
    Exact { file: PathBuf, module: String },
    /// Built-in corings and the mutation corpus.
    Gallery,
    /// Run the commands listed in a document.
    Report { file: PathBuf },
}

fn load(path: &Path) -> Result<Document, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("semik: {msg}");
            ExitCode::from(3)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, String> {
    let mut opts = Options { budget: Budget(cli.budget), family: Vec::new() };
    if let Some(f) = &cli.family {
        opts.family = load(f)?.table_modules();
    }
    let (doc, commands) = match &cli.verb {
        Verb::Gallery => (Document::default(), vec![Command::Gallery]),
        Verb::Validate { file, names } => {
            let doc = load(file)?;
            let names: Vec<String> = if names.is_empty() { doc.names().map(str::to_string).collect() } else { names.clone() };
            (doc, names.into_iter().map(Command::Validate).collect())
        }
        Verb::Tensor { file, left, right } => (load(file)?, vec![Command::Tensor(left.clone(), right.clone())]),
        Verb::Dual { file, coring, side } => (load(file)?, vec![Command::Dual { coring: coring.clone(), side: *side }]),
        Verb::Coideal { file, coring, elements } => {
            (load(file)?, vec![Command::Coideal { coring: coring.clone(), elements: elements.clone() }])
        }
        Verb::Rational { file, pairing, module } => {
            (load(file)?, vec![Command::Rational { pairing: pairing.clone(), module: module.clone() }])
        }
        Verb::Exact { file, module } => (load(file)?, vec![Command::Exact { module: module.clone() }]),
        Verb::Report { file } => {
            let doc = load(file)?;
            let cmds = doc.commands.clone();
            (doc, cmds)
        }
    };
    let report = run(&doc, &commands, &opts);
    match cli.format {
        Format::Md => print!("{}", report.to_markdown()),
        Format::Jsonl => print!("{}", report.to_jsonl()),
    }
    Ok(report.exit_code() as u8)
}
