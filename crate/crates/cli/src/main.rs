//! `ilbench`: the workbench from the command line.
//!
//! Every command prints one JSON value (`--format json`) or a plain
//! rendering of it, and exits with
//!
//! * 0 — theorem, or the checked property holds;
//! * 10 — non-theorem, or the checked property fails;
//! * 20 — unknown within the given budget;
//! * 64 — usage error;
//! * 66 — an input file is missing or malformed.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ilbench_core::decide::Mode;
use ilbench_core::kernel::FrameClass;
use std::path::PathBuf;
use std::process::ExitCode;

pub const HOLDS: u8 = 0;
pub const FAILS: u8 = 10;
pub const UNKNOWN: u8 = 20;
pub const USAGE: u8 = 64;
pub const NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "ilbench", version, about = "Interpretability logics between IL⁻ and IL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel searches (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Veltman,
    Gen,
}

impl From<ClassArg> for FrameClass {
    fn from(c: ClassArg) -> FrameClass {
        match c {
            ClassArg::Veltman => FrameClass::Veltman,
            ClassArg::Gen => FrameClass::Generalized,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    J2plus,
    J4plus,
}

#[derive(Args)]
pub struct LogicFormula {
    /// A registered logic, e.g. `IL-`, `IL-(J1,J5)`, `CL`, `IL`.
    #[arg(long)]
    pub logic: String,
    #[arg(long)]
    pub formula: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and show its structure.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Check a proof file; the logic defaults to the file's `// logic:` line.
    CheckProof {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long)]
        logic: Option<String>,
    },
    /// Evaluate a formula in a model, at one world or everywhere.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        world: Option<String>,
        /// Frame format of the file (default: detected).
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Check validity of a formula on a frame under all valuations.
    Valid {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Check the frame conditions of the principles, or of a logic.
    FrameCheck {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        logic: Option<String>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Compare a principle's frame condition with validity of its
    /// characteristic instance, on a frame or on random frames.
    Correspond {
        /// Frame file; without one, `--samples` random frames are audited.
        #[arg(long)]
        frame: Option<PathBuf>,
        /// Principle (J1, J2, J2+, J4, J4+, J5); default: all six.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest random frame.
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
    },
    /// Search for a small countermodel.
    Refute {
        #[command(flatten)]
        target: LogicFormula,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        /// Frames to search (default: the class the logic is complete for).
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Decide a formula: `practical:<n>` searches up to n worlds, `exact`
    /// runs the finite-model procedure.
    Decide {
        #[command(flatten)]
        target: LogicFormula,
        #[arg(long, default_value = "practical:4")]
        mode: Mode,
    },
    /// Build and audit the canonical countermodel over the formula's
    /// adequate closure.
    Canonical {
        #[command(flatten)]
        target: LogicFormula,
    },
    /// Check every derivation of the built-in library, or the proof files
    /// in a directory.
    LibraryVerify {
        #[arg(long)]
        proof: Option<PathBuf>,
    },
    /// Re-run one of the separating examples.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
        /// Use this model file instead of the shipped one.
        #[arg(long)]
        frame: Option<PathBuf>,
    },
}

/// What a command produced: a JSON report and an exit code.
pub struct Report {
    pub value: serde_json::Value,
    pub code: u8,
}

impl Report {
    pub fn new(value: serde_json::Value, code: u8) -> Report {
        Report { value, code }
    }
}

/// Why a command could not run.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    File(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => USAGE,
            Failure::File(_) => NO_INPUT,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::File(m) => m,
        }
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    use commands::*;
    match cli.command {
        Command::Parse { formula } => parse(&formula),
        Command::CheckProof { proof, logic } => check_proof(&proof, logic.as_deref()),
        Command::Eval { model, formula, world, class } => eval(&model, &formula, world.as_deref(), class),
        Command::Valid { frame, formula, class } => valid(&frame, &formula, class),
        Command::FrameCheck { frame, logic, class } => frame_check(&frame, logic.as_deref(), class),
        Command::Correspond { frame: Some(frame), scheme, class, .. } => correspond(&frame, scheme.as_deref(), class),
        Command::Correspond { frame: None, scheme, class, samples, seed, max_worlds } => {
            correspond_random(scheme.as_deref(), class, samples, seed, max_worlds)
        }
        Command::Refute { target, max_worlds, class } => refute(&target, max_worlds, class),
        Command::Decide { target, mode } => decide(&target, mode),
        Command::Canonical { target } => canonical(&target),
        Command::LibraryVerify { proof } => library_verify(proof.as_deref()),
        Command::Reproduce { example, frame } => reproduce(example, frame.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { HOLDS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            output::print(&report.value, format);
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
