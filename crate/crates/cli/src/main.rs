//! `polymeta`: batch front end for the polymeta library.
//!
//! Decision commands print `YES` or `NO` on the first line of stdout and exit
//! with 0. Input errors exit with 2 after a one-line `file:line: message` on
//! stderr; other failures (such as an exceeded size bound) exit with 1.

mod commands;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polymeta::Limits;

#[derive(Parser)]
#[command(name = "polymeta", version, about = "Polymorphism metaproblems for finite relational structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Print the witness as JSON after the answer line.
    #[arg(long)]
    witness: bool,
    /// Print one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Does the structure have a coset-generating (group heap) polymorphism?
    CheckCoset {
        structure: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Do polymorphisms of the structure satisfy the linear identities?
    CheckPoly {
        structure: PathBuf,
        identities: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Separate abelian heap polymorphisms (YES) from no Maltsev polymorphism (NO).
    PmetaAbheap {
        structure: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Decide the affine integer relaxation of instance → template.
    Aip {
        instance: PathBuf,
        template: PathBuf,
        /// Also print the full linear system, one equation per line.
        #[arg(long)]
        system: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide instance → template exactly.
    Solve {
        instance: PathBuf,
        template: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run one of the hardness reductions and print the produced instance.
    Reduce {
        #[arg(value_enum)]
        reduction: Reduction,
        input: PathBuf,
    },
    /// Split a graph's edges into a matching and a bipartite graph.
    Decompose {
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Build a group and print its table, coset graph or subgroups.
    Group {
        #[arg(value_enum)]
        family: Family,
        params: Vec<usize>,
        #[arg(long, conflicts_with = "subgroups")]
        coset_graph: bool,
        /// Print the subgroups of this order.
        #[arg(long, value_name = "M")]
        subgroups: Option<usize>,
    },
    /// Run the acceptance suite; exits 0 iff every check passes.
    Selftest,
}

#[derive(ValueEnum, Clone, Copy)]
enum Reduction {
    /// NAE-3SAT instance → graph.
    Nae2graph,
    /// Graph → structure on a dihedral-sized domain.
    Graph2meta,
}

#[derive(ValueEnum, Clone, Copy)]
enum Family {
    /// `cyclic N`
    Cyclic,
    /// `dihedral ORDER`
    Dihedral,
    /// `dicyclic P`: C_p ⋊ C_4 with inversion.
    Dicyclic,
    /// `cp-c4 P`: C_p ⋊ C_4 with a faithful action, p ≡ 1 mod 4.
    CpC4,
    /// `klein-cp P`: C_2 × C_2 × C_p.
    KleinCp,
    /// `enumerated N I`: the I-th group of order N found by enumeration.
    Enumerated,
}

/// Failure of a command, already classified for the exit code.
#[derive(Debug)]
pub enum Failure {
    Input { file: PathBuf, line: Option<usize>, message: String },
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn input(file: &Path, error: polymeta::Error) -> Self {
        match error {
            polymeta::Error::Parse { line, message } => Failure::Input { file: file.into(), line: Some(line), message },
            other => Failure::Input { file: file.into(), line: None, message: other.to_string() },
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Input { .. } | Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input { file, line: Some(line), message } => write!(f, "{}:{line}: {message}", file.display()),
            Failure::Input { file, line: None, message } => write!(f, "{}: {message}", file.display()),
            Failure::Usage(message) => write!(f, "usage: {message}"),
            Failure::Runtime(message) => write!(f, "error: {message}"),
        }
    }
}

impl From<polymeta::Error> for Failure {
    fn from(e: polymeta::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let limits = Limits::from_env().map_err(|e| Failure::input(Path::new(Limits::ENV_VAR), e))?;
    use commands::*;
    match cli.command {
        Command::CheckCoset { structure, output } => check_coset(&structure, output, &limits),
        Command::CheckPoly { structure, identities, output } => check_poly(&structure, &identities, output, &limits),
        Command::PmetaAbheap { structure, output } => pmeta_abheap(&structure, output),
        Command::Aip { instance, template, system, json } => aip(&instance, &template, system, json),
        Command::Solve { instance, template, output } => solve(&instance, &template, output),
        Command::Reduce { reduction: Reduction::Nae2graph, input } => nae2graph(&input),
        Command::Reduce { reduction: Reduction::Graph2meta, input } => graph2meta(&input),
        Command::Decompose { graph, output } => decompose(&graph, output, &limits),
        Command::Group { family, params, coset_graph, subgroups } => {
            group(family, &params, coset_graph, subgroups, &limits)
        }
        Command::Selftest => Ok(selftest()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.code())
        }
    }
}
