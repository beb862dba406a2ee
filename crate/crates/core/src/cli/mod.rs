//! Batch front end: problem files in, reports out.

pub mod commands;
pub mod problem;

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
pub use problem::{IdealInput, ProblemFile};

pub const REPORT_SCHEMA: &str = "toriclc-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Analyze,
    Sectors,
    Lc,
    Grd,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Sectors => "sectors",
            Command::Lc => "lc",
            Command::Grd => "grd",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analyze" => Ok(Command::Analyze),
            "sectors" => Ok(Command::Sectors),
            "lc" => Ok(Command::Lc),
            "grd" => Ok(Command::Grd),
            _ => Err(Error::Parse {
                line: 0,
                message: format!("unknown command `{s}`"),
            }),
        }
    }
}

/// Command-line overrides of the problem file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Options {
    pub ideal: Option<IdealInput>,
    pub socle: Vec<i64>,
    pub search_bound: Option<u64>,
    pub box_radius: Option<i64>,
    pub samples_per_class: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub document: Value,
    pub human: String,
}

impl Report {
    /// The machine report; identical inputs give identical bytes.
    pub fn machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("report serializes");
        s.push('\n');
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.human)
    }
}

/// Runs a command on a parsed problem.
pub fn execute(command: Command, problem: &ProblemFile, options: &Options) -> Result<Report> {
    let mut problem = problem.clone();
    if options.ideal.is_some() {
        problem.ideal = options.ideal.clone();
    }
    if options.search_bound.is_some() {
        problem.search_bound = options.search_bound;
    }
    if options.box_radius.is_some() {
        problem.box_radius = options.box_radius;
    }
    if options.samples_per_class.is_some() {
        problem.samples_per_class = options.samples_per_class;
    }
    let ctx = commands::Context::new(&problem, options.socle.iter().copied().max().unwrap_or(0))?;
    let (body, human) = match command {
        Command::Analyze => commands::analyze(&ctx)?,
        Command::Sectors => commands::sectors(&ctx)?,
        Command::Lc => commands::lc(&ctx, &options.socle)?,
        Command::Grd => commands::grd(&ctx)?,
    };
    let document = json!({
        "schema": REPORT_SCHEMA,
        "command": command.name(),
        "input": ctx.input_echo(),
        "result": body,
    });
    Ok(Report {
        command,
        document,
        human,
    })
}

/// Parses `text` and runs `command`.
pub fn run_text(command: Command, text: &str, options: &Options) -> Result<Report> {
    execute(command, &ProblemFile::parse(text)?, options)
}

#[derive(Debug, Parser)]
#[command(name = "toriclc", version, about = "Sector partitions, local cohomology and gr D_A data for affine semigroup rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Facets, face lattice and classification flags.
    Analyze(CommonArgs),
    /// Equivalence classes, sectors and the class poset.
    Sectors(CommonArgs),
    /// Local cohomology modules, composition series and socle probes.
    Lc(CommonArgs),
    /// Exponent counts, fiber lemma checks and gr D_A certificates.
    Grd(CommonArgs),
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Problem file.
    pub file: PathBuf,
    /// Ideal generator degrees, rows separated by `;` (e.g. "1,0,0;1,1,0").
    #[arg(long, conflicts_with = "maximal")]
    pub ideal: Option<String>,
    /// Use the maximal graded ideal.
    #[arg(long)]
    pub maximal: bool,
    /// Socle probe radii, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub socle: Vec<i64>,
    /// Depth bound of the membership search.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Initial radius of the class enumeration box.
    #[arg(long = "box")]
    pub box_radius: Option<i64>,
    /// Degrees sampled per class when assembling modules.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

impl CliCommand {
    fn split(&self) -> (Command, &CommonArgs) {
        match self {
            CliCommand::Analyze(a) => (Command::Analyze, a),
            CliCommand::Sectors(a) => (Command::Sectors, a),
            CliCommand::Lc(a) => (Command::Lc, a),
            CliCommand::Grd(a) => (Command::Grd, a),
        }
    }
}

impl CommonArgs {
    pub fn options(&self) -> Result<Options> {
        let ideal = if self.maximal {
            Some(IdealInput::Maximal)
        } else if let Some(text) = &self.ideal {
            Some(IdealInput::Generators(problem::parse_rows(text, 0)?))
        } else {
            None
        };
        Ok(Options {
            ideal,
            socle: self.socle.clone(),
            search_bound: self.bound,
            box_radius: self.box_radius,
            samples_per_class: self.samples,
        })
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let (command, args) = cli.command.split();
    let started = Instant::now();
    let outcome = args.options().and_then(|opts| {
        let text = std::fs::read_to_string(&args.file)
            .map_err(|e| Error::Io(format!("{}: {e}", args.file.display())))?;
        run_text(command, &text, &opts)
    });
    let report = match outcome {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let out = match args.format {
        Format::Machine => report.machine(),
        Format::Human => format!(
            "{}elapsed: {:.1} ms\n",
            report.human,
            started.elapsed().as_secs_f64() * 1e3
        ),
    };
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{out}"),
    }
    0
}
