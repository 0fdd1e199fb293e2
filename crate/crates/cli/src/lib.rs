//! The `sleuth` command line. [`run`] parses arguments, runs one pipeline
//! and writes its report; it returns the process exit code.

mod commands;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "sleuth",
    version,
    about = "Culprit reasoning over scene-centric mystery knowledge graphs"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized steps.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every scene against the schema.
    Validate { graph: PathBuf },
    /// Match a basic graph pattern.
    Query {
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Motive, opportunity and means analysis.
    Mom {
        graph: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        /// Incident scene; defaults to the graph's `mom:incident`.
        #[arg(long)]
        incident: Option<String>,
    },
    /// Ground a scenario and solve it.
    Sat {
        spec: PathBuf,
        /// List every enumerated model.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 1000)]
        max_models: usize,
        /// Also maximize the satisfied soft weight.
        #[arg(long)]
        weighted: bool,
        /// Print the backbone literals.
        #[arg(long)]
        backbone: bool,
        /// Predicate whose first argument names the suspect.
        #[arg(long, default_value = "guilty")]
        verdict_pred: String,
    },
    /// Tucker completion of the subject-verb-object tensor.
    Tucker {
        graph: PathBuf,
        /// Ranks per mode; each is clipped to the mode size.
        #[arg(long, value_name = "R1,R2,R3", value_parser = parse_ranks, default_value = "6,8,8")]
        ranks: [usize; 3],
        #[arg(long, default_value_t = 100)]
        iters: usize,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
    },
    /// Agent discussion over murder hypotheses.
    Ibis {
        graph: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        incident: Option<String>,
        /// Write the IBIS structure as JSON.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Write the IBIS structure as a Graphviz digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Score traces and tables.
    Eval {
        /// Score table, metrics as rows and submissions as columns.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Population rather than sample standard deviation.
        #[arg(long)]
        population: bool,
        #[arg(long, num_args = 2, value_names = ["COLA", "COLB"], requires = "table")]
        paired_t: Option<Vec<String>>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// A structured report from another subcommand.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// The true culprit's IRI.
        #[arg(long, requires = "trace")]
        truth: Option<String>,
    },
}

fn parse_ranks(text: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| "expected three comma-separated ranks".to_string())
}

/// Everything a subcommand produces.
#[derive(Debug, Default)]
pub struct Report {
    pub pipeline: &'static str,
    pub conclusion: Vec<String>,
    pub scenes_used: BTreeSet<String>,
    pub steps: Value,
    pub diagnostics: Vec<String>,
    pub text: String,
    /// 1 when the run found a domain failure such as violations or UNSAT.
    pub status: u8,
}

impl Report {
    pub fn structured(&self) -> Value {
        json!({
            "pipeline": self.pipeline,
            "conclusion": self.conclusion,
            "scenes_used": self.scenes_used,
            "steps": self.steps,
            "diagnostics": self.diagnostics,
        })
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input; exit 2.
    Usage(String),
    /// A pipeline error; exit 1.
    Domain { code: &'static str, message: String },
}

impl Failure {
    pub fn domain(code: &'static str, message: impl ToString) -> Failure {
        Failure::Domain {
            code,
            message: message.to_string(),
        }
    }
}

pub(crate) fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Runs one command line. Exit codes: 0 success, 1 domain failure, 2
/// usage or input error.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    let report = match commands::dispatch(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
        Err(Failure::Domain { code, message }) => {
            eprintln!("{code}: {message}");
            return 1;
        }
    };
    let body = match cli.common.format {
        Format::Text => report.text.clone(),
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&report.structured()).expect("reports serialize");
            s.push('\n');
            s
        }
    };
    let written = match &cli.common.out {
        Some(path) => fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    report.status
}
