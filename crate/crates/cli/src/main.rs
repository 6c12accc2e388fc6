use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "treecover",
    version,
    about = "Path covers, L(2,1)-labelings of complements and island sequences"
)]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print the graph (with covering, labeling or marks) in DOT format.
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimum path covering of the input graph.
    Pcover {
        /// Edge list or graph6 file, or "-" for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Comma-separated clique orders, one per edge in edge-list order
        /// (theorem13 only).
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
    },
    /// λ and hole index of the input graph, or of its complement.
    Lambda {
        input: String,
        /// Treat the input as G and report on its complement.
        #[arg(long)]
        complement_of_input: bool,
    },
    /// Decide whether the complement of a tree has a unique island sequence.
    Duis { input: String },
    /// Island sequences of the complement of the input graph.
    Islands { input: String },
    /// Generate a graph.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Vertex count (prufer, and base tree size for expansion).
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Comma-separated arm lengths (spider).
        #[arg(long, value_delimiter = ',', default_value = "1,1,2")]
        arms: Vec<usize>,
        /// Attachment operations (family-f).
        #[arg(long, default_value_t = 3)]
        max_ops: usize,
        /// Vertex limit (family-f).
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
        /// Largest clique order (expansion).
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::EdgeList)]
        format: Format,
    },
    /// Run a verification suite against the brute-force oracles.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Auto,
    PtReduction,
    #[value(name = "theorem7")]
    LightNeighbor,
    #[value(name = "theorem12")]
    ThreeLight,
    #[value(name = "theorem13")]
    CliqueExpansion,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GenKind {
    Prufer,
    FamilyF,
    Expansion,
    Spider,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    EdgeList,
    Graph6,
}

/// Machine-readable record of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of the input bytes.
    pub input_digest: Option<String>,
    pub results: serde_json::Value,
    pub timing_ms: f64,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

pub struct Input {
    pub text: String,
    pub digest: String,
}

fn read_input(path: &str) -> Result<Input, String> {
    let mut bytes = Vec::new();
    if path == "-" {
        std::io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| format!("stdin: {e}"))?;
    } else {
        bytes = std::fs::read(path).map_err(|e| format!("{path}: {e}"))?;
    }
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| format!("{path}: not UTF-8"))?;
    Ok(Input { text, digest })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().collect();

    let input_path = match &cli.command {
        Command::Pcover { input, .. }
        | Command::Lambda { input, .. }
        | Command::Duis { input }
        | Command::Islands { input } => Some(input.clone()),
        _ => None,
    };
    let input = match input_path.as_deref().map(read_input).transpose() {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let outcome = match commands::run(&cli.command, input.as_ref().map(|i| i.text.as_str())) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::exit_code(&e));
        }
    };

    if cli.json {
        let report = RunReport {
            command: argv,
            input_digest: input.map(|i| i.digest),
            results: outcome.results,
            timing_ms: start.elapsed().as_secs_f64() * 1e3,
            verdicts: outcome.verdicts,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else if cli.dot {
        match outcome.dot {
            Some(dot) => print!("{dot}"),
            None => {
                eprintln!("error: this command has no DOT output");
                return ExitCode::from(2);
            }
        }
    } else {
        print!("{}", outcome.text);
    }
    ExitCode::from(outcome.exit)
}
