//! `alog` subcommands. [`run`] does all the work and hands back the text
//! for both streams and the exit code, so the binary is a thin wrapper and
//! the commands can be tested in-process.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::asolver::Asolver;
use crate::corpus;
use crate::error::Error;
use crate::grounder::{ground_program, GroundProgram};
use crate::model::LiteralSet;
use crate::parser::parse_program;
use crate::semantics::{enumerate_answer_sets_oracle, DEFAULT_ORACLE_CAP};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_CORPUS_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "alog", version, about = "Answer sets of logic programs with aggregates")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the grounding, one rule per line.
    Ground { file: PathBuf },
    /// Print answer sets.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Solver)]
        mode: Mode,
        /// Print every answer set (the default).
        #[arg(long, conflicts_with = "n")]
        all: bool,
        /// Stop after K answer sets.
        #[arg(long, value_name = "K")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Largest number of candidate atoms the oracle accepts.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
    /// Check the regression corpus.
    Corpus {
        /// Directory of .alog files to use instead of the bundled corpus.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, value_name = "N", default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Oracle,
    Solver,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    /// `None` means all.
    pub max_models: Option<usize>,
    pub oracle_cap: usize,
    pub output: Format,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            mode: Mode::Solver,
            max_models: None,
            oracle_cap: DEFAULT_ORACLE_CAP,
            output: Format::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Outcome {
        Outcome {
            stderr: format!("error: {msg}\n"),
            code: EXIT_INPUT,
            ..Outcome::default()
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stderr: text,
                    code: EXIT_INPUT,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    stdout: text,
                    ..Outcome::default()
                }
            };
        }
    };
    match args.command {
        Command::Ground { file } => cmd_ground(&file),
        Command::Solve {
            file,
            mode,
            all: _,
            n,
            format,
            oracle_cap,
        } => {
            let cfg = RunConfig {
                mode,
                max_models: n,
                oracle_cap,
                output: format,
            };
            cmd_solve(&file, &cfg)
        }
        Command::Corpus { dir, oracle_cap } => cmd_corpus(dir.as_deref(), oracle_cap),
    }
}

fn load(file: &Path) -> Result<GroundProgram, String> {
    let src = fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let p = parse_program(&src).map_err(|e| format!("{}:{e}", file.display()))?;
    ground_program(&p).map_err(|e| format!("{}: {e}", file.display()))
}

pub fn cmd_ground(file: &Path) -> Outcome {
    match load(file) {
        Ok(gp) => Outcome {
            stdout: gp.to_string(),
            ..Outcome::default()
        },
        Err(e) => Outcome::input_error(e),
    }
}

fn answer_sets(gp: &GroundProgram, cfg: &RunConfig) -> Result<Result<Vec<LiteralSet>, String>, Error> {
    let limit = cfg.max_models;
    Ok(match cfg.mode {
        Mode::Oracle => Ok(enumerate_answer_sets_oracle(gp, cfg.oracle_cap)?),
        Mode::Solver => Ok(Asolver::new(gp)?.enumerate(limit)?),
        Mode::Both => {
            let oracle = enumerate_answer_sets_oracle(gp, cfg.oracle_cap)?;
            let solver = Asolver::new(gp)?.enumerate(None)?;
            if oracle == solver {
                Ok(oracle)
            } else {
                Err(format!(
                    "oracle and solver disagree\noracle: {}\nsolver: {}",
                    join(&oracle),
                    join(&solver)
                ))
            }
        }
    })
}

fn join(sets: &[LiteralSet]) -> String {
    sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn cmd_solve(file: &Path, cfg: &RunConfig) -> Outcome {
    let gp = match load(file) {
        Ok(gp) => gp,
        Err(e) => return Outcome::input_error(e),
    };
    let mut sets = match answer_sets(&gp, cfg) {
        Err(e) => return Outcome::input_error(format!("{}: {e}", file.display())),
        Ok(Err(mismatch)) => {
            return Outcome {
                stderr: format!("error: {mismatch}\n"),
                code: EXIT_MISMATCH,
                ..Outcome::default()
            }
        }
        Ok(Ok(sets)) => sets,
    };
    if let Some(k) = cfg.max_models {
        sets.truncate(k);
    }
    let mut stdout = String::new();
    for s in &sets {
        match cfg.output {
            Format::Text => stdout.push_str(&s.to_string()),
            Format::Jsonl => {
                let lits: Vec<String> = s.iter().map(ToString::to_string).collect();
                stdout.push_str(&serde_json::json!({ "answer_set": lits }).to_string());
            }
        }
        stdout.push('\n');
    }
    Outcome {
        stdout,
        stderr: String::new(),
        code: if sets.is_empty() { EXIT_UNSAT } else { EXIT_SAT },
    }
}

pub fn cmd_corpus(dir: Option<&Path>, oracle_cap: usize) -> Outcome {
    let entries = match dir {
        None => corpus::bundled(),
        Some(d) => match corpus::load_dir(d) {
            Ok(e) => e,
            Err(e) => return Outcome::input_error(format!("{}: {e}", d.display())),
        },
    };
    if entries.is_empty() {
        return Outcome::input_error("corpus is empty");
    }
    let mut stdout = String::new();
    let mut failures = 0;
    for e in &entries {
        let r = corpus::run_entry(e, oracle_cap);
        if !r.passed() {
            failures += 1;
        }
        stdout.push_str(&format!("{r}\n"));
    }
    stdout.push_str(&format!("{} passed, {failures} failed\n", entries.len() - failures));
    Outcome {
        stdout,
        stderr: String::new(),
        code: if failures == 0 { 0 } else { EXIT_CORPUS_FAILURE },
    }
}
