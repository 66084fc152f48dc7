//! Command-line front end: `solve`, `propagate`, `unfounded`, `check` and
//! `encode-3sat`.
//!
//! Exit status is 0 on a positive answer, 1 on a negative one (no model,
//! conflict, not a model) and 2 on any error.

mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Result;
use crate::kb::{AtomSet, KnowledgeBase, Partition};
use crate::propagation::{propagate, PropagationConflict, PropagationResult};
use crate::reduction::{encode_3sat_disjunctive, encode_3sat_normal, parse_dimacs};
use crate::solver::{brute_force_models, check_model, solve, SolveStats};
use crate::unfounded::{greatest_unfounded_set, unfounded_approx};

pub use parse::{parse_kb, serialize_kb, KbDocument, Location, ParseError};

#[derive(Debug, Parser)]
#[command(
    name = "hmknf",
    version,
    about = "Reasoning over ground disjunctive hybrid MKNF knowledge bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Assumptions {
    /// Atoms assumed true (comma separated).
    #[arg(long = "true", value_delimiter = ',', value_name = "ATOMS")]
    t: Vec<String>,
    /// Atoms assumed false (comma separated).
    #[arg(long = "false", value_delimiter = ',', value_name = "ATOMS")]
    f: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for MKNF models.
    Solve {
        file: PathBuf,
        /// Report every model instead of the first one.
        #[arg(long)]
        all: bool,
        /// Enumerate and check every total partition instead of searching.
        #[arg(long)]
        brute_force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Extend a partition to the fixpoint of the well-founded operator.
    Propagate {
        file: PathBuf,
        #[command(flatten)]
        assume: Assumptions,
        #[arg(long)]
        json: bool,
    },
    /// Report unfounded atoms w.r.t. a partition.
    Unfounded {
        file: PathBuf,
        #[command(flatten)]
        assume: Assumptions,
        /// Compute the greatest unfounded set by head-cut enumeration.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check whether a total partition is induced by an MKNF model. Without
    /// `--false`, every atom not listed in `--true` is taken to be false.
    Check {
        file: PathBuf,
        #[command(flatten)]
        assume: Assumptions,
        #[arg(long)]
        json: bool,
    },
    /// Encode a DIMACS CNF formula as a knowledge base.
    #[command(name = "encode-3sat")]
    Encode3Sat {
        file: PathBuf,
        /// Use disjunctive facts instead of pairs of normal rules.
        #[arg(long)]
        disjunctive: bool,
    },
}

#[derive(Serialize)]
struct JsonPartition {
    #[serde(rename = "true")]
    t: Vec<String>,
    #[serde(rename = "false")]
    f: Vec<String>,
}

impl JsonPartition {
    fn new(kb: &KnowledgeBase, p: &Partition) -> Self {
        JsonPartition {
            t: kb.names(p.t()),
            f: kb.names(p.f()),
        }
    }
}

#[derive(Serialize)]
struct JsonStats {
    decisions: u64,
    conflicts: u64,
    checks: u64,
}

#[derive(Serialize)]
struct JsonConflict {
    kind: &'static str,
    atoms: Vec<String>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum JsonOutput {
    Solve {
        status: &'static str,
        models: Vec<JsonPartition>,
        stats: JsonStats,
    },
    Propagated {
        status: &'static str,
        partition: JsonPartition,
    },
    Conflict {
        status: &'static str,
        conflict: JsonConflict,
    },
    Unfounded {
        status: &'static str,
        set: Vec<String>,
        exact: bool,
        dependable: bool,
    },
    Check {
        status: &'static str,
        result: bool,
    },
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load(path: &Path) -> Result<KnowledgeBase> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_kb(&text)?.into_kb())
}

fn assumed(kb: &KnowledgeBase, a: &Assumptions) -> Result<Partition> {
    kb.partition(
        a.t.iter().map(String::as_str),
        a.f.iter().map(String::as_str),
    )
}

fn emit_json(out: &mut dyn Write, value: &JsonOutput) -> Result<()> {
    let text = serde_json::to_string(value).expect("output types always serialize");
    writeln!(out, "{text}")?;
    Ok(())
}

fn list(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve {
            file,
            all,
            brute_force,
            json,
        } => {
            let kb = load(&file)?;
            let (models, stats) = if brute_force {
                let mut models = brute_force_models(&kb)?;
                let checks = 1u64 << kb.ka().len();
                if !all {
                    models.truncate(1);
                }
                let stats = SolveStats {
                    checks,
                    ..SolveStats::default()
                };
                (models, stats)
            } else {
                let outcome = solve(&kb, &Partition::empty(), all)?;
                (outcome.models, outcome.stats)
            };
            let found = !models.is_empty();
            if json {
                emit_json(
                    out,
                    &JsonOutput::Solve {
                        status: if found { "model" } else { "no_model" },
                        models: models.iter().map(|m| JsonPartition::new(&kb, m)).collect(),
                        stats: JsonStats {
                            decisions: stats.decisions,
                            conflicts: stats.conflicts,
                            checks: stats.checks,
                        },
                    },
                )?;
            } else {
                if !found {
                    writeln!(out, "no model")?;
                }
                for (i, m) in models.iter().enumerate() {
                    writeln!(out, "model {}", i + 1)?;
                    writeln!(out, "  true:  {}", list(&kb.names(m.t())))?;
                    writeln!(out, "  false: {}", list(&kb.names(m.f())))?;
                }
                writeln!(
                    out,
                    "decisions: {}, conflicts: {}, checks: {}",
                    stats.decisions, stats.conflicts, stats.checks
                )?;
            }
            Ok(if found { 0 } else { 1 })
        }
        Command::Propagate { file, assume, json } => {
            let kb = load(&file)?;
            let p = assumed(&kb, &assume)?;
            match propagate(&kb, &p) {
                PropagationResult::Propagated(q) => {
                    if json {
                        emit_json(
                            out,
                            &JsonOutput::Propagated {
                                status: "propagated",
                                partition: JsonPartition::new(&kb, &q),
                            },
                        )?;
                    } else {
                        writeln!(out, "true:  {}", list(&kb.names(q.t())))?;
                        writeln!(out, "false: {}", list(&kb.names(q.f())))?;
                    }
                    Ok(0)
                }
                PropagationResult::Conflict(c) => {
                    let (kind, atoms) = match c {
                        PropagationConflict::Overlap(atoms) => ("overlap", kb.names(&atoms)),
                        PropagationConflict::NotDependable(b) => {
                            ("not_dependable", vec![kb.name(b).to_string()])
                        }
                        PropagationConflict::Inconsistent => ("inconsistent", Vec::new()),
                    };
                    if json {
                        emit_json(
                            out,
                            &JsonOutput::Conflict {
                                status: "conflict",
                                conflict: JsonConflict { kind, atoms },
                            },
                        )?;
                    } else {
                        match kind {
                            "overlap" => writeln!(
                                out,
                                "conflict: derived both true and false: {}",
                                list(&atoms)
                            )?,
                            "not_dependable" => writeln!(
                                out,
                                "conflict: false atom entailed by the true atoms: {}",
                                atoms[0]
                            )?,
                            _ => writeln!(
                                out,
                                "conflict: true atoms are inconsistent with the ontology"
                            )?,
                        }
                    }
                    Ok(1)
                }
            }
        }
        Command::Unfounded {
            file,
            assume,
            exact,
            json,
        } => {
            let kb = load(&file)?;
            let p = assumed(&kb, &assume)?;
            let report = if exact {
                greatest_unfounded_set(&kb, &p)?
            } else {
                unfounded_approx(&kb, &p)
            };
            let set = kb.names(&report.set);
            if json {
                emit_json(
                    out,
                    &JsonOutput::Unfounded {
                        status: "unfounded_set",
                        set,
                        exact: report.exact,
                        dependable: report.dependable,
                    },
                )?;
            } else {
                let kind = if report.exact {
                    "greatest"
                } else {
                    "approximate"
                };
                writeln!(out, "unfounded set ({kind}): {}", list(&set))?;
                if !report.dependable {
                    writeln!(out, "note: the partition is not dependable")?;
                }
            }
            Ok(0)
        }
        Command::Check { file, assume, json } => {
            let kb = load(&file)?;
            let p = total(&kb, assumed(&kb, &assume)?);
            let result = check_model(&kb, &p)?;
            if json {
                emit_json(
                    out,
                    &JsonOutput::Check {
                        status: "check",
                        result,
                    },
                )?;
            } else {
                writeln!(out, "{}", if result { "model" } else { "not a model" })?;
            }
            Ok(if result { 0 } else { 1 })
        }
        Command::Encode3Sat { file, disjunctive } => {
            let text = std::fs::read_to_string(&file)?;
            let cnf = parse_dimacs(&text)?;
            let kb = if disjunctive {
                encode_3sat_disjunctive(&cnf)
            } else {
                encode_3sat_normal(&cnf)
            };
            write!(out, "{}", serialize_kb(&kb))?;
            Ok(0)
        }
    }
}

/// Completes a partition given only by its true atoms: when `--false` is
/// omitted, every other atom of `KA(K)` is false.
fn total(kb: &KnowledgeBase, p: Partition) -> Partition {
    if !p.f().is_empty() {
        return p;
    }
    let (t, _) = p.into_parts();
    let f: AtomSet = kb.ka().difference(&t);
    Partition::new(t, f).expect("complement is disjoint")
}
