//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails or a published value
//! in `corpus` is not reproduced, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::axioms::{self, Axiom, CheckConfig, SearchBudget, TrialBudget};
use crate::corpus::{self, CaseName};
use crate::error::{Error, Result};
use crate::ialpha::{self, SolverConfig};
use crate::measures::{intersection, MeasureConfig, MeasureKind};
use crate::pid::{decompose2, pi_diagram_report};
use crate::prob::{
    entropy, mutual_information, read_table, write_table, JointTable, VarSet,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "PIDKIT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "pidkit", version, about = "Intersection information and partial information decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropies and mutual informations of a table.
    Info {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// One intersection measure, in bits.
    Measure {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        kind: MeasureKind,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write per-restart solver diagnostics here (ialpha only).
        #[arg(long, value_name = "PATH")]
        diagnostics: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Two-predictor decomposition.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        kind: MeasureKind,
        #[command(flatten)]
        solver: SolverArgs,
        /// Print only the JSON object.
        #[arg(long)]
        json: bool,
    },
    /// Check axioms on a table.
    Axioms {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        kind: MeasureKind,
        /// Check only this axiom (S0, M0, SR, M1, LP, TM).
        #[arg(long)]
        axiom: Option<Axiom>,
        /// Auxiliary-variable trials for M0, M1 and TM.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[command(flatten)]
        solver: SolverArgs,
        /// JSON lines, one verdict per line.
        #[arg(long)]
        json: bool,
    },
    /// Check the built-in examples against their expected values.
    Corpus {
        #[arg(long)]
        case: Option<CaseName>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
    /// Look for axiom violations on random tables.
    Search {
        #[arg(long)]
        kind: MeasureKind,
        #[arg(long)]
        axiom: Axiom,
        /// Number of random tables.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        /// Alphabet sizes, predictors first and the target last.
        #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
        shape: Vec<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        /// JSON lines, one counterexample per line.
        #[arg(long)]
        json: bool,
    },
    /// Write a built-in example as a distribution file.
    Export {
        #[arg(long)]
        case: CaseName,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Distribution file (JSON).
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Built-in example (unq, rdnxor, and, imperfectrdn, subtle).
    #[arg(long)]
    case: Option<CaseName>,
}

impl Input {
    fn load(&self) -> Result<JointTable> {
        match (&self.file, self.case) {
            (Some(path), _) => read_table(path),
            (None, Some(case)) => Ok(corpus::build(case).table),
            (None, None) => unreachable!("clap requires one input"),
        }
    }
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Number of Q states (default |Y|+1).
    #[arg(long)]
    q_arity: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self) -> MeasureConfig {
        let mut solver = SolverConfig::default().with_seed(self.seed);
        solver.q_arity = self.q_arity;
        if let Some(r) = self.restarts {
            solver.restarts = r;
        }
        MeasureConfig::with_solver(solver)
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, S>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut buffer = Vec::new();
    let result = match &pool {
        Some(pool) => pool.install(|| execute(cli.command, &mut buffer)),
        None => execute(cli.command, &mut buffer),
    };
    let _ = out.write_all(&buffer);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn thread_pool() -> std::result::Result<Option<rayon::ThreadPool>, String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| e.to_string())
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e)
}

fn json_line(out: &mut impl Write, value: &impl serde::Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?).map_err(io)
}

fn execute(command: Command, out: &mut impl Write) -> Result<i32> {
    match command {
        Command::Info { input, json } => info(&input.load()?, json, out)?,
        Command::Measure {
            input,
            kind,
            solver,
            diagnostics,
            json,
        } => {
            let table = input.load()?;
            let preds = table.default_predictors();
            let config = solver.config();
            let bits = if kind == MeasureKind::Ialpha && preds.len() > 1 {
                let result = ialpha::ialpha(&table, &preds, &config.solver)?;
                if let Some(path) = &diagnostics {
                    write_json(path, &result.diagnostics())?;
                }
                result.value
            } else {
                intersection(&table, &preds, kind, &config)?
            };
            if json {
                json_line(out, &serde_json::json!({ "measure": kind, "bits": bits }))?;
            } else {
                writeln!(out, "{bits:.6} bits").map_err(io)?;
            }
        }
        Command::Decompose {
            input,
            kind,
            solver,
            json,
        } => {
            let table = input.load()?;
            let d = decompose2(&table, &table.default_predictors(), kind, &solver.config())?;
            let report = pi_diagram_report(&d);
            if !json {
                write!(out, "{report}").map_err(io)?;
            }
            json_line(out, &report.to_json())?;
        }
        Command::Axioms {
            input,
            kind,
            axiom,
            budget,
            solver,
            json,
        } => {
            let table = input.load()?;
            let preds = table.default_predictors();
            let mut config = CheckConfig {
                measure: solver.config(),
                ..CheckConfig::default()
            };
            if let Some(r) = solver.restarts {
                config.screening_restarts = r;
            }
            let trials = TrialBudget {
                trials: budget,
                seed: solver.seed,
            };
            let selected = match axiom {
                Some(a) => vec![a],
                None => axioms::applicable(preds.len()),
            };
            for a in selected {
                let v = axioms::check(a, &table, &preds, kind, trials, &config)?;
                if json {
                    writeln!(out, "{}", v.to_json_line()).map_err(io)?;
                } else {
                    writeln!(out, "{v}").map_err(io)?;
                }
            }
        }
        Command::Corpus { case, solver, json } => {
            let report = corpus::verify_all(&solver.config(), case)?;
            if json {
                for e in &report.entries {
                    json_line(out, e)?;
                }
            } else {
                write!(out, "{report}").map_err(io)?;
            }
            if !report.published_failures().is_empty() {
                return Ok(EXIT_FAILURE);
            }
        }
        Command::Search {
            kind,
            axiom,
            budget,
            shape,
            solver,
            json,
        } => {
            let mut config = CheckConfig {
                measure: solver.config(),
                ..CheckConfig::default()
            };
            if let Some(r) = solver.restarts {
                config.screening_restarts = r;
            }
            let search = SearchBudget {
                instances: budget,
                seed: solver.seed,
                shape,
            };
            let found = axioms::search_counterexamples(kind, axiom, &search, &config)?;
            if json {
                for v in &found {
                    writeln!(out, "{}", v.to_json_line()).map_err(io)?;
                }
            } else {
                writeln!(
                    out,
                    "{} violation(s) of {axiom} for {kind} in {budget} tables of shape {:?}",
                    found.len(),
                    search.shape
                )
                .map_err(io)?;
                for v in &found {
                    writeln!(out, "{v}").map_err(io)?;
                    if let Some(w) = &v.witness {
                        writeln!(out, "{}", serde_json::to_string(&w.table)?).map_err(io)?;
                    }
                }
            }
        }
        Command::Export { case, out: path } => {
            write_table(&corpus::build(case).table, &path)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(io)
}

fn info(table: &JointTable, json: bool, out: &mut impl Write) -> Result<()> {
    let preds = table.default_predictors();
    let y = table.target_set();
    let name = |s: &VarSet| {
        s.indices()
            .iter()
            .map(|&i| table.variable(i).name())
            .collect::<Vec<_>>()
            .join("∨")
    };
    let mut rows: Vec<(String, f64)> = Vec::new();
    for i in 0..table.num_variables() {
        let v = VarSet::single(i);
        rows.push((format!("H({})", name(&v)), entropy(table, &v)?));
    }
    let all = VarSet::new(0..table.num_variables());
    rows.push((format!("H({})", name(&all)), entropy(table, &all)?));
    for p in &preds {
        rows.push((format!("I({}:{})", name(p), name(&y)), mutual_information(table, p, &y)?));
    }
    for (i, a) in preds.iter().enumerate() {
        for b in &preds[i + 1..] {
            rows.push((format!("I({}:{})", name(a), name(b)), mutual_information(table, a, b)?));
        }
    }
    if preds.len() > 1 {
        let joint = preds.iter().fold(VarSet::empty(), |acc, p| acc.union(p));
        rows.push((
            format!("I({}:{})", name(&joint), name(&y)),
            mutual_information(table, &joint, &y)?,
        ));
    }
    if json {
        let map: serde_json::Map<String, serde_json::Value> = rows
            .into_iter()
            .map(|(k, v)| (k, serde_json::json!(v)))
            .collect();
        let target = table.target_variable().name();
        json_line(out, &serde_json::json!({ "target": target, "quantities": map }))?;
    } else {
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        for (k, v) in rows {
            let pad = width - k.chars().count();
            writeln!(out, "{k}{} {v:.6} bits", " ".repeat(pad)).map_err(io)?;
        }
    }
    Ok(())
}
