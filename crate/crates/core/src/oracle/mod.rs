//! Semantic checks on small problems: evaluation in finite structures,
//! bounded model search, clausification and a resolution refuter.

mod clause;
mod finder;
mod model;
mod prover;

pub use crate::corpus::Expected;
pub use clause::{clausify, Atom, Clause, ClauseSet, Lit, Sort, Sym, SymInfo, T};
pub use finder::{domain_types, find_model, find_model_with_sizes, size_vectors};
pub use model::{evaluate, FiniteModel, Table, Valuation};
pub use prover::{congruence_axioms, refute, subsumes, EqualityMode, Outcome, RefuteConfig, AGE_RATIO};

use crate::monomorph::{monomorphise, MonoConfig};
use crate::syntax::Problem;
use std::fmt;
use std::path::Path;
use std::process::Command;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("polymorphic input: {0}")]
    Polymorphic(String),
    #[error("internal oracle error: {0}")]
    Internal(String),
    #[error("external prover: {0}")]
    External(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub refute: RefuteConfig,
    /// Model-search bound used when hunting a counter-model to an `unsat` claim.
    pub model_bound: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { refute: RefuteConfig::default(), model_bound: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub detail: String,
    pub model: Option<FiniteModel>,
}

impl Report {
    fn new(status: Status, detail: impl Into<String>) -> Report {
        Report { status, detail: detail.into(), model: None }
    }
}

/// Ground-typed problems are taken as is; others are monomorphised first, which
/// keeps refutations sound because every instance is a consequence.
fn ground_version(problem: &Problem) -> Result<Problem, OracleError> {
    if problem.is_type_ground() {
        Ok(problem.clone())
    } else {
        monomorphise(problem, &MonoConfig::default())
            .map(|m| m.problem)
            .map_err(|e| OracleError::Polymorphic(e.to_string()))
    }
}

fn try_refute(problem: &Problem, budget: &Budget) -> Result<Outcome, OracleError> {
    let ground = ground_version(problem)?;
    Ok(refute(&clausify(&ground)?, &budget.refute))
}

/// Checks a claimed status: `sat:N` by model search plus re-evaluation,
/// `unsat` by refutation. Failing to confirm either way is inconclusive.
pub fn check_status(problem: &Problem, expected: Expected, budget: &Budget) -> Result<Report, OracleError> {
    match expected {
        Expected::Sat(bound) => {
            if problem.is_type_ground() {
                if let Some(m) = find_model(problem, bound)? {
                    let mut r = Report::new(Status::Pass, format!("model with {} elements", m.total_size()));
                    r.model = Some(m);
                    return Ok(r);
                }
            }
            Ok(match try_refute(problem, budget)? {
                Outcome::Refuted { steps, .. } => Report::new(Status::Fail, format!("refuted in {steps} steps")),
                Outcome::GaveUp { steps, .. } if problem.is_type_ground() => {
                    Report::new(Status::Inconclusive, format!("no model up to size {bound}; no refutation in {steps} steps"))
                }
                Outcome::GaveUp { .. } => Report::new(Status::Inconclusive, "polymorphic problem; no refutation"),
            })
        }
        Expected::Unsat => {
            if let Outcome::Refuted { steps, .. } = try_refute(problem, budget)? {
                return Ok(Report::new(Status::Pass, format!("refuted in {steps} steps")));
            }
            if problem.is_type_ground() {
                if let Some(m) = find_model(problem, budget.model_bound)? {
                    let mut r = Report::new(Status::Fail, format!("model with {} elements", m.total_size()));
                    r.model = Some(m);
                    return Ok(r);
                }
            }
            Ok(Report::new(Status::Inconclusive, format!("no refutation in {} steps", budget.refute.steps)))
        }
    }
}

/// Result line of an external prover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SzsStatus {
    Theorem,
    Unsatisfiable,
    Satisfiable,
    CounterSatisfiable,
    Timeout,
    Other(String),
}

impl SzsStatus {
    /// Finds the first `SZS status` line in prover output.
    pub fn from_output(out: &str) -> Option<SzsStatus> {
        let line = out.lines().find_map(|l| l.split_once("SZS status").map(|(_, rest)| rest.trim()))?;
        let word = line.split_whitespace().next().unwrap_or("");
        Some(match word {
            "Theorem" => SzsStatus::Theorem,
            "Unsatisfiable" => SzsStatus::Unsatisfiable,
            "Satisfiable" => SzsStatus::Satisfiable,
            "CounterSatisfiable" => SzsStatus::CounterSatisfiable,
            "Timeout" | "ResourceOut" => SzsStatus::Timeout,
            other => SzsStatus::Other(other.to_string()),
        })
    }

    /// Agreement with an expected status of the (negated-conjecture) problem.
    pub fn agrees(&self, expected: Expected) -> Option<bool> {
        match (self, expected) {
            (SzsStatus::Theorem | SzsStatus::Unsatisfiable, e) => Some(e == Expected::Unsat),
            (SzsStatus::Satisfiable | SzsStatus::CounterSatisfiable, e) => Some(e != Expected::Unsat),
            _ => None,
        }
    }
}

/// Environment variable naming the external prover command.
pub const PROVER_ENV: &str = "POLYENC_PROVER";

/// Runs the prover named by `POLYENC_PROVER` on a problem file. The variable
/// holds a command line; the file path is appended as the last argument.
pub fn run_external(path: &Path) -> Result<SzsStatus, OracleError> {
    let cmd = std::env::var(PROVER_ENV).map_err(|_| OracleError::External(format!("{PROVER_ENV} is not set")))?;
    let mut parts = cmd.split_whitespace();
    let exe = parts.next().ok_or_else(|| OracleError::External(format!("{PROVER_ENV} is empty")))?;
    let out = Command::new(exe)
        .args(parts)
        .arg(path)
        .output()
        .map_err(|e| OracleError::External(format!("cannot run {exe}: {e}")))?;
    let text = String::from_utf8_lossy(&out.stdout);
    SzsStatus::from_output(&text).ok_or_else(|| OracleError::External("no SZS status line in prover output".into()))
}
