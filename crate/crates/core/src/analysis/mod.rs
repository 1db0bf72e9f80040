//! Type-argument classification, covers, monotonicity inference and caps.

mod caps;
mod classify;
mod covers;
mod mono;
mod report;

pub use caps::{cap_minimize, compute_u, types_of, u_sigma};
pub use classify::{classify_args, classify_symbol, ArgClassification, SymClass};
pub use covers::{choose_covers, is_cover, is_minimal_cover, minimal_earliest, CoverAssignment, CoverPolicy};
pub use mono::{
    infer_mono_monomorphic, infer_mono_polymorphic, infer_mono_with, InfRegistry, MonoVerdicts, NakedOccurrence,
    Reason,
};
pub use report::{reported_types, verdict_line, Report};

use crate::syntax::{Level, Problem, Type};

/// Everything the encodings need to know about a problem.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub classes: ArgClassification,
    pub covers: CoverAssignment,
    pub verdicts: MonoVerdicts,
    /// `V_Φ`; empty for monomorphic problems.
    pub v: Vec<Type>,
}

#[derive(Clone, Debug, Default)]
pub struct AnalysisConfig {
    pub inf: InfRegistry,
    pub policy: CoverPolicy,
    pub protect_extra: Vec<Type>,
}

pub fn analyze(problem: &Problem, cfg: &AnalysisConfig) -> Analysis {
    let verdicts = infer_mono_with(problem, &cfg.inf, &cfg.protect_extra);
    let v = if problem.level() == Level::Poly { compute_u(problem, &verdicts) } else { Vec::new() };
    Analysis {
        classes: classify_args(&problem.sig),
        covers: choose_covers(&problem.sig, cfg.policy),
        verdicts,
        v,
    }
}
