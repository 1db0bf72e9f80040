//! The encodings and the pipelines composing them.

mod args;
mod erase;
mod protect;
mod scheme;

pub use args::{add_type_args, ArgFilter};
pub use erase::{erase, erase_formula, erase_term};
pub use protect::{
    family_symbol, guards_cover, sanitize, guards_feather, guards_light, guards_traditional, tags_cover, tags_feather,
    tags_light, tags_traditional, Flavor, Protection,
};
pub use scheme::{Scheme, SchemeId, Stage};

use crate::analysis::{analyze, Analysis, AnalysisConfig};
use crate::monomorph::{monomorphise, MonoConfig, MonoError, Monomorphised};
use crate::syntax::{Level, Named, Origin, Problem, Signature};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("problem is already untyped")]
    AlreadyUntyped,
    #[error("scheme {0} needs a monomorphic problem; monomorphise it first")]
    NotMonomorphic(SchemeId),
    #[error(transparent)]
    Mono(#[from] MonoError),
}

/// One intermediate result of a pipeline.
#[derive(Clone, Debug)]
pub struct StageOutput {
    pub stage: Stage,
    pub problem: Problem,
}

#[derive(Clone, Debug)]
pub struct EncodedProblem {
    pub scheme: SchemeId,
    /// The input at the level the scheme works on.
    pub source: Problem,
    pub analysis: Analysis,
    pub stages: Vec<StageOutput>,
    /// The untyped result, with final formula names.
    pub problem: Problem,
}

impl EncodedProblem {
    pub fn target_sig(&self) -> &Signature {
        &self.problem.sig
    }

    pub fn added_axioms(&self) -> impl Iterator<Item = &Named> {
        self.problem.formulas.iter().filter(|n| n.is_added_axiom())
    }

    pub fn translations(&self) -> impl Iterator<Item = &Named> {
        self.problem.formulas.iter().filter(|n| !n.is_added_axiom())
    }

    /// Output formula name and a description of its source.
    pub fn provenance(&self) -> Vec<(String, String)> {
        self.problem
            .formulas
            .iter()
            .map(|n| {
                let src = match &n.origin {
                    Origin::Input => n.name.clone(),
                    Origin::Translated(s) => s.clone(),
                    Origin::Axiom { schema, symbol } => format!("{schema} axiom for {symbol}"),
                };
                (n.name.clone(), src)
            })
            .collect()
    }
}

/// Brings the input to the level the scheme expects.
pub fn prepare(problem: &Problem, scheme: SchemeId) -> Result<Problem, EncodeError> {
    match problem.level() {
        Level::Untyped => Err(EncodeError::AlreadyUntyped),
        _ if !scheme.mono => Ok(problem.lifted_to_poly()),
        Level::Mono => Ok(problem.clone()),
        Level::Poly if problem.sig.is_monomorphic() && problem.is_type_ground() => {
            let mut p = problem.clone();
            p.sig.level = Level::Mono;
            Ok(p)
        }
        Level::Poly => Err(EncodeError::NotMonomorphic(scheme)),
    }
}

pub fn apply_stage(stage: Stage, problem: &Problem, analysis: &Analysis) -> Problem {
    let (verdicts, covers, v) = (&analysis.verdicts, &analysis.covers, analysis.v.as_slice());
    match stage {
        Stage::Erase => erase(problem),
        Stage::Args(x) => add_type_args(problem, x),
        Stage::Protect(p, f) => match (p, f) {
            (Protection::Tags, Flavor::Traditional) => tags_traditional(problem),
            (Protection::Guards, Flavor::Traditional) => guards_traditional(problem),
            (Protection::Tags, Flavor::Cover) => tags_cover(problem, covers),
            (Protection::Guards, Flavor::Cover) => guards_cover(problem, covers),
            (Protection::Tags, Flavor::Light) => tags_light(problem, verdicts, v),
            (Protection::Tags, Flavor::Feather) => tags_feather(problem, verdicts, v),
            (Protection::Guards, Flavor::Light) => guards_light(problem, verdicts, v),
            (Protection::Guards, Flavor::Feather) => guards_feather(problem, verdicts, v),
        },
    }
}

/// Runs every stage of `scheme`, then names the output formulas
/// `f_<i>` (translations) and `ax_<schema>_<symbol>` (added axioms).
pub fn run_pipeline(problem: &Problem, scheme: SchemeId, cfg: &AnalysisConfig) -> Result<EncodedProblem, EncodeError> {
    let source = prepare(problem, scheme)?;
    let analysis = analyze(&source, cfg);
    let mut stages = Vec::new();
    let mut cur = source.clone();
    for stage in scheme.stages() {
        cur = apply_stage(stage, &cur, &analysis);
        stages.push(StageOutput { stage, problem: cur.clone() });
    }
    let problem = finalize_names(cur);
    Ok(EncodedProblem { scheme, source, analysis, stages, problem })
}

/// Like [`run_pipeline`], except that a polymorphic input to a monomorphic
/// scheme is monomorphised first. The analysis configuration follows the
/// types to their mangled names.
pub fn run_pipeline_mono(
    problem: &Problem,
    scheme: SchemeId,
    cfg: &AnalysisConfig,
    mono: &MonoConfig,
) -> Result<(EncodedProblem, Option<Monomorphised>), EncodeError> {
    if !scheme.mono || problem.level() != Level::Poly || prepare(problem, scheme).is_ok() {
        return run_pipeline(problem, scheme, cfg).map(|e| (e, None));
    }
    let m = monomorphise(problem, mono)?;
    let encoded = run_pipeline(&m.problem, scheme, &m.translate_config(cfg))?;
    Ok((encoded, Some(m)))
}

fn finalize_names(mut problem: Problem) -> Problem {
    let mut taken = BTreeSet::new();
    let mut index = 0;
    for n in &mut problem.formulas {
        let base = match &n.origin {
            Origin::Axiom { .. } => n.name.clone(),
            Origin::Input | Origin::Translated(_) => {
                if n.origin == Origin::Input {
                    n.origin = Origin::Translated(n.name.clone());
                }
                index += 1;
                format!("f_{}", index - 1)
            }
        };
        let mut name = base.clone();
        let mut k = 1;
        while taken.contains(&name) {
            k += 1;
            name = format!("{base}_{k}");
        }
        taken.insert(name.clone());
        n.name = name;
    }
    problem
}
