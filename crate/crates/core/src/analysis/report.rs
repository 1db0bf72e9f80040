use super::{types_of, Analysis, MonoVerdicts};
use crate::subst::canonical;
use crate::syntax::{is_reserved, Problem, Type};
use crate::vars::undercover_vars;
use std::fmt;

/// The types an analysis report lists by default: every nullary constructor
/// and every type of a subterm, compound types before variables.
pub fn reported_types(problem: &Problem) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::new();
    let atoms = problem.sig.type_ctors.iter().filter(|(k, &n)| n == 0 && !is_reserved(k));
    for ty in atoms.map(|(k, _)| Type::atom(k.clone())).chain(types_of(problem)) {
        let ty = canonical(&ty);
        if !out.contains(&ty) {
            out.push(ty);
        }
    }
    out.sort_by_key(|t| (matches!(t, Type::Var(_)), t.to_string()));
    out
}

/// `banana: monotonic (no naked); monkey: nonmonotonic (naked M1 in ax3)`.
pub fn verdict_line(types: &[Type], verdicts: &MonoVerdicts) -> String {
    types.iter().map(|t| format!("{t}: {}", verdicts.reason(t))).collect::<Vec<_>>().join("; ")
}

/// Human-readable analysis: verdicts with reasons, naked and undercover
/// variables, covers and type-argument classes.
pub struct Report<'a> {
    pub problem: &'a Problem,
    pub analysis: &'a Analysis,
    pub types: Vec<Type>,
}

impl<'a> Report<'a> {
    pub fn new(problem: &'a Problem, analysis: &'a Analysis) -> Report<'a> {
        Report { problem, analysis, types: reported_types(problem) }
    }
}

fn positions(set: impl IntoIterator<Item = usize>) -> String {
    let items: Vec<String> = set.into_iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for Report<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.analysis;
        writeln!(f, "verdicts:")?;
        for t in &self.types {
            writeln!(f, "  {t}: {}", a.verdicts.reason(t))?;
        }
        writeln!(f, "naked variables:")?;
        for o in &a.verdicts.naked {
            writeln!(f, "  {}: {} in {}", o.var.name, o.var.ty, o.formula)?;
        }
        writeln!(f, "undercover variables:")?;
        for n in &self.problem.formulas {
            let uv = undercover_vars(&n.formula, &a.covers);
            if !uv.is_empty() {
                let names: Vec<String> = uv.iter().map(|v| v.name.clone()).collect();
                writeln!(f, "  {}: {}", n.name, names.join(", "))?;
            }
        }
        writeln!(f, "covers:")?;
        for (sym, set) in &a.covers.0 {
            if !is_reserved(sym) {
                writeln!(f, "  {sym}: {}", positions(set.iter().copied()))?;
            }
        }
        writeln!(f, "type arguments:")?;
        for (sym, c) in &a.classes.0 {
            if is_reserved(sym) || (c.inferable.is_empty() && c.noninferable.is_empty()) {
                continue;
            }
            writeln!(
                f,
                "  {sym}: inferable {}, noninferable {}, phantom {}",
                positions(c.inferable.iter().copied()),
                positions(c.noninferable.iter().copied()),
                positions(c.phantom.iter().copied())
            )?;
        }
        if !a.v.is_empty() {
            let v: Vec<String> = a.v.iter().map(Type::to_string).collect();
            writeln!(f, "monotonic cap: {}", v.join(", "))?;
        }
        Ok(())
    }
}
