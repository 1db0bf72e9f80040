//! Hand-transcribed expected encodings in `corpus/golden`.

use polyenc::analysis::AnalysisConfig;
use polyenc::corpus::load_manifest;
use polyenc::encode::{run_pipeline, SchemeId};
use polyenc::syntax::{Formula, Problem, GUARD, TAG};
use polyenc::tptp::{alpha_eq, parse_output, print};
use super::corpus;

pub const CASES: [(&str, &str, bool); 14] = [
    ("monkey", "e", false),
    ("lists", "t", false),
    ("linorder", "t", false),
    ("lists", "g", false),
    ("inlinr", "g", false),
    ("lists", "g_at", false),
    ("lists", "t_at", false),
    ("lists_mono", "t_q", true),
    ("lists_mono", "t_qq", true),
    ("lists_mono", "g_q", true),
    ("lists_mono", "g_qq", true),
    ("lists", "t_q", false),
    ("lists", "t_qq", false),
    ("lists", "g_qq", false),
];


/// Number of tag applications and guard atoms in a formula.
pub fn protectors(f: &Formula) -> (usize, usize) {
    let mut tags = 0;
    f.visit_terms(&mut |t| {
        if let polyenc::syntax::Term::App { sym, .. } = t {
            if sym == TAG || sym.starts_with("$$tag_") {
                tags += 1;
            }
        }
    });
    let mut guards = 0;
    f.visit_atoms(&mut |a| {
        if let Formula::Pred { sym, .. } = a {
            if sym == GUARD || sym.starts_with("$$guard_") {
                guards += 1;
            }
        }
    });
    (tags, guards)
}

pub fn encode(source: &str, scheme: &str, mono: bool) -> Problem {
    let entries = load_manifest(corpus()).unwrap();
    let entry = entries.iter().find(|e| e.name() == source).unwrap();
    let cfg = AnalysisConfig { inf: entry.inf(), ..Default::default() };
    let id = SchemeId::parse(scheme, mono).unwrap();
    run_pipeline(&entry.problem().unwrap(), id, &cfg).unwrap().problem
}

/// Compares against the golden file; returns a description of the first difference.
pub fn check_case(source: &str, scheme: &str, mono: bool) -> Result<(), String> {
    let got = encode(source, scheme, mono);
    let path = corpus().join("golden").join(format!("{source}.{scheme}.p"));
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let want = parse_output(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if got.formulas.len() != want.formulas.len() {
        return Err(format!(
            "{} formulas, expected {}\n{}",
            got.formulas.len(),
            want.formulas.len(),
            print(&got)
        ));
    }
    for (i, (g, w)) in got.formulas.iter().zip(&want.formulas).enumerate() {
        if protectors(&g.formula) != protectors(&w.formula) {
            return Err(format!(
                "formula {i} has (tags, guards) = {:?}, expected {:?}",
                protectors(&g.formula),
                protectors(&w.formula)
            ));
        }
        if g.role != w.role || !alpha_eq(&g.formula, &w.formula) {
            return Err(format!("formula {i} differs\n{}", print(&got)));
        }
    }
    Ok(())
}

