//! Generators and invariant checks for random small problems.

use polyenc::analysis::{compute_u, infer_mono_polymorphic, AnalysisConfig, InfRegistry};
use polyenc::encode::{run_pipeline, Flavor, Protection, SchemeId, Stage};
use polyenc::gen::{problem_from_seed, GenConfig};
use polyenc::subst::{is_instance, TypeSubst};
use polyenc::syntax::{Formula, Level, Problem, Term, Type, Var, GUARD};
use polyenc::typing::check_well_typed;
use polyenc::vars::naked_vars;
use proptest::prelude::*;

pub fn cases() -> ProptestConfig {
    ProptestConfig::with_cases(500)
}

pub fn list(t: Type) -> Type {
    Type::con("list", vec![t])
}

pub fn ty() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(Type::var("A")), Just(Type::var("B")), Just(Type::atom("a")), Just(Type::atom("b"))];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(list),
            (inner.clone(), inner).prop_map(|(x, y)| Type::con("pair", vec![x, y])),
        ]
    })
}

pub fn ground_ty() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![Just(Type::atom("a")), Just(Type::atom("b"))];
    leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(list))
}

pub fn subst() -> impl Strategy<Value = TypeSubst> {
    (ty(), ty()).prop_map(|(x, y)| TypeSubst::from_pairs(&["A".into(), "B".into()], &[x, y]))
}

pub fn registry(k: u8) -> InfRegistry {
    match k % 3 {
        0 => InfRegistry::default(),
        1 => InfRegistry::new(vec![list(Type::var("A"))]),
        _ => InfRegistry::new(vec![Type::atom("a")]),
    }
}

pub fn poly(seed: u64) -> Problem {
    problem_from_seed(seed, &GenConfig::small(Level::Poly))
}

pub fn typed(seed: u64) -> Problem {
    let level = if seed % 2 == 0 { Level::Poly } else { Level::Mono };
    problem_from_seed(seed, &GenConfig::small(level))
}

/// Looks through a block of like quantifiers to the formula under it.
pub fn under_binders(f: &Formula, universal: bool) -> &Formula {
    match f {
        Formula::Forall(_, b) if universal => under_binders(b, universal),
        Formula::Exists(_, b) if !universal => under_binders(b, universal),
        _ => f,
    }
}

pub fn is_guard_of(f: &Formula, v: &Var, pos: bool) -> bool {
    match f {
        Formula::Pred { pos: p, sym, args, .. } if *p == pos && (sym == GUARD || sym.starts_with("$$guard_")) => {
            matches!(args.as_slice(), [Term::Var(x)] if x.name == v.name)
        }
        _ => false,
    }
}

/// Quantifiers over nonmonotonic types whose variable is naked must be guarded.
pub fn check_guarded(f: &Formula, verdict: &dyn Fn(&Type) -> bool) -> Result<(), String> {
    match f {
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            let universal = matches!(f, Formula::Forall(..));
            if !verdict(&v.ty) && naked_vars(b).iter().any(|x| x.name == v.name) {
                let inner = under_binders(b, universal);
                let ok = match inner {
                    Formula::Or(ps) if universal => ps.iter().any(|p| is_guard_of(p, v, false)),
                    Formula::And(ps) if !universal => ps.iter().any(|p| is_guard_of(p, v, true)),
                    p => is_guard_of(p, v, !universal),
                };
                if !ok {
                    return Err(format!("unguarded {} {}: {}", if universal { "∀" } else { "∃" }, v.name, v.ty));
                }
            }
            check_guarded(b, verdict)
        }
        Formula::And(ps) | Formula::Or(ps) => ps.iter().try_for_each(|p| check_guarded(p, verdict)),
        Formula::ForallType(_, b) => check_guarded(b, verdict),
        _ => Ok(()),
    }
}

pub fn stages_are_well_typed(seed: u64, inf: u8) -> Result<(), TestCaseError> {
    let p = typed(seed);
    let cfg = AnalysisConfig { inf: registry(inf), ..Default::default() };
    for s in SchemeId::all() {
        let Ok(enc) = run_pipeline(&p, s, &cfg) else { continue };
        for st in &enc.stages {
            let errs = check_well_typed(&st.problem);
            prop_assert!(errs.is_empty(), "{s} stage {}: {:?}", st.stage, errs);
        }
    }
    Ok(())
}

pub fn tags_leave_no_naked_nonmonotonic(seed: u64, inf: u8) -> Result<(), TestCaseError> {
    let p = typed(seed);
    let cfg = AnalysisConfig { inf: registry(inf), ..Default::default() };
    for s in SchemeId::all() {
        let Ok(enc) = run_pipeline(&p, s, &cfg) else { continue };
        for st in &enc.stages {
            if !matches!(st.stage, Stage::Protect(Protection::Tags, Flavor::Light | Flavor::Feather)) {
                continue;
            }
            for n in st.problem.formulas.iter().filter(|n| !n.is_added_axiom()) {
                for v in naked_vars(&n.formula) {
                    prop_assert!(enc.analysis.verdicts.verdict(&v.ty), "{s}: {} naked in {} at {}", v.name, n.name, v.ty);
                }
            }
        }
    }
    Ok(())
}

pub fn guards_protect_nonmonotonic(seed: u64, inf: u8) -> Result<(), TestCaseError> {
    let p = typed(seed);
    let cfg = AnalysisConfig { inf: registry(inf), ..Default::default() };
    for s in SchemeId::all() {
        let Ok(enc) = run_pipeline(&p, s, &cfg) else { continue };
        let verdicts = &enc.analysis.verdicts;
        for st in &enc.stages {
            if !matches!(st.stage, Stage::Protect(Protection::Guards, Flavor::Light | Flavor::Feather)) {
                continue;
            }
            for n in st.problem.formulas.iter().filter(|n| !n.is_added_axiom()) {
                let r = check_guarded(&n.formula, &|t| verdicts.verdict(t));
                prop_assert!(r.is_ok(), "{s} {}: {:?}", n.name, r);
            }
        }
    }
    Ok(())
}

pub fn verdicts_closed_under_instances(seed: u64, inf: u8, sigma: Type, rho: TypeSubst) -> Result<(), TestCaseError> {
    let v = infer_mono_polymorphic(&poly(seed), &registry(inf));
    let instance = rho.apply(&sigma);
    if v.verdict(&sigma) {
        prop_assert!(v.verdict(&instance), "{sigma} accepted but not its instance {instance}");
    }
    Ok(())
}

pub fn caps_incomparable_and_monotonic(seed: u64, inf: u8) -> Result<(), TestCaseError> {
    let p = poly(seed);
    let verdicts = infer_mono_polymorphic(&p, &registry(inf));
    let u = compute_u(&p, &verdicts);
    for (i, s) in u.iter().enumerate() {
        prop_assert!(verdicts.verdict(s), "{s} in U but not monotonic");
        for t in &u[i + 1..] {
            prop_assert!(!is_instance(s, t) && !is_instance(t, s), "{s} and {t} comparable");
        }
    }
    Ok(())
}
