//! Invariants over random small problems and types.

use polyenc::analysis::{
    analyze, cap_minimize, choose_covers, infer_mono_monomorphic, infer_mono_polymorphic, is_cover, types_of,
    AnalysisConfig, CoverPolicy,
};
use polyenc::encode::{
    add_type_args, erase, guards_cover, guards_traditional, run_pipeline, tags_cover, tags_feather, ArgFilter, SchemeId,
};
use polyenc::monomorph::{monomorphise, MonoConfig};
use polyenc::subst::{instantiate, is_instance, match_type, mgi, TypeSubst};
use polyenc::syntax::{Formula, Level, Problem, Term, Type, VarKind};
use polyenc::typing::check_well_typed;
use polyenc::vars::{naked_vars, type_to_term, TypeTerms};
use proptest::prelude::*;

mod shared;
use shared::invariants::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::collections::BTreeSet;

/// Whether every universal variable is an argument of some symbol or a side of a
/// positive equation, which makes it undercover when all positions are covered.
fn universals_undercover(f: &Formula) -> bool {
    fn exposed(f: &Formula, out: &mut Vec<String>) {
        f.visit_atoms(&mut |a| match a {
            Formula::Eq { pos: true, lhs, rhs } => {
                for t in [lhs, rhs] {
                    if let Term::Var(v) = t {
                        out.push(v.name.clone());
                    }
                }
            }
            _ => {}
        });
        f.visit_terms(&mut |t| {
            if let Term::App { args, .. } = t {
                out.extend(args.iter().filter_map(|a| match a {
                    Term::Var(v) => Some(v.name.clone()),
                    _ => None,
                }));
            }
        });
        f.visit_atoms(&mut |a| {
            if let Formula::Pred { args, .. } = a {
                out.extend(args.iter().filter_map(|a| match a {
                    Term::Var(v) => Some(v.name.clone()),
                    _ => None,
                }));
            }
        });
    }
    fn universals(f: &Formula, out: &mut Vec<String>) {
        match f {
            Formula::Forall(v, b) => {
                out.push(v.name.clone());
                universals(b, out);
            }
            Formula::Exists(_, b) | Formula::ForallType(_, b) => universals(b, out),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| universals(p, out)),
            _ => {}
        }
    }
    let (mut seen, mut bound) = (Vec::new(), Vec::new());
    exposed(f, &mut seen);
    universals(f, &mut bound);
    bound.iter().all(|v| seen.contains(v))
}

fn drop_vacuous(f: &Formula) -> Formula {
    match f {
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            let body = drop_vacuous(b);
            let mut occurs = false;
            body.visit_terms(&mut |t| occurs |= matches!(t, Term::Var(x) if x.name == v.name));
            match (occurs, f) {
                (false, _) => body,
                (true, Formula::Forall(..)) => Formula::forall(v.clone(), body),
                (true, _) => Formula::exists(v.clone(), body),
            }
        }
        Formula::And(ps) => Formula::And(ps.iter().map(drop_vacuous).collect()),
        Formula::Or(ps) => Formula::Or(ps.iter().map(drop_vacuous).collect()),
        Formula::ForallType(a, b) => Formula::forall_type(a.clone(), drop_vacuous(b)),
        atom => atom.clone(),
    }
}

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn every_stage_output_is_well_typed(seed in any::<u64>(), inf in any::<u8>()) {
        stages_are_well_typed(seed, inf)?;
    }

    #[test]
    fn tags_leave_no_naked_nonmonotonic_variables(seed in any::<u64>(), inf in any::<u8>()) {
        tags_leave_no_naked_nonmonotonic(seed, inf)?;
    }

    #[test]
    fn guards_protect_naked_nonmonotonic_quantifiers(seed in any::<u64>(), inf in any::<u8>()) {
        guards_protect_nonmonotonic(seed, inf)?;
    }

    #[test]
    fn erasure_keeps_term_arities(seed in any::<u64>()) {
        let p = typed(seed).lifted_to_poly();
        let e = erase(&p);
        for (name, d) in p.sig.symbols() {
            prop_assert_eq!(e.sig.sym(name).map(|x| x.args.len()), Some(d.args.len()));
        }
    }

    #[test]
    fn type_arguments_add_their_count_to_arities(seed in any::<u64>(), k in 0usize..4) {
        let p = poly(seed);
        let x = ArgFilter::ALL[k];
        let out = add_type_args(&p, x);
        for (name, d) in p.sig.symbols() {
            let expected = x.select(name, d).len() + d.args.len();
            prop_assert_eq!(out.sig.sym(name).map(|x| x.args.len()), Some(expected));
        }
    }

    #[test]
    fn coincidences_between_encodings(seed in any::<u64>(), inf in any::<u8>()) {
        let p = typed(seed);
        let lifted = p.lifted_to_poly();
        // a^none adds nothing; a^full is the scheme `a`.
        // a^none only adds vacuous binders for the type variables.
        let none = add_type_args(&lifted, ArgFilter::None);
        let bare = |q: &Problem| -> Vec<Formula> { q.formulas().map(drop_vacuous).collect() };
        prop_assert_eq!(bare(&none), bare(&lifted));
        let cfg = AnalysisConfig { inf: registry(inf), ..Default::default() };
        let a = run_pipeline(&p, SchemeId::parse("a", false).unwrap(), &cfg).unwrap();
        prop_assert_eq!(&a.stages[0].problem, &add_type_args(&lifted, ArgFilter::Full));
        // Maximal covers guard every argument, as the traditional encoding does. Universal
        // variables that are not undercover (unused, or only in negative equations) lose
        // their guard, so formulas with such variables are left out.
        let maximal = choose_covers(&lifted.sig, CoverPolicy::Maximal);
        let cover = guards_cover(&lifted, &maximal);
        let traditional = guards_traditional(&lifted);
        prop_assert_eq!(&cover.sig, &traditional.sig);
        prop_assert_eq!(cover.formulas.len(), traditional.formulas.len());
        for (c, t) in cover.formulas.iter().zip(&traditional.formulas) {
            let exposed = lifted.formulas.iter().find(|n| n.name == c.name).is_none_or(|n| universals_undercover(&n.formula));
            if exposed {
                prop_assert_eq!(c, t);
            }
        }
        // Monomorphic cover tags degenerate to featherweight tags with nothing monotonic:
        // the same translations, and every featherweight axiom among the cover axioms.
        if p.level() == Level::Mono {
            let protect_extra = p.sig.type_ctors.keys().map(Type::atom).collect();
            let all_nonmono = AnalysisConfig { protect_extra, ..Default::default() };
            let verdicts = analyze(&p, &all_nonmono).verdicts;
            let feather = tags_feather(&p, &verdicts, &[]);
            let cover = tags_cover(&p, &choose_covers(&p.sig, CoverPolicy::MinimalEarliest));
            let translations = |q: &Problem| -> Vec<Formula> {
                q.formulas.iter().filter(|n| !n.is_added_axiom()).map(|n| n.formula.clone()).collect()
            };
            prop_assert_eq!(translations(&feather), translations(&cover));
            let cover_axioms: Vec<&Formula> = cover.formulas.iter().filter(|n| n.is_added_axiom()).map(|n| &n.formula).collect();
            for n in feather.formulas.iter().filter(|n| n.is_added_axiom()) {
                prop_assert!(cover_axioms.contains(&&n.formula), "{} missing from cover tags", n.name);
            }
        }
    }

    #[test]
    fn polymorphic_verdicts_are_closed_under_instances(seed in any::<u64>(), inf in any::<u8>(), sigma in ty(), rho in subst()) {
        verdicts_closed_under_instances(seed, inf, sigma, rho)?;
    }

    #[test]
    fn polymorphic_verdicts_lift_to_ground_instantiations(seed in any::<u64>(), inf in any::<u8>()) {
        let p = poly(seed);
        let reg = registry(inf);
        let mut rng = StdRng::seed_from_u64(seed);
        let pool = [Type::atom("a"), Type::atom("b"), list(Type::atom("a")), list(Type::atom("b"))];
        let mut ground = Problem::new(p.sig.clone());
        for n in &p.formulas {
            let (tyvars, _) = n.formula.split_type_binders();
            let tys: Vec<Type> = tyvars.iter().map(|_| pool.choose(&mut rng).unwrap().clone()).collect();
            ground.push(n.name.clone(), instantiate(&n.formula, &TypeSubst::from_pairs(&tyvars, &tys)));
        }
        let pv = infer_mono_polymorphic(&p, &reg);
        let mv = infer_mono_monomorphic(&ground, &reg);
        let gv = infer_mono_polymorphic(&ground, &reg);
        for tau in ground.ground_types() {
            for sigma in types_of(&p) {
                if is_instance(&tau, &sigma) && pv.verdict(&sigma) {
                    prop_assert!(mv.verdict(&tau), "{sigma} accepted, its instance {tau} rejected");
                }
            }
            // Both calculi agree on ground types.
            prop_assert_eq!(mv.verdict(&tau), gv.verdict(&tau));
        }
    }

    #[test]
    fn chosen_covers_are_minimal(seed in any::<u64>()) {
        let p = poly(seed);
        let covers = choose_covers(&p.sig, CoverPolicy::MinimalEarliest);
        for (name, decl) in p.sig.symbols().filter(|(_, d)| d.args.len() <= 4) {
            let chosen = covers.get(name).cloned().unwrap_or_default();
            prop_assert!(is_cover(decl, &chosen), "{name}: {chosen:?} is no cover");
            // No proper subset covers, by brute force.
            let positions: Vec<usize> = chosen.iter().copied().collect();
            for mask in 0..(1u32 << positions.len()) - 1 {
                let sub: BTreeSet<usize> = positions.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &j)| j).collect();
                prop_assert!(!is_cover(decl, &sub), "{name}: {sub:?} already covers");
            }
        }
    }

    #[test]
    fn caps_are_incomparable_and_monotonic(seed in any::<u64>(), inf in any::<u8>()) {
        caps_incomparable_and_monotonic(seed, inf)?;
    }

    #[test]
    fn cap_minimize_covers_its_input(types in prop::collection::vec(ty(), 0..8)) {
        let cap = cap_minimize(&types);
        for t in &types {
            prop_assert!(cap.iter().any(|c| match_type(c, t).is_some()), "{t} not below the cap");
        }
        for (i, s) in cap.iter().enumerate() {
            for t in &cap[i + 1..] {
                prop_assert!(!is_instance(s, t) && !is_instance(t, s));
            }
        }
    }

    #[test]
    fn mgi_is_a_common_instance(s in ty(), t in ty(), g in ground_ty(), h in ground_ty()) {
        let t = polyenc::subst::rename(&t, "'");
        if let Some(m) = mgi(&s, &t) {
            prop_assert!(is_instance(&m, &s) && is_instance(&m, &t));
        }
        // Any common ground instance lies below the mgi.
        let rho = TypeSubst::from_pairs(&["A".into(), "B".into(), "A'".into(), "B'".into()], &[g.clone(), h.clone(), g, h]);
        let (gs, gt) = (rho.apply(&s), rho.apply(&t));
        if gs == gt {
            let m = mgi(&s, &t);
            prop_assert!(m.is_some_and(|m| is_instance(&gs, &m)));
        }
    }

    #[test]
    fn substitution_composes(seed in any::<u64>(), r1 in subst(), r2 in subst()) {
        for n in &poly(seed).formulas {
            let (_, body) = n.formula.split_type_binders();
            let twice = r2.apply_formula(&r1.apply_formula(body));
            prop_assert_eq!(twice, r2.after(&r1).apply_formula(body));
        }
    }

    #[test]
    fn sentences_have_only_universal_naked_variables(seed in any::<u64>()) {
        for f in typed(seed).formulas() {
            prop_assert!(naked_vars(f).iter().all(|v| v.kind == VarKind::Universal));
        }
    }

    #[test]
    fn type_terms_are_injective(s in ty(), t in ty()) {
        let mut sig = polyenc::syntax::Signature::new(Level::Poly);
        for (k, n) in [("a", 0), ("b", 0), ("list", 1), ("pair", 2)] {
            sig.type_ctors.insert(k.into(), n);
        }
        let tt = TypeTerms::for_signature(&sig);
        if s != t {
            prop_assert_ne!(type_to_term(&s, &tt), type_to_term(&t, &tt));
        }
    }

    #[test]
    fn monomorphisation_bounds_and_instances(seed in any::<u64>(), budget in 0usize..20) {
        let p = poly(seed);
        let cfg = MonoConfig { budget, ..MonoConfig::default() };
        let m = monomorphise(&p, &cfg).unwrap();
        prop_assert!(m.problem.formulas.len() <= p.formulas.len() + budget);
        prop_assert!(m.stats.rounds <= cfg.iterations);
        prop_assert!(check_well_typed(&m.problem).is_empty());
        prop_assert_eq!(m.problem.level(), Level::Mono);
        for inst in &m.instances {
            let src = p.formulas.iter().find(|n| n.name == inst.source).unwrap();
            prop_assert!(inst.subst.is_ground());
            prop_assert!(instantiate(&src.formula, &inst.subst).is_type_ground());
        }
        let again = monomorphise(&p, &cfg).unwrap();
        prop_assert_eq!(polyenc::tptp::print(&again.problem), polyenc::tptp::print(&m.problem));
    }
}
