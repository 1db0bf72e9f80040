use polyenc::analysis::*;
use polyenc::corpus::{load_manifest, Entry};
use polyenc::subst::is_instance;
use polyenc::syntax::{Level, Problem, Signature, Type};
use polyenc::tptp::parse;
use std::path::Path;

fn entry(name: &str) -> Entry {
    let dir = Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"));
    load_manifest(dir).unwrap().into_iter().find(|e| e.name() == name).unwrap()
}

fn list(t: Type) -> Type {
    Type::con("list", vec![t])
}

fn verdicts(name: &str) -> (Problem, MonoVerdicts) {
    let e = entry(name);
    let p = e.problem().unwrap();
    let v = match p.level() {
        Level::Poly => infer_mono_polymorphic(&p, &e.inf()),
        _ => infer_mono_monomorphic(&p, &e.inf()),
    };
    (p, v)
}

#[test]
fn monkey_village_verdicts() {
    let (p, v) = verdicts("monkey");
    assert!(v.verdict(&Type::atom("banana")));
    assert!(!v.verdict(&Type::atom("monkey")));
    assert_eq!(
        verdict_line(&reported_types(&p), &v),
        "banana: monotonic (no naked); monkey: nonmonotonic (naked M1 in ax3)"
    );
}

#[test]
fn monomorphic_list_verdicts() {
    let (_, v) = verdicts("lists_mono");
    assert_eq!(v.reason(&Type::atom("list_w")), Reason::Infinite);
    assert!(!v.verdict(&Type::atom("w")));
}

#[test]
fn polymorphic_list_verdicts() {
    let (p, v) = verdicts("lists");
    let a = Type::var("A");
    assert!(v.verdict(&list(a.clone())));
    assert!(!v.verdict(&a));
    assert!(!v.verdict(&Type::atom("w")));
    let line = verdict_line(&[list(a.clone()), a], &v);
    assert!(line.starts_with("list(A): monotonic (infinite); A: nonmonotonic (naked "), "{line}");
    // Every reported type gets a verdict that agrees with the simplified check.
    for t in reported_types(&p) {
        assert_eq!(v.verdict(&t), v.jn_verdict(&t), "{t}");
    }
}

#[test]
fn without_naked_variables_everything_is_monotonic() {
    let empty = Problem::new(Signature::new(Level::Mono));
    let v = infer_mono_monomorphic(&empty, &InfRegistry::default());
    for t in [Type::atom("w"), Type::atom("monkey")] {
        assert_eq!(v.reason(&t), Reason::NoNaked);
    }
    let (_, v) = verdicts("linorder");
    assert!(v.naked.is_empty());
    assert!(v.verdict(&Type::var("A")));
}

#[test]
fn infinite_naked_type_covers_its_instances() {
    let p = parse(
        "tff(list_type, type, list: $tType > $tType).
         tff(w_type, type, w: $tType).
         tff(nil_decl, type, nil: !>[A: $tType]: list(A)).
         tff(ax, axiom, ![A: $tType, Xs: list(A)]: Xs = nil(A)).",
    )
    .unwrap();
    let inf = InfRegistry::new(vec![list(Type::var("A"))]);
    let v = infer_mono_polymorphic(&p, &inf);
    let deep = list(list(Type::atom("w")));
    assert!(is_instance(&deep, &list(Type::var("A"))));
    assert_eq!(v.reason(&deep), Reason::Infinite);
    assert!(v.verdict(&Type::atom("w")));
    let v = infer_mono_polymorphic(&p, &InfRegistry::default());
    assert!(!v.verdict(&deep));
}

#[test]
fn protect_extra_overrides_the_calculus() {
    let (p, _) = verdicts("monkey");
    let v = infer_mono_with(&p, &InfRegistry::default(), &[Type::atom("banana")]);
    assert_eq!(v.reason(&Type::atom("banana")), Reason::Protected(Type::atom("banana")));
    assert!(!v.jn_verdict(&Type::atom("banana")));
}

#[test]
fn monotonic_cap_of_lists() {
    let (p, v) = verdicts("lists");
    let u = compute_u(&p, &v);
    assert!(u.contains(&list(Type::var("A"))), "{u:?}");
    for t in &u {
        assert!(v.verdict(t), "{t}");
        assert!(u.iter().filter(|s| *s != t).all(|s| !is_instance(t, s)));
    }
    // Nothing nonmonotonic, nothing to cap.
    let lifted = entry("monkey").problem().unwrap().lifted_to_poly();
    let all_mono = infer_mono_polymorphic(&lifted, &InfRegistry::new(vec![Type::atom("monkey")]));
    assert!(compute_u(&lifted, &all_mono).is_empty());
}

#[test]
fn cap_minimize_examples() {
    let w = Type::atom("w");
    assert_eq!(cap_minimize(&[list(w.clone()), list(Type::var("A"))]), vec![list(Type::var("A"))]);
    assert_eq!(cap_minimize(&[w.clone(), Type::atom("b")]), vec![w, Type::atom("b")]);
}

#[test]
fn list_symbol_classes_and_covers() {
    let p = entry("lists").problem().unwrap();
    let classes = classify_args(&p.sig);
    assert_eq!(classes.get("cons").unwrap().inferable, [0].into());
    assert_eq!(classes.get("nil").unwrap().noninferable, [0].into());
    assert!(classes.get("nil").unwrap().phantom.is_empty());
    let covers = choose_covers(&p.sig, CoverPolicy::MinimalEarliest);
    assert_eq!(covers.get("cons").unwrap(), &[0].into());
    assert_eq!(covers.get("hd").unwrap(), &[0].into());
    assert!(covers.get("nil").unwrap().is_empty());
    let linorder = entry("linorder").problem().unwrap();
    let c = classify_args(&linorder.sig);
    assert_eq!(c.get("linorder").unwrap().phantom, [0].into());
}

#[test]
fn report_lists_every_section() {
    let e = entry("lists");
    let p = e.problem().unwrap();
    let a = analyze(&p, &AnalysisConfig { inf: e.inf(), ..Default::default() });
    let text = Report::new(&p, &a).to_string();
    for needle in ["verdicts:", "list(A): monotonic (infinite)", "naked variables:", "cons: {1}", "monotonic cap: list(A)"] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
}
