use polyenc::monomorph::{monomorphise, MonoConfig};
use polyenc::syntax::Level;
use polyenc::tptp;

fn load(name: &str) -> polyenc::syntax::Problem {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    tptp::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn lists_instantiate_at_w() {
    let m = monomorphise(&load("lists.p"), &MonoConfig::default()).unwrap();
    assert_eq!(m.problem.level(), Level::Mono);
    let expected = load("lists_mono.p");
    println!("{}", tptp::print(&m.problem));
    assert!(tptp::problems_alpha_eq(&m.problem, &expected, false));
    assert!(m.stats.dropped.is_empty());
    assert_eq!(m.stats.new_formulas, 3);
}

#[test]
fn monomorphic_input_is_kept() {
    let p = load("lists_mono.p");
    let m = monomorphise(&p, &MonoConfig::default()).unwrap();
    assert!(tptp::problems_alpha_eq(&m.problem, &p, false));
    assert_eq!(m.stats.new_formulas, 0);
    assert_eq!(m.stats.mono_formulas, 4);
}

#[test]
fn output_is_deterministic() {
    let p = load("lists.p");
    let a = tptp::print(&monomorphise(&p, &MonoConfig::default()).unwrap().problem);
    let b = tptp::print(&monomorphise(&p, &MonoConfig::default()).unwrap().problem);
    assert_eq!(a, b);
}

// Each round wraps one more `list` around the seed type.
const NESTING: &str = "
tff(l, type, list: $tType > $tType).
tff(w, type, w: $tType).
tff(s, type, single: !>[A: $tType]: (A > list(A))).
tff(p, type, p: !>[A: $tType]: (A > $o)).
tff(c, type, c: w).
tff(seed, axiom, p(w, c)).
tff(ax, axiom, ![A: $tType, X: A]: (p(A, X) => p(list(A), single(A, X)))).
";

#[test]
fn rounds_bound_instantiation_depth() {
    let p = tptp::parse(NESTING).unwrap();
    for k in 1..=4 {
        let m = monomorphise(&p, &MonoConfig { iterations: k, budget: 200 }).unwrap();
        assert_eq!(m.stats.rounds, k);
        assert_eq!(m.stats.new_formulas, k, "K = {k}");
    }
}

#[test]
fn budget_caps_new_formulas() {
    let p = tptp::parse(NESTING).unwrap();
    let m = monomorphise(&p, &MonoConfig { iterations: 6, budget: 2 }).unwrap();
    assert_eq!(m.stats.new_formulas, 2);
    assert_eq!(m.problem.formulas.len(), 3);
    assert!(m.stats.over_budget > 0);
}

#[test]
fn phantom_variables_take_pool_types() {
    let p = tptp::parse(
        "tff(w, type, w: $tType).
         tff(f, type, e: !>[A: $tType]: $o).
         tff(c, type, c: w).
         tff(q, type, q: w > $o).
         tff(a1, axiom, q(c)).
         tff(a2, axiom, ![A: $tType]: e(A)).",
    )
    .unwrap();
    let m = monomorphise(&p, &MonoConfig::default()).unwrap();
    assert_eq!(m.instances.len(), 1);
    assert!(m.stats.dropped.is_empty());
}

const NO_POOL: &str = "
tff(l, type, list: $tType > $tType).
tff(n, type, nil: !>[A: $tType]: list(A)).
tff(q, type, q: !>[A: $tType]: (list(A) > $o)).
tff(a, axiom, ![A: $tType]: q(A, nil(A))).
tff(b, axiom, ![A: $tType, X: list(A)]: (q(A, X) | X = nil(A))).
";

#[test]
fn empty_pool_falls_back_to_nullary_constructors() {
    let m = monomorphise(&tptp::parse(NO_POOL).unwrap(), &MonoConfig::default()).unwrap();
    assert!(m.stats.dropped.is_empty());
    assert!(m.instances.iter().all(|i| i.subst.get("A") == Some(&polyenc::syntax::Type::iota())));
}

#[test]
fn instances_at_builtin_types_print_as_valid_words() {
    let m = monomorphise(&load("linorder.p"), &MonoConfig::default()).unwrap();
    let text = tptp::print(&m.problem);
    assert!(text.contains("less_eq_i(X, Y)"), "{text}");
    let back = tptp::parse(&text).unwrap();
    assert!(tptp::problems_alpha_eq(&m.problem, &back, true));
}

#[test]
fn zero_budget_drops_polymorphic_formulas() {
    let m = monomorphise(&tptp::parse(NO_POOL).unwrap(), &MonoConfig { iterations: 3, budget: 0 }).unwrap();
    assert_eq!(m.stats.dropped, vec!["a".to_string(), "b".to_string()]);
    assert!(m.problem.formulas.is_empty());
}

#[test]
fn outputs_are_well_typed_instances() {
    for src in [load("lists.p"), tptp::parse(NESTING).unwrap(), tptp::parse(NO_POOL).unwrap()] {
        let m = monomorphise(&src, &MonoConfig::default()).unwrap();
        assert!(polyenc::typing::check_well_typed(&m.problem).is_empty());
        assert!(m.problem.formulas.len() <= src.formulas.len() + 200);
        for inst in &m.instances {
            let f = &src.formulas.iter().find(|n| n.name == inst.source).unwrap().formula;
            let ground = polyenc::subst::instantiate(f, &inst.subst);
            assert!(ground.is_type_ground());
        }
    }
}
