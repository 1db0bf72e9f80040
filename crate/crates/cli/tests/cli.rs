use polyenc::tptp::{alpha_eq, parse_output};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus")).join(name)
}

fn polyenc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyenc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Parses both texts and compares formula by formula up to bound-variable renaming.
fn assert_same_problem(got: &str, golden: &Path) {
    let got = parse_output(got).unwrap();
    let want = parse_output(&std::fs::read_to_string(golden).unwrap()).unwrap();
    assert_eq!(got.formulas.len(), want.formulas.len());
    for (g, w) in got.formulas.iter().zip(&want.formulas) {
        assert_eq!(g.role, w.role, "{}", g.name);
        assert!(alpha_eq(&g.formula, &w.formula), "{} differs from {}", g.name, w.name);
    }
}

#[test]
fn help_documents_the_scheme_table() {
    let o = polyenc(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for row in ["g_qq     g??, a^full, e", "t        t, a^phan, e", "t_q      t?, e", "With --mono"] {
        assert!(text.contains(row), "{row} missing from\n{text}");
    }
}

#[test]
fn analyze_prints_verdicts_with_reasons() {
    let o = polyenc(&["analyze", "--brief", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "banana: monotonic (no naked); monkey: nonmonotonic (naked M1 in ax3)");

    let o = polyenc(&["analyze", "--brief", "--infinite-types", "list(A)", "--type", "list(A);A", path(&corpus("lists.p"))]);
    let text = stdout(&o);
    assert!(text.starts_with("list(A): monotonic (infinite); A: nonmonotonic"), "{text}");

    let o = polyenc(&["analyze", "--infinite-types", "list(A)", path(&corpus("lists.p"))]);
    let text = stdout(&o);
    for section in ["verdicts:", "naked variables:", "undercover variables:", "covers:", "type arguments:"] {
        assert!(text.contains(section), "{section} missing from\n{text}");
    }
}

#[test]
fn analyze_of_an_empty_problem_finds_everything_monotonic() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.p");
    std::fs::write(&file, "tff(w_type, type, w: $tType).\n").unwrap();
    let o = polyenc(&["analyze", "--brief", "--type", "w;list(A)", path(&file)]);
    assert_eq!(stdout(&o).trim(), "w: monotonic (no naked); list(A): monotonic (no naked)");
}

#[test]
fn encode_reproduces_golden_files() {
    let o = polyenc(&["encode", "--scheme", "g_qq", "--infinite-types", "list(A)", path(&corpus("lists.p"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("fof("));
    assert_same_problem(&stdout(&o), &corpus("golden/lists.g_qq.p"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.p");
    let o = polyenc(&[
        "encode",
        "--scheme",
        "t_q",
        "--mono",
        "--infinite-types",
        "list_w",
        "-o",
        path(&out),
        path(&corpus("lists_mono.p")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_same_problem(&std::fs::read_to_string(&out).unwrap(), &corpus("golden/lists_mono.t_q.p"));
}

#[test]
fn provenance_sidecar_maps_outputs_to_sources() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("prov.json");
    let o = polyenc(&[
        "encode",
        "--scheme",
        "g_qq",
        "--mono",
        "--infinite-types",
        "list(A)",
        "--emit-provenance",
        path(&side),
        path(&corpus("lists.p")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&side).unwrap()).unwrap();
    let map = json.as_object().unwrap();
    assert_eq!(map["f_0"]["source"], "ax1");
    assert_eq!(map["f_0"]["types"]["A"], "w");
    assert!(map.values().any(|v| v.get("axiom").is_some()));
    // Every printed formula has an entry.
    let printed = parse_output(&stdout(&o)).unwrap();
    for n in &printed.formulas {
        assert!(map.contains_key(&n.name), "{} has no provenance", n.name);
    }
}

#[test]
fn encoding_untyped_input_is_a_user_error() {
    let o = polyenc(&["encode", "--scheme", "e", path(&corpus("golden/monkey.e.p"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("already untyped"), "{}", stderr(&o));
}

#[test]
fn bad_input_exits_with_one() {
    let o = polyenc(&["encode", "--scheme", "nope", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("valid schemes: e, a"), "{}", stderr(&o));

    let o = polyenc(&["encode", "--scheme", "t", "--mono", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.p");
    std::fs::write(&file, "tff(a, axiom, p(").unwrap();
    let o = polyenc(&["encode", "--scheme", "g", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("syntax error"), "{}", stderr(&o));

    let o = polyenc(&["encode", "--scheme", "g", path(&dir.path().join("missing.p"))]);
    assert_eq!(o.status.code(), Some(1));

    let o = polyenc(&["check", "--expect", "maybe", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(1));

    let o = polyenc(&["encode", "--scheme", "g", "--to", "tff0", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(1), "FOF output cannot be printed as TFF0");
}

#[test]
fn check_confirms_corpus_statuses() {
    let o = polyenc(&["check", "--expect", "sat:3", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("pass: model with 3 elements"));

    let o = polyenc(&["check", "--expect", "unsat", "--scheme", "g_qq", "--infinite-types", "list(A)", path(&corpus("lists.p"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("pass: refuted"));

    let o = polyenc(&["check", "--expect", "sat:2", "--scheme", "e", path(&corpus("qf.p"))]);
    assert_eq!(o.status.code(), Some(1), "erasure makes q/f unsatisfiable: {}", stdout(&o));
    assert!(stdout(&o).starts_with("fail: refuted"));

    let o = polyenc(&["check", "--expect", "sat:3", "--steps", "200", "--scheme", "e", path(&corpus("monkey.p"))]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("inconclusive"));
}

#[test]
fn encode_then_check_agrees_with_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [("lists_mono.p", "list_w", "unsat"), ("qf.p", "", "sat:2"), ("linorder.p", "", "sat:2")];
    for (file, inf, expect) in cases {
        for scheme in ["t", "g", "t_at", "g_at", "t_q", "t_qq", "g_q", "g_qq"] {
            let out = dir.path().join(format!("{file}.{scheme}"));
            let o = polyenc(&["encode", "--scheme", scheme, "--infinite-types", inf, "-o", path(&out), path(&corpus(file))]);
            assert_eq!(o.status.code(), Some(0), "{file} {scheme}: {}", stderr(&o));
            let bound = if expect == "unsat" { expect.to_string() } else { "sat:4".to_string() };
            let o = polyenc(&["check", "--expect", &bound, path(&out)]);
            assert_eq!(o.status.code(), Some(0), "{file} {scheme}: {}", stdout(&o));
        }
    }
}

#[test]
fn monomorphise_reports_rounds_and_dropped_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("poly.p");
    std::fs::write(
        &file,
        "tff(list_type, type, list: $tType > $tType).
         tff(w_type, type, w: $tType).
         tff(nil_decl, type, nil: !>[A: $tType]: list(A)).
         tff(p_decl, type, p: !>[A: $tType]: list(A) > $o).
         tff(q_decl, type, q: !>[A: $tType]: A > $o).
         tff(ax1, axiom, p(w, nil(w))).
         tff(ax2, axiom, ![A: $tType]: p(A, nil(A))).
         tff(ax3, axiom, ![A: $tType, X: A]: q(A, X)).",
    )
    .unwrap();
    let o = polyenc(&["monomorphise", "--report-dropped", path(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("ax2_w, axiom, p_w(nil_w)"), "{}", stdout(&o));
    assert!(stderr(&o).starts_with("2 rounds"), "{}", stderr(&o));
    assert!(!stderr(&o).contains("dropped"), "{}", stderr(&o));
    // Without a budget no polymorphic formula survives.
    let o = polyenc(&["monomorphise", "--report-dropped", "--mono-budget", "0", path(&file)]);
    assert!(stderr(&o).contains("dropped: ax2\ndropped: ax3"), "{}", stderr(&o));
}

#[test]
fn stats_prints_four_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("empty.p");
    std::fs::write(&file, "").unwrap();
    let o = polyenc(&["stats", path(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "clauses: 0\nliterals per clause: 0.0\nsymbols per atom: 0.0\nsymbols: 0\n");

    let symbols = |scheme: &str| -> usize {
        let o = polyenc(&["stats", "--scheme", scheme, "--infinite-types", "list_w", path(&corpus("lists_mono.p"))]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = stdout(&o);
        text.lines().find_map(|l| l.strip_prefix("symbols: ")).unwrap().parse().unwrap()
    };
    assert!(symbols("g") >= symbols("g_qq"));
    let per_atom = |scheme: &str| -> f64 {
        let o = polyenc(&["stats", "--scheme", scheme, path(&corpus("lists.p"))]);
        let text = stdout(&o);
        text.lines().find_map(|l| l.strip_prefix("symbols per atom: ")).unwrap().parse().unwrap()
    };
    assert!(per_atom("t") > per_atom("e"));
}
