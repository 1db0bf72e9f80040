//! Acceptance run: one line per criterion, then a single pass/fail verdict.
//!
//! Every check runs even when an earlier one fails, so the printed table is
//! always complete.

mod shared;

use polyenc::analysis::{infer_mono_monomorphic, infer_mono_polymorphic, verdict_line, AnalysisConfig, Reason};
use polyenc::corpus::load_manifest;
use polyenc::encode::{run_pipeline_mono, EncodedProblem, SchemeId};
use polyenc::gen::{problem_from_seed, GenConfig};
use polyenc::monomorph::{monomorphise, MonoConfig};
use polyenc::oracle::{clausify, find_model, refute, FiniteModel, Outcome, RefuteConfig};
use polyenc::stats::SizeStats;
use polyenc::syntax::{Level, Problem, Signature, Type};
use polyenc::tptp::{parse_output, print, print_as, problems_alpha_eq, Dialect};
use proptest::prelude::*;
use proptest::test_runner::TestRunner;
use shared::golden::{check_case, CASES};
use shared::invariants::*;
use shared::{corpus, entry, round_trip};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn encode(name: &str, scheme: &str, mono: bool) -> Result<EncodedProblem, String> {
    let e = entry(name);
    let scheme = SchemeId::parse(scheme, mono)?;
    let cfg = AnalysisConfig { inf: e.inf(), ..Default::default() };
    let p = e.problem().map_err(|err| err.to_string())?;
    run_pipeline_mono(&p, scheme, &cfg, &MonoConfig::default()).map(|(enc, _)| enc).map_err(|err| format!("{name} {scheme}: {err}"))
}

/// A model within `bound`, re-checked formula by formula.
fn verified_model(p: &Problem, bound: usize) -> Result<FiniteModel, String> {
    let m = find_model(p, bound).map_err(|e| e.to_string())?.ok_or(format!("no model up to size {bound}"))?;
    if !m.satisfies(p).map_err(|e| e.to_string())? {
        return Err(format!("model fails evaluation:\n{m}"));
    }
    Ok(m)
}

fn refuted(p: &Problem) -> Result<usize, String> {
    match refute(&clausify(p).map_err(|e| e.to_string())?, &RefuteConfig::default()) {
        Outcome::Refuted { steps, .. } => Ok(steps),
        Outcome::GaveUp { steps, .. } => Err(format!("no refutation after {steps} steps")),
    }
}

fn erasure_is_unsound() -> Check {
    let qf = entry("qf").problem().unwrap();
    let m = verified_model(&qf, 2)?;
    let start = Instant::now();
    let steps = refuted(&encode("qf", "e", false)?.problem)?;
    let took = start.elapsed();
    if took >= Duration::from_secs(1) {
        return Err(format!("erased qf refuted in {took:?}, not under 1 s"));
    }
    let unit_steps = refuted(&encode("unit", "e", false)?.problem)?;
    Ok(format!(
        "qf has a {}-element model; erased qf refuted in {steps} steps ({took:?}); erased unit refuted in {unit_steps} steps",
        m.total_size()
    ))
}

fn sound_schemes_keep_models() -> Check {
    let monkey = entry("monkey").problem().unwrap();
    let m = verified_model(&monkey, 3)?;
    let mut sizes = vec![format!("typed {}", m.total_size())];
    for (scheme, mono) in [("g", false), ("g_at", false), ("g_q", true), ("g_qq", true)] {
        let start = Instant::now();
        let p = encode("monkey", scheme, mono)?.problem;
        let m = verified_model(&p, 4).map_err(|e| format!("{scheme}: {e}"))?;
        let took = start.elapsed();
        if took >= Duration::from_secs(30) {
            return Err(format!("{scheme} took {took:?}"));
        }
        sizes.push(format!("{scheme}{} {}", if mono { "~" } else { "" }, m.total_size()));
    }
    Ok(format!("model sizes: {}", sizes.join(", ")))
}

fn sound_schemes_refute_lists() -> Check {
    let mut schemes: Vec<SchemeId> = SchemeId::all().into_iter().filter(|s| s.is_sound()).collect();
    schemes.push(SchemeId::parse("e", false).unwrap());
    let mut worst = 0;
    for name in ["lists", "lists_mono"] {
        for &s in &schemes {
            let e = entry(name);
            let cfg = AnalysisConfig { inf: e.inf(), ..Default::default() };
            let (enc, _) = run_pipeline_mono(&e.problem().unwrap(), s, &cfg, &MonoConfig::default())
                .map_err(|err| format!("{name} {s}: {err}"))?;
            worst = worst.max(refuted(&enc.problem).map_err(|err| format!("{name} {s}: {err}"))?);
        }
    }
    Ok(format!("{} schemes on both list problems, at most {worst} steps", schemes.len()))
}

fn golden_listings() -> Check {
    let failures: Vec<String> =
        CASES.iter().filter_map(|&(src, scheme, mono)| check_case(src, scheme, mono).err()).collect();
    if failures.is_empty() {
        Ok(format!("{} listings match", CASES.len()))
    } else {
        Err(failures.join("\n"))
    }
}

fn exact_verdicts() -> Check {
    let list = |t: Type| Type::con("list", vec![t]);
    let mut lines = Vec::new();
    let monkey = entry("monkey");
    let v = infer_mono_monomorphic(&monkey.problem().unwrap(), &monkey.inf());
    let got = verdict_line(&[Type::atom("banana"), Type::atom("monkey")], &v);
    if !(v.verdict(&Type::atom("banana")) && !v.verdict(&Type::atom("monkey"))) {
        return Err(format!("monkey: {got}"));
    }
    lines.push(got);
    let mono = entry("lists_mono");
    let v = infer_mono_monomorphic(&mono.problem().unwrap(), &mono.inf());
    if v.reason(&Type::atom("list_w")) != Reason::Infinite || v.verdict(&Type::atom("w")) {
        return Err(format!("lists_mono: {}", verdict_line(&[Type::atom("list_w"), Type::atom("w")], &v)));
    }
    lines.push(verdict_line(&[Type::atom("list_w"), Type::atom("w")], &v));
    let poly = entry("lists");
    let v = infer_mono_polymorphic(&poly.problem().unwrap(), &poly.inf());
    let types = [list(Type::var("A")), Type::var("A"), Type::atom("w")];
    let want = [true, false, false];
    let got = verdict_line(&types, &v);
    if types.iter().map(|t| v.verdict(t)).ne(want) {
        return Err(format!("lists: {got}"));
    }
    lines.push(got);
    Ok(lines.join(" | "))
}

fn invariant_suites() -> Check {
    fn suite<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check
    where
        S::Value: std::fmt::Debug,
    {
        TestRunner::new(cases()).run(&strategy, test).map(|_| name.to_string()).map_err(|e| format!("{name}: {e}"))
    }
    let seeds = || (any::<u64>(), any::<u8>());
    let names = [
        suite("typing", seeds(), |(s, i)| stages_are_well_typed(s, i))?,
        suite("naked", seeds(), |(s, i)| tags_leave_no_naked_nonmonotonic(s, i))?,
        suite("guarded", seeds(), |(s, i)| guards_protect_nonmonotonic(s, i))?,
        suite("instances", (any::<u64>(), any::<u8>(), ty(), subst()), |(s, i, t, r)| {
            verdicts_closed_under_instances(s, i, t, r)
        })?,
        suite("caps", seeds(), |(s, i)| caps_incomparable_and_monotonic(s, i))?,
    ];
    Ok(format!("{} x {} cases: {}", names.len(), cases().cases, names.join(", ")))
}

fn monomorphisation_bounds() -> Check {
    let p = problem_from_seed(0, &GenConfig::corpus(500));
    let start = Instant::now();
    let m = monomorphise(&p, &MonoConfig::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let (n, rounds) = (m.problem.formulas.len(), m.stats.rounds);
    let detail = format!("{n} formulas, {rounds} rounds, {took:?}");
    if n <= 700 && rounds <= 3 && took < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn symbols(name: &str, scheme: &str, mono: bool) -> Result<usize, String> {
    let p = encode(name, scheme, mono)?.problem;
    SizeStats::of_problem(&p).map(|s| s.symbols).map_err(|e| format!("{name} {scheme}: {e}"))
}

/// Per problem the light and feather variants are never larger; over the
/// corpus they are strictly smaller. Mono variants beat their polymorphic
/// counterparts on every problem. Erasure is left out: its mono and poly
/// forms are the same translation.
fn size_directions() -> Check {
    let names: Vec<String> = load_manifest(corpus()).unwrap().iter().map(|e| e.name().to_string()).collect();
    let mut totals = [0usize; 4];
    for name in &names {
        let [t, tqq, g, gqq] =
            [("t", false), ("t_qq", false), ("g", false), ("g_qq", false)].map(|(s, m)| symbols(name, s, m));
        let row = [t?, tqq?, g?, gqq?];
        if row[0] < row[1] || row[2] < row[3] {
            return Err(format!("{name}: t {} t?? {} g {} g?? {}", row[0], row[1], row[2], row[3]));
        }
        for (total, n) in totals.iter_mut().zip(row) {
            *total += n;
        }
        for scheme in ["t_q", "t_qq", "g_q", "g_qq"] {
            let (mono, poly) = (symbols(name, scheme, true)?, symbols(name, scheme, false)?);
            if mono >= poly {
                return Err(format!("{name} {scheme}: mono {mono} vs poly {poly}"));
            }
        }
    }
    let [t, tqq, g, gqq] = totals;
    if t > tqq && g > gqq {
        Ok(format!("corpus totals t {t} > t?? {tqq}, g {g} > g?? {gqq}; mono below poly on all {} problems", names.len()))
    } else {
        Err(format!("corpus totals t {t} t?? {tqq} g {g} g?? {gqq}"))
    }
}

/// Every symbol of `sub` is declared identically in `sig`.
fn declared_alike(sub: &Signature, sig: &Signature) -> bool {
    sub.funs.iter().all(|(k, d)| sig.funs.get(k) == Some(d)) && sub.preds.iter().all(|(k, d)| sig.preds.get(k) == Some(d))
}

fn round_trips() -> Check {
    let entries = load_manifest(corpus()).unwrap();
    let mut outputs = 0;
    for e in &entries {
        let p = e.problem().unwrap();
        let q = round_trip(&p).map_err(|err| format!("{}: {err}", e.name()))?;
        if !problems_alpha_eq(&p, &q, true) {
            return Err(format!("{} changes on round trip", e.name()));
        }
        for (scheme, mono) in [("e", false), ("g_qq", false), ("t_q", true), ("g_qq", true)] {
            let enc = encode(&e.name(), scheme, mono)?;
            for (dialect, problem) in [(Dialect::Fof, &enc.problem), (Dialect::Tff0, &enc.source)] {
                if dialect == Dialect::Tff0 && problem.level() != Level::Mono {
                    continue;
                }
                let text = print_as(problem, dialect).map_err(|err| err.to_string())?;
                let back = parse_output(&text).map_err(|err| format!("{} {scheme}: {err}\n{text}", e.name()))?;
                // FOF carries no declarations, so unused symbols cannot come back.
                let same = if dialect == Dialect::Fof {
                    problems_alpha_eq(problem, &back, false) && declared_alike(&back.sig, &problem.sig)
                } else {
                    problems_alpha_eq(problem, &back, true)
                };
                if !same {
                    return Err(format!("{} {scheme} {dialect:?} output changes on re-parse", e.name()));
                }
                outputs += 1;
            }
        }
    }
    let levels = [Level::Poly, Level::Mono, Level::Untyped];
    for seed in 0..1000u64 {
        let level = levels[seed as usize % 3];
        let p = problem_from_seed(seed, &GenConfig::small(level));
        let q = round_trip(&p).map_err(|err| format!("{level} seed {seed}: {err}"))?;
        if !problems_alpha_eq(&p, &q, level != Level::Untyped) {
            return Err(format!("{level} seed {seed} changes on round trip\n{}", print(&p)));
        }
    }
    Ok(format!("{} corpus problems, {outputs} encoded outputs, 1000 generated problems", entries.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("erasure is unsound with equality", erasure_is_unsound),
        ("sound encodings of the monkey village have models", sound_schemes_keep_models),
        ("sound encodings of lists are refuted", sound_schemes_refute_lists),
        ("golden listings", golden_listings),
        ("exact monotonicity verdicts", exact_verdicts),
        ("invariant suites", invariant_suites),
        ("monomorphisation bounds", monomorphisation_bounds),
        ("size statistics direction", size_directions),
        ("round trips", round_trips),
    ];
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (verdict, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        // Written to stderr directly so the table shows up without --nocapture.
        let _ = writeln!(std::io::stderr(), "criterion {}: {verdict} {title} ({:.1?}): {detail}", i + 1, start.elapsed());
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
