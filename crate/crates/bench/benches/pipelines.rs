use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyenc::analysis::{AnalysisConfig, InfRegistry};
use polyenc::encode::{run_pipeline, SchemeId};
use polyenc::gen::{problem_from_seed, GenConfig};
use polyenc::monomorph::{monomorphise, MonoConfig};
use polyenc::oracle::{clausify, find_model, refute, RefuteConfig};
use polyenc::syntax::{Problem, Type};
use polyenc::tptp::{parse, print};
use std::hint::black_box;

const LISTS: &str = include_str!("../../../corpus/lists.p");
const MONKEY: &str = include_str!("../../../corpus/monkey.p");

fn lists() -> (Problem, AnalysisConfig) {
    let inf = InfRegistry::new(vec![Type::con("list", vec![Type::var("A")])]);
    (parse(LISTS).unwrap(), AnalysisConfig { inf, ..Default::default() })
}

fn encode(c: &mut Criterion) {
    let (p, cfg) = lists();
    let mut group = c.benchmark_group("encode/lists");
    for id in SchemeId::all().into_iter().filter(|s| !s.mono) {
        group.bench_with_input(BenchmarkId::from_parameter(id), &id, |b, &id| {
            b.iter(|| run_pipeline(black_box(&p), id, &cfg).unwrap())
        });
    }
    group.finish();

    let big = problem_from_seed(7, &GenConfig::corpus(200));
    let m = monomorphise(&big, &MonoConfig::default()).unwrap().problem;
    let g_qq = SchemeId::parse("g_qq", true).unwrap();
    c.bench_function("encode/generated_200/g_qq_mono", |b| {
        b.iter(|| run_pipeline(black_box(&m), g_qq, &AnalysisConfig::default()).unwrap())
    });
}

fn monomorph(c: &mut Criterion) {
    let corpus = problem_from_seed(1, &GenConfig::corpus(500));
    let mut group = c.benchmark_group("monomorphise");
    group.sample_size(10);
    group.bench_function("generated_500", |b| b.iter(|| monomorphise(black_box(&corpus), &MonoConfig::default()).unwrap()));
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let (p, cfg) = lists();
    let encoded = run_pipeline(&p, SchemeId::parse("g_qq", false).unwrap(), &cfg).unwrap().problem;
    let clauses = clausify(&encoded).unwrap();
    c.bench_function("oracle/refute_lists_g_qq", |b| b.iter(|| refute(black_box(&clauses), &RefuteConfig::default())));

    let monkey = parse(MONKEY).unwrap();
    c.bench_function("oracle/find_model_monkey", |b| b.iter(|| find_model(black_box(&monkey), 3).unwrap()));
}

fn tptp(c: &mut Criterion) {
    let text = print(&problem_from_seed(3, &GenConfig::corpus(200)));
    c.bench_function("tptp/parse_generated_200", |b| b.iter(|| parse(black_box(&text)).unwrap()));
}

criterion_group!(benches, encode, monomorph, oracle, tptp);
criterion_main!(benches);
