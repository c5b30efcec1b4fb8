use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graph_mend_bench::*;
use graph_mend_core::{
    condition::satisfies_constraint,
    emf::{complete_with, completion_plan},
    graph::enumerate_morphisms,
    petri,
    program::{execute, ExecOptions},
    repair::synthesize_legit,
    Condition, LocatedGraph, SynthesisOptions,
};

fn matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("matching");
    for n in [10, 40, 160] {
        let host = token_ring(n);
        group.bench_with_input(BenchmarkId::new("two containers", n), &host, |b, host| {
            b.iter(|| enumerate_morphisms(black_box(&two_containers()), host).len())
        });
        group.bench_with_input(BenchmarkId::new("satisfies", n), &host, |b, host| {
            b.iter(|| satisfies_constraint(host, black_box(&every_place_has_token())))
        });
    }
    group.finish();
}

fn synthesis(c: &mut Criterion) {
    let tg = petri::type_graph();
    let opts = SynthesisOptions::default().with_type_graph(tg.clone());
    let conj = Condition::and([one_container(), every_place_has_token()]);
    c.bench_function("synthesize every place has a token", |b| {
        b.iter(|| synthesize_legit(black_box(&every_place_has_token()), &opts).unwrap())
    });
    c.bench_function("synthesize conjunction", |b| {
        b.iter(|| synthesize_legit(black_box(&conj), &opts).unwrap())
    });
    let mut group = c.benchmark_group("completion plan");
    group.sample_size(10);
    for k in [1, 2, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| completion_plan(&tg, k).unwrap())
        });
    }
    group.finish();
}

fn execution(c: &mut Criterion) {
    let opts = SynthesisOptions::default().with_type_graph(petri::type_graph());
    let conj = Condition::and([one_container(), every_place_has_token()]);
    let plan = synthesize_legit(&conj, &opts).unwrap();
    let mut group = c.benchmark_group("repair");
    for n in [10, 40] {
        let g = token_ring(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| {
                execute(
                    &plan.program,
                    LocatedGraph::unmarked(g.clone()),
                    &ExecOptions::default(),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn emf(c: &mut Criterion) {
    let tg = petri::type_graph();
    let plan = completion_plan(&tg, 6).unwrap();
    let graphs = random_graphs(7, 50, 6, 10);
    c.bench_function("emf complete 50 graphs", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(complete_with(&plan, g, &ExecOptions::default()).unwrap());
            }
        })
    });
}

criterion_group!(benches, matching, synthesis, execution, emf);
criterion_main!(benches);
