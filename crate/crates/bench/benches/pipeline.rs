use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quditc_core::benchmarks;
use quditc_core::pipeline::{transpile, Options, Regime};
use quditc_core::qudit_opt::optimize_qudit;
use quditc_core::router::{route, TransitionGraph};

fn options(b: &benchmarks::Benchmark, regime: Regime, optimize: bool) -> Options {
    let opts = Options::regime(regime).optimized(optimize);
    match b.mapping(regime) {
        Some(m) => opts.with_mapping(m),
        None => opts,
    }
}

fn transpile_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("transpile");
    for b in benchmarks::suite() {
        for regime in Regime::ALL {
            let opts = options(&b, regime, true);
            group.bench_with_input(BenchmarkId::new(b.name.clone(), regime.name()), &opts, |bench, opts| {
                bench.iter(|| transpile(&b.qasm, &b.file_name(), opts).unwrap())
            });
        }
    }
    group.finish();
}

fn route_and_optimize(c: &mut Criterion) {
    let b = benchmarks::grover("0000");
    let t = transpile(&b.qasm, &b.file_name(), &options(&b, Regime::Ququart, false)).unwrap();
    let graph = TransitionGraph::star(4);
    c.bench_function("route grover0000 ququart", |bench| {
        bench.iter(|| route(&t.lowered, &graph).unwrap())
    });
    c.bench_function("optimize grover0000 ququart", |bench| {
        bench.iter(|| optimize_qudit(&t.routed))
    });
}

criterion_group!(benches, transpile_suite, route_and_optimize);
criterion_main!(benches);
