use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loopacc::accel::{analyze_dependencies, Technique};
use loopacc::{closed_form, run_strategy, Engine, Mode, Options, Solver, SolverConfig, Strategy};
use loopacc_bench::{its, loops, simple_loop, updates, CALCULUS, FOUR, T_LOOP};

fn engine() -> Engine {
    Engine::new(
        Solver::new(SolverConfig::default()).expect("SMT solver"),
        Strategy::Core,
    )
}

fn accelerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("accelerate");
    let mut e = engine();
    for (name, src) in [("t_loop", T_LOOP), ("calculus", CALCULUS)] {
        let t = simple_loop(src);
        g.bench_function(name, |b| b.iter(|| e.accelerate(black_box(&t)).unwrap()));
    }
    let t = simple_loop(FOUR);
    g.bench_function("prove_nonterm/four", |b| {
        b.iter(|| e.prove_nonterm(black_box(&t)).unwrap())
    });
    g.finish();
}

fn strategies(c: &mut Criterion) {
    let mut g = c.benchmark_group("analysis");
    g.sample_size(10);
    let mut solver = Solver::new(SolverConfig::default()).expect("SMT solver");
    for m in [2, 4, 8] {
        let ts = loops(m, 5, m as u64);
        for strategy in [Strategy::Core, Strategy::Naive] {
            let id = BenchmarkId::new(format!("{strategy:?}").to_lowercase(), m);
            g.bench_with_input(id, &ts, |b, ts| {
                b.iter(|| {
                    for t in ts {
                        let cf = closed_form(&t.update).ok();
                        analyze_dependencies(
                            &mut solver,
                            &t.guard,
                            &t.update,
                            cf.as_ref(),
                            &Technique::ALL,
                            strategy,
                        )
                        .unwrap();
                    }
                })
            });
        }
    }
    g.finish();
}

fn closed_forms(c: &mut Criterion) {
    let us = updates(3, 50, 1);
    c.bench_function("closed_form/50x3", |b| {
        b.iter(|| {
            us.iter()
                .filter(|a| closed_form(black_box(a)).is_ok())
                .count()
        })
    });
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    let mut e = engine();
    for (name, src, mode) in [
        ("t_loop", T_LOOP, Mode::Complexity),
        ("four", FOUR, Mode::NonTermination),
    ] {
        let its = its(src);
        let opts = Options {
            mode,
            ..Options::default()
        };
        g.bench_function(name, |b| {
            b.iter(|| run_strategy(black_box(&its), &mut e, opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, accelerate, strategies, closed_forms, pipeline);
criterion_main!(benches);
