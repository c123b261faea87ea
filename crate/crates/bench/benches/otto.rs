use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use otto_spin_core::optimize::{find_minima, OptimizationProblem};
use otto_spin_core::regimes::{region_map, CaseFamily, Window};
use otto_spin_core::{analyze, CycleSpec, Spectrum};

fn thermal(c: &mut Criterion) {
    let s = Spectrum::new(0.3, 1.7, 0.9).unwrap();
    c.bench_function("thermal_state", |b| {
        b.iter(|| black_box(&s).thermal_state(black_box(1.3)).unwrap())
    });
}

fn cycle(c: &mut Criterion) {
    let cyc = CycleSpec::new(
        Spectrum::new(0.2, 1.1, 0.4).unwrap(),
        Spectrum::new(0.5, 2.3, 0.8).unwrap(),
        1.0,
        2.0,
    )
    .unwrap();
    c.bench_function("analyze", |b| {
        b.iter(|| analyze(black_box(&cyc), 1e-9).unwrap())
    });
}

fn maps(c: &mut Criterion) {
    let fam = CaseFamily::Jz {
        r1: 0.7,
        r2: 2.0,
        tc: 1.0,
        th: 1.5,
    };
    let w = Window::square(-3.0, 3.0).unwrap();
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    g.bench_function("region_map_128", |b| {
        b.iter(|| region_map(&fam, &w, 128, 128, 1e-9).unwrap())
    });
    let p = OptimizationProblem::new(
        CaseFamily::ThreeLevel { tc: 1.0, th: 2.0 },
        Window::square(0.0, 8.0).unwrap(),
    );
    g.bench_function("find_minima_three_level", |b| {
        b.iter(|| find_minima(&p).unwrap())
    });
    g.finish();
}

criterion_group!(benches, thermal, cycle, maps);
criterion_main!(benches);
