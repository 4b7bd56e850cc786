use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use labelspace::dynamics::disagreeable::is_space_disagreeable;
use labelspace::dynamics::Bounds;
use labelspace::generalized::signature_ids;
use labelspace::language::words_from;
use labelspace::par::{set_execution, Execution};
use labelspace::presentations::dyck::gen_dyck;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn refinement(c: &mut Criterion) {
    let win = gen_dyck(3, 4).unwrap();
    let mut group = c.benchmark_group("signature_ids/dyck3");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            set_execution(mode);
            b.iter(|| signature_ids(win.graph(), 4));
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let win = gen_dyck(2, 4).unwrap();
    let g = win.graph();
    let mut group = c.benchmark_group("words_from/dyck2");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            set_execution(mode);
            b.iter(|| words_from(g, &g.all_vertices(), 6).len());
        });
    }
    group.finish();
}

fn disagreeability(c: &mut Criterion) {
    let win = gen_dyck(2, 4).unwrap();
    let mut group = c.benchmark_group("disagreeable/dyck2");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            set_execution(mode);
            b.iter(|| is_space_disagreeable(&win, &Bounds::default()).unwrap().status);
        });
    }
    group.finish();
}

criterion_group!(benches, refinement, enumeration, disagreeability);
criterion_main!(benches);
