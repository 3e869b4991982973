use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use subtree_stats::experiment::{self, ExperimentSpec, Family, Mode};
use subtree_stats::profile::ball_distribution_with;
use subtree_stats::verify::{self, check_corpus};
use subtree_stats::{analyze_rooted, families, Exec, Tree};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn profiles(c: &mut Criterion) {
    let t = families::random_tree(20_000, 5).unwrap();
    let mut group = c.benchmark_group("ball_distribution");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 3), &3, |b, &r| b.iter(|| ball_distribution_with(&t, r, exec)));
    }
    group.finish();
}

fn invariants(c: &mut Criterion) {
    let corpus = verify::random_corpus(60, 30, 1);
    let analyzer = |t: &Tree, root: usize| analyze_rooted(t, root);
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| check_corpus(&corpus, 10, exec, &analyzer)));
    }
    group.finish();
}

fn convergence(c: &mut Criterion) {
    let spec =
        ExperimentSpec { family: Family::Comb, start: 50, end: 400, step: 50, mode: Mode::Exact, radii: vec![1, 2] };
    let mut group = c.benchmark_group("converge");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| experiment::run(&spec, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, profiles, invariants, convergence);
criterion_main!(benches);
