use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use looprate_bench::{square_patch, square_patch_embedded};
use looprate_core::families;
use looprate_core::forests::{fk_ratio, level_variance};
use looprate_core::lattice::{builtin, limit_check, table_row, BUILTIN_NAMES};
use looprate_core::looping::loop_stats;
use looprate_core::numerics::rational;
use looprate_core::sampler::{estimate_edge_probabilities, estimate_looping};
use looprate_core::sandpile::{level_stats, Sandpile};
use looprate_core::Rational;

fn exact(c: &mut Criterion) {
    let grid = families::grid_embedded(4, 4);
    c.bench_function("loop_stats rational 4x4 grid", |b| b.iter(|| loop_stats::<Rational>(black_box(&grid)).unwrap()));
    let wheel = families::wheel(6);
    c.bench_function("F3/F1 rational W6", |b| b.iter(|| fk_ratio::<Rational>(black_box(&wheel), 3).unwrap()));
    let patch = square_patch_embedded(6);
    c.bench_function("level variance rational wired 6x6", |b| b.iter(|| level_variance::<Rational>(black_box(&patch)).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let one = rational(1, 1);
    let specs: Vec<_> = BUILTIN_NAMES.iter().map(|n| builtin(n).unwrap()).collect();
    c.bench_function("table all lattices", |b| b.iter(|| specs.iter().map(|s| table_row(s, &one).unwrap()).collect::<Vec<_>>()));
    let sq = builtin("square").unwrap();
    c.bench_function("limit_check square n=32", |b| b.iter(|| limit_check(&sq, 32, &one, 1e-10).unwrap()));
}

fn sampling(c: &mut Criterion) {
    let p = square_patch(8);
    c.bench_function("wilson 1000 trees wired 8x8", |b| {
        b.iter(|| estimate_edge_probabilities(&p.graph, p.sink(), 1000, 1))
    });
    let k3 = families::complete(3);
    c.bench_function("crst 1e5 steps K3", |b| b.iter(|| estimate_looping(&k3, 100_000, 1).unwrap()));
}

fn sandpile(c: &mut Criterion) {
    let p = square_patch(3);
    let pile = Sandpile::new(&p.graph).unwrap();
    let mut group = c.benchmark_group("sandpile");
    group.sample_size(10);
    group.bench_function("level_stats wired 3x3", |b| b.iter(|| level_stats(black_box(&pile)).unwrap()));
    group.finish();
}

criterion_group!(benches, exact, lattice, sampling, sandpile);
criterion_main!(benches);
