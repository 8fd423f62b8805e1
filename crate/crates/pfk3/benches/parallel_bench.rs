//! Compares the rayon-backed batch paths against the sequential
//! fallback on the two hot batch workloads: Pfaffian evaluation and
//! fiber evaluation over a shared instance.
//!
//! Run with `cargo bench` (with the default `parallel` feature) and with
//! `cargo bench --no-default-features` to compare; `seq` groups measure
//! the sequential closure in the same build.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use pfk3::config::Budget;
use pfk3::construction::{point_on_y, sample_instance};
use pfk3::correspondence::fiber_over_y;
use pfk3::exactmath::skew::SkewForm;
use pfk3::parallel::{par_map, seq_map};
use pfk3::SplitMix64;

const P: u64 = 32003;

fn pfaffian_batch(c: &mut Criterion) {
    let mut rng = SplitMix64::new(17);
    let forms: Vec<SkewForm> = (0..1000).map(|_| SkewForm::random(6, P, &mut rng)).collect();
    let mut group = c.benchmark_group("pfaffian_batch_1000");
    group.sample_size(20);
    group.bench_function("par", |b| {
        b.iter_batched(
            || forms.clone(),
            |fs| par_map(&fs, |f| f.pfaffian()),
            BatchSize::LargeInput,
        )
    });
    group.bench_function("seq", |b| {
        b.iter_batched(
            || forms.clone(),
            |fs| seq_map(&fs, |f| f.pfaffian()),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

fn fiber_batch(c: &mut Criterion) {
    let budget = Budget::default();
    let inst = sample_instance(1, P, &budget).expect("seed 1 certifies");
    let ys: Vec<Vec<pfk3::Fp>> = (0..2)
        .map(|i| point_on_y(&inst, 4000 + i).expect("point on Y"))
        .collect();
    let mut group = c.benchmark_group("fiber_over_y_batch_2");
    group.sample_size(10);
    group.bench_function("par", |b| {
        b.iter(|| {
            par_map(&ys, |y| {
                fiber_over_y(&inst, y, &budget).expect("generic fiber").length
            })
        })
    });
    group.bench_function("seq", |b| {
        b.iter(|| {
            seq_map(&ys, |y| {
                fiber_over_y(&inst, y, &budget).expect("generic fiber").length
            })
        })
    });
    group.finish();
}

criterion_group!(benches, pfaffian_batch, fiber_batch);
criterion_main!(benches);
