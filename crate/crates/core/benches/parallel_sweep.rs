//! Data-parallel vs sequential timing for the stability sweep.
//!
//! Run with `cargo bench -p qsc-core`; the `parallel` feature (default)
//! enables the rayon path, and the sequential fallback stays callable for a
//! direct comparison on the same build.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qsc_core::stability::{inequality_equivalence_check, inequality_equivalence_check_serial};

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("inequality_equivalence");
    for range in [8i64, 16, 24] {
        group.bench_function(format!("serial/range_{range}"), |b| {
            b.iter(|| inequality_equivalence_check_serial(black_box(range)))
        });
        group.bench_function(format!("default/range_{range}"), |b| {
            b.iter(|| inequality_equivalence_check(black_box(range)))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
