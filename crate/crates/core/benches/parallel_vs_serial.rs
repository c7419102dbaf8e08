//! Rayon dispatch against the sequential reference paths.
//!
//! Built with default features, `dispatch` rows run on the rayon pool and
//! `serial` rows on the always-available reference implementations. To
//! compare whole-pipeline numbers across feature configurations, save a
//! baseline and rerun without the flag:
//!
//! ```text
//! cargo bench -p groverlab -- --save-baseline parallel
//! cargo bench -p groverlab --no-default-features -- --baseline parallel
//! ```

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use groverlab::{drift_audit, mix_conditionals, mix_conditionals_serial, ConditionalEnsemble};

fn bench_mix(c: &mut Criterion) {
    let mut group = c.benchmark_group("mix_conditionals");
    for &n in &[64usize, 256] {
        let mut ensemble = ConditionalEnsemble::initial(n).unwrap();
        ensemble.advance_to(3).unwrap();
        let real_states = ensemble.states().to_vec();
        // a fractional oracle call makes the amplitudes complex, which is
        // the expensive assembly route
        let complex_states = ensemble.fractional_snapshot(0.5).unwrap();

        group.bench_with_input(
            BenchmarkId::new("real/dispatch", n),
            &real_states,
            |b, s| b.iter(|| mix_conditionals(s).unwrap()),
        );
        group.bench_with_input(BenchmarkId::new("real/serial", n), &real_states, |b, s| {
            b.iter(|| mix_conditionals_serial(s).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("complex/dispatch", n),
            &complex_states,
            |b, s| b.iter(|| mix_conditionals(s).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("complex/serial", n),
            &complex_states,
            |b, s| b.iter(|| mix_conditionals_serial(s).unwrap()),
        );
    }
    group.finish();
}

fn bench_grover_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("grover_step_all_targets");
    for &n in &[256usize, 1024] {
        let ensemble = ConditionalEnsemble::initial(n).unwrap();
        group.bench_with_input(BenchmarkId::new("dispatch", n), &ensemble, |b, e| {
            b.iter_batched(
                || e.clone(),
                |mut ensemble| ensemble.advance(),
                BatchSize::SmallInput,
            )
        });
        group.bench_with_input(BenchmarkId::new("serial", n), &ensemble, |b, e| {
            b.iter_batched(
                || e.states().to_vec(),
                |mut states| {
                    for state in &mut states {
                        state.grover_iterate();
                    }
                    states
                },
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_drift_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("drift_audit");
    group.sample_size(10);
    for &n in &[32usize, 64] {
        group.bench_with_input(BenchmarkId::new("one_step_grid8", n), &n, |b, &n| {
            b.iter(|| drift_audit(n, 1, 8).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_mix, bench_grover_step, bench_drift_pipeline);
criterion_main!(benches);
