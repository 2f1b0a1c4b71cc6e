use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rnamatch::synth::nested_structure;
use rnamatch::{
    align, derive_element_scores, phase1_pair_table, window_dp, AlignMode, ScoringScheme, Window,
};
use rnamatch_bench::unpaired;

/// Whole-structure pass on unpaired inputs (no phase-1 work).
fn bench_phase2(c: &mut Criterion) {
    let scheme = ScoringScheme::default();
    let mut group = c.benchmark_group("phase2_unpaired");
    for n in [200usize, 400, 800] {
        let r1 = unpaired(2, n);
        let r2 = unpaired(3, n);
        let scores = derive_element_scores(&scheme, &r1, &r2);
        let table = phase1_pair_table(&scores);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                window_dp(
                    &scores,
                    &table,
                    Window::full(r1.len()),
                    Window::full(r2.len()),
                    AlignMode::Fit,
                )
            })
        });
    }
    group.finish();
}

/// Inner-window table construction as the pair count grows.
fn bench_phase1(c: &mut Criterion) {
    let scheme = ScoringScheme::default();
    let mut group = c.benchmark_group("phase1_pairs");
    for k in [2usize, 4, 8] {
        let r1 = nested_structure("a", 240, k);
        let r2 = nested_structure("b", 240, k);
        let scores = derive_element_scores(&scheme, &r1, &r2);
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, _| {
            b.iter(|| phase1_pair_table(&scores))
        });
    }
    group.finish();
}

/// Full alignment including traceback.
fn bench_align(c: &mut Criterion) {
    let scheme = ScoringScheme::default();
    let r1 = nested_structure("a", 120, 6);
    let r2 = nested_structure("b", 150, 5);
    let mut group = c.benchmark_group("align");
    for mode in [AlignMode::Global, AlignMode::Fit, AlignMode::Local] {
        group.bench_with_input(BenchmarkId::from_parameter(mode), &mode, |b, &mode| {
            b.iter(|| align(&r1, &r2, mode, &scheme).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_phase2, bench_phase1, bench_align);
criterion_main!(benches);
