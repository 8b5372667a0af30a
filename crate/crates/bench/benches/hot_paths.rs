use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use mixer_core::distance::{
    bfs_ball, bfs_distance, transposition_word, upper_bound_word, BfsLimits,
};
use mixer_core::experiments::random_permutation;
use mixer_core::sim::{exact_visit_law, run_trajectory, ChainState};
use mixer_core::{MixerElement, SitePermutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chain_steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain");
    let steps = 1u64 << 16;
    group.throughput(Throughput::Elements(steps));
    group.bench_function("step_64k", |b| {
        b.iter_batched(
            || ChainState::new(7),
            |mut chain| {
                for _ in 0..steps {
                    chain.step();
                }
                chain.displacement()
            },
            BatchSize::SmallInput,
        )
    });
    group.bench_function("trajectory_64k_4_probes", |b| {
        b.iter(|| {
            run_trajectory(
                steps,
                black_box(&[0, 1, 4, 16]),
                &[1 << 10, 1 << 13, steps],
                7,
            )
            .unwrap()
        })
    });
    group.finish();
}

fn bfs(c: &mut Criterion) {
    let limits = BfsLimits::default();
    let mut group = c.benchmark_group("bfs");
    group.sample_size(10);
    group.bench_function("ball_radius_7", |b| {
        b.iter(|| bfs_ball(black_box(7), &limits).unwrap().len())
    });
    let target = MixerElement::new(0, SitePermutation::transposition(0, 2));
    group.bench_function("distance_of_swap_0_2", |b| {
        b.iter(|| bfs_distance(black_box(&target), 8, &limits).unwrap())
    });
    group.finish();
}

fn words(c: &mut Criterion) {
    let mut group = c.benchmark_group("words");
    group.bench_function("transposition_h64", |b| {
        b.iter(|| transposition_word(black_box(64)).unwrap().len())
    });
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let perms: Vec<SitePermutation> = (0..64).map(|_| random_permutation(&mut rng, 32)).collect();
    group.bench_function("upper_bound_word_support_32", |b| {
        b.iter(|| {
            perms
                .iter()
                .map(|p| upper_bound_word(5, p).unwrap().len())
                .sum::<usize>()
        })
    });
    group.finish();
}

fn exact_laws(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    group.bench_function("visit_law_t1024", |b| {
        b.iter(|| exact_visit_law(black_box(0), 1024, 300).unwrap())
    });
    group.finish();
}

criterion_group!(benches, chain_steps, bfs, words, exact_laws);
criterion_main!(benches);
