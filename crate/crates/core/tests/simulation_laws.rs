use mixer_core::sim::{
    exact_visit_law, lazy_walk, run_trajectory, simple_walk_local_times, ChainState, SeedStream,
};
use mixer_core::stats::{goodness_of_fit, two_sample_ks, Moments};
use mixer_core::Generator;

#[test]
fn generators_are_drawn_uniformly() {
    let mut chain = ChainState::new(11);
    let mut counts = [0u64; 4];
    let n = 1_000_000;
    for _ in 0..n {
        let u = chain.step();
        counts[Generator::ALL.iter().position(|&g| g == u).unwrap()] += 1;
    }
    for c in counts {
        let f = c as f64 / n as f64;
        assert!((f - 0.25).abs() < 0.005, "frequency {f}");
    }
    assert!(chain.is_consistent());
}

#[test]
fn lazy_walk_matches_simple_walk_at_even_times() {
    let t = 512;
    let seeds = SeedStream::new(3);
    let lazy: Vec<i64> = (0..4000)
        .map(|i| 2 * lazy_walk(t, seeds.child(1).seed(i))[t as usize])
        .collect();
    let simple: Vec<i64> = (0..4000)
        .map(|i| simple_walk_local_times(2 * t, &[], &[2 * t], seeds.child(2).seed(i))[0].value)
        .collect();
    let ks = two_sample_ks(&lazy, &simple);
    assert!(ks.p_value > 1e-3, "KS p = {}", ks.p_value);
}

#[test]
fn local_time_scales_like_quarter_power() {
    let grid = [1u64 << 10, 1 << 12, 1 << 14];
    let seeds = SeedStream::new(5);
    let mut m: Vec<Moments> = vec![Moments::default(); grid.len()];
    for i in 0..4000 {
        for (s, mom) in simple_walk_local_times(grid[2], &[0], &grid, seeds.seed(i))
            .iter()
            .zip(&mut m)
        {
            mom.push((s.local_times[0] as f64).sqrt());
        }
    }
    let ratios: Vec<f64> = grid
        .iter()
        .zip(&m)
        .map(|(&t, mom)| mom.mean() / (t as f64).powf(0.25))
        .collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 1.1, "ratios {ratios:?}");
}

#[test]
fn visit_counts_follow_the_exact_law() {
    let t = 32;
    let cap = 12;
    for z in [0i64, 1, 3] {
        let law = exact_visit_law(z, t, cap).unwrap();
        let mut observed = vec![0u64; cap + 1];
        let seeds = SeedStream::new(17).child(z as u64);
        for i in 0..20_000 {
            let rec = run_trajectory(t, &[z], &[t], seeds.seed(i)).unwrap();
            let v = rec.checkpoints[0].probes[0].visits as usize;
            observed[v.min(cap)] += 1;
        }
        // Merge sparse cells so every expected count is at least 5.
        let (mut obs, mut probs) = (Vec::new(), Vec::new());
        let (mut o_acc, mut p_acc) = (0u64, 0.0);
        for (&o, &p) in observed.iter().zip(&law) {
            o_acc += o;
            p_acc += p;
            if p_acc * 20_000.0 >= 5.0 {
                obs.push(o_acc);
                probs.push(p_acc);
                (o_acc, p_acc) = (0, 0.0);
            }
        }
        if let (Some(o), Some(p)) = (obs.last_mut(), probs.last_mut()) {
            *o += o_acc;
            *p += p_acc;
        }
        let gof = goodness_of_fit(&obs, &probs);
        assert!(gof.p_value > 1e-4, "z = {z}: p = {}", gof.p_value);
    }
}
