//! Reference walks on Z used as comparison processes.

use serde::{Deserialize, Serialize};

use crate::algebra::Site;

use super::rng::BitSource;

/// Lazy walk: each step is −1 or +1 with probability 1/4 and 0 with
/// probability 1/2.
#[derive(Clone, Debug)]
pub struct LazyWalk {
    time: u64,
    value: Site,
    rng: BitSource,
}

impl LazyWalk {
    pub fn new(seed: u64) -> Self {
        Self {
            time: 0,
            value: 0,
            rng: BitSource::new(seed),
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn value(&self) -> Site {
        self.value
    }

    #[inline]
    pub fn step(&mut self) -> Site {
        let inc = match self.rng.two_bits() {
            0 => -1,
            1 => 1,
            _ => 0,
        };
        self.value += inc;
        self.time += 1;
        self.value
    }
}

/// `W_0, W_1, …, W_{t_max}`.
pub fn lazy_walk(t_max: u64, seed: u64) -> Vec<Site> {
    let mut w = LazyWalk::new(seed);
    std::iter::once(0)
        .chain((0..t_max).map(|_| w.step()))
        .collect()
}

/// Simple symmetric walk with exact local times `L_t(z)` at probed sites.
#[derive(Clone, Debug)]
pub struct SimpleWalk {
    time: u64,
    value: Site,
    probes: Vec<Site>,
    local_times: Vec<u64>,
    rng: BitSource,
}

impl SimpleWalk {
    pub fn new(probes: &[Site], seed: u64) -> Self {
        let local_times = probes.iter().map(|&z| u64::from(z == 0)).collect();
        Self {
            time: 0,
            value: 0,
            probes: probes.to_vec(),
            local_times,
            rng: BitSource::new(seed),
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn value(&self) -> Site {
        self.value
    }

    /// `L_t(z) = #{0 ≤ j ≤ t : S'_j = z}`, aligned with the probe list.
    pub fn local_times(&self) -> &[u64] {
        &self.local_times
    }

    #[inline]
    pub fn step(&mut self) -> Site {
        self.value += if self.rng.bit() { 1 } else { -1 };
        self.time += 1;
        for (z, l) in self.probes.iter().zip(self.local_times.iter_mut()) {
            if *z == self.value {
                *l += 1;
            }
        }
        self.value
    }
}

/// Snapshot of a simple walk at one checkpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTimeSnapshot {
    pub t: u64,
    pub value: Site,
    pub local_times: Vec<u64>,
}

/// Runs a simple walk to `t_max` and snapshots it at the given (increasing)
/// times.
pub fn simple_walk_local_times(
    t_max: u64,
    probes: &[Site],
    checkpoint_times: &[u64],
    seed: u64,
) -> Vec<LocalTimeSnapshot> {
    let mut walk = SimpleWalk::new(probes, seed);
    let mut out = Vec::with_capacity(checkpoint_times.len());
    let mut next = checkpoint_times.iter().peekable();
    loop {
        while next.peek().is_some_and(|&&t| t == walk.time()) {
            out.push(LocalTimeSnapshot {
                t: walk.time(),
                value: walk.value(),
                local_times: walk.local_times().to_vec(),
            });
            next.next();
        }
        if walk.time() >= t_max {
            break;
        }
        walk.step();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::rng::SeedStream;
    use crate::stats::Moments;

    #[test]
    fn lazy_walk_increments_and_determinism() {
        let a = lazy_walk(1000, 4);
        assert_eq!(a.len(), 1001);
        assert_eq!(a[0], 0);
        assert!(a.windows(2).all(|w| (w[1] - w[0]).abs() <= 1));
        assert_eq!(a, lazy_walk(1000, 4));
    }

    #[test]
    fn lazy_walk_step_law() {
        let mut w = LazyWalk::new(8);
        let mut counts = [0u64; 3];
        let n = 200_000;
        let mut prev = 0;
        for _ in 0..n {
            let v = w.step();
            counts[(v - prev + 1) as usize] += 1;
            prev = v;
        }
        let p: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
        assert!(
            (p[0] - 0.25).abs() < 0.005
                && (p[2] - 0.25).abs() < 0.005
                && (p[1] - 0.5).abs() < 0.005,
            "{p:?}"
        );
    }

    #[test]
    fn lazy_walk_mean_and_variance() {
        let seeds = SeedStream::new(2024);
        let t = 10_000u64;
        let mut m = Moments::default();
        for i in 0..10_000 {
            let mut w = LazyWalk::new(seeds.seed(i));
            for _ in 0..t {
                w.step();
            }
            m.push(w.value() as f64);
        }
        assert!(m.mean().abs() <= 3.0 * m.std_error(), "mean {}", m.mean());
        let expected = t as f64 / 2.0;
        assert!(
            (m.variance() - expected).abs() <= 0.05 * expected,
            "var {}",
            m.variance()
        );
    }

    #[test]
    fn local_times_basic_facts() {
        let probes = [0, 3, -40];
        let snaps = simple_walk_local_times(30, &probes, &[0, 10, 30], 1);
        assert_eq!(snaps.len(), 3);
        assert_eq!(snaps[0].local_times, vec![1, 0, 0]);
        for s in &snaps {
            assert!(s.local_times[0] >= 1);
            // unreachable within 30 steps
            assert_eq!(s.local_times[2], 0);
        }
    }

    #[test]
    fn local_times_match_path_count() {
        let probes = [0, 1, 2, -3];
        let mut walk = SimpleWalk::new(&probes, 77);
        let mut path = vec![0];
        for _ in 0..5000 {
            path.push(walk.step());
        }
        for (i, &z) in probes.iter().enumerate() {
            let count = path.iter().filter(|&&x| x == z).count() as u64;
            assert_eq!(walk.local_times()[i], count);
        }
    }
}
