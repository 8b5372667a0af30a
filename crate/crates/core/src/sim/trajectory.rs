use serde::{Deserialize, Serialize};

use crate::algebra::Site;
use crate::error::{MixerError, Result};

use super::chain::ChainState;

/// Per-tile observation at a checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSnapshot {
    pub tile: Site,
    /// `V_t(z)`: number of `j ≤ t` with `S_j = σ_j(z)`.
    pub visits: u64,
    /// `σ_t(z) − z`.
    pub offset: Site,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: u64,
    pub position: Site,
    /// `X_t`.
    pub displacement: u64,
    /// `Cov(S_t, σ_t)`.
    pub cov: u64,
    /// `⌈X_t / 2⌉`.
    pub d_lower: u64,
    /// `2·Cov(S_t, σ_t) + 5·X_t`.
    pub d_upper: u64,
    pub min_position: Site,
    pub max_position: Site,
    pub probes: Vec<ProbeSnapshot>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub t_max: u64,
    pub checkpoints: Vec<Checkpoint>,
    /// Probed tiles, in the order used by every `probes` vector.
    pub probe_sites: Vec<Site>,
    /// `V_{t_max}(z)` per probed tile.
    pub visit_counters: Vec<u64>,
    /// `T_1(z) < T_2(z) < …` per probed tile, up to `t_max`.
    pub return_times: Vec<Vec<u64>>,
}

struct ProbeTracker {
    tiles: Vec<Site>,
    lo: Site,
    hi: Site,
    visits: Vec<u64>,
    returns: Vec<Vec<u64>>,
}

impl ProbeTracker {
    fn new(tiles: &[Site]) -> Self {
        Self {
            tiles: tiles.to_vec(),
            lo: tiles.iter().copied().min().unwrap_or(0),
            hi: tiles.iter().copied().max().unwrap_or(-1),
            visits: vec![0; tiles.len()],
            returns: vec![Vec::new(); tiles.len()],
        }
    }

    #[inline]
    fn observe(&mut self, tile: Site, t: u64) {
        if tile < self.lo || tile > self.hi {
            return;
        }
        for (i, &z) in self.tiles.iter().enumerate() {
            if z == tile {
                self.visits[i] += 1;
                if t > 0 {
                    self.returns[i].push(t);
                }
            }
        }
    }
}

fn snapshot(chain: &ChainState, probes: &ProbeTracker) -> Checkpoint {
    let x = chain.displacement();
    let cov = chain.covering_number();
    let (m, big_m) = chain.range();
    Checkpoint {
        t: chain.time(),
        position: chain.position(),
        displacement: x,
        cov,
        d_lower: x.div_ceil(2),
        d_upper: 2 * cov + 5 * x,
        min_position: m,
        max_position: big_m,
        probes: probes
            .tiles
            .iter()
            .zip(&probes.visits)
            .map(|(&z, &visits)| ProbeSnapshot {
                tile: z,
                visits,
                offset: chain.site_of(z) - z,
            })
            .collect(),
    }
}

/// Runs one seeded trajectory to `t_max`, recording checkpoints at the given
/// times and tracking visits to the probed tiles. Duplicate probes are
/// rejected; checkpoint times must be strictly increasing and at most
/// `t_max`.
pub fn run_trajectory(
    t_max: u64,
    probe_sites: &[Site],
    checkpoint_times: &[u64],
    seed: u64,
) -> Result<TrajectoryRecord> {
    if checkpoint_times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MixerError::Config(
            "checkpoint times must be strictly increasing".into(),
        ));
    }
    if checkpoint_times.last().is_some_and(|&t| t > t_max) {
        return Err(MixerError::Config(format!(
            "checkpoint time beyond t_max = {t_max}"
        )));
    }
    let mut sorted = probe_sites.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(MixerError::Config("probe sites must be distinct".into()));
    }

    let mut chain = ChainState::new(seed);
    let mut probes = ProbeTracker::new(probe_sites);
    let mut checkpoints = Vec::with_capacity(checkpoint_times.len());
    let mut next_cp = checkpoint_times.iter().peekable();

    probes.observe(chain.current_tile(), 0);
    loop {
        if next_cp.peek().is_some_and(|&&t| t == chain.time()) {
            checkpoints.push(snapshot(&chain, &probes));
            next_cp.next();
        }
        if chain.time() == t_max {
            break;
        }
        chain.step();
        probes.observe(chain.current_tile(), chain.time());
    }

    Ok(TrajectoryRecord {
        seed,
        t_max,
        checkpoints,
        probe_sites: probe_sites.to_vec(),
        visit_counters: probes.visits,
        return_times: probes.returns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{covering_number, lower_bound};
    use crate::sim::chain::ChainState;

    #[test]
    fn zero_length_trajectory() {
        let rec = run_trajectory(0, &[0, 3], &[0], 1).unwrap();
        assert_eq!(rec.checkpoints.len(), 1);
        let cp = &rec.checkpoints[0];
        assert_eq!(
            (
                cp.t,
                cp.position,
                cp.displacement,
                cp.cov,
                cp.d_lower,
                cp.d_upper,
                cp.min_position,
                cp.max_position
            ),
            (0, 0, 0, 0, 0, 0, 0, 0)
        );
        assert_eq!(rec.visit_counters, vec![1, 0]);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = run_trajectory(5000, &[0, 1, -2], &[100, 1000, 5000], 99).unwrap();
        let b = run_trajectory(5000, &[0, 1, -2], &[100, 1000, 5000], 99).unwrap();
        assert_eq!(a, b);
        let c = run_trajectory(5000, &[0, 1, -2], &[100, 1000, 5000], 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_checkpoints_and_probes() {
        assert!(run_trajectory(10, &[0], &[5, 5], 0).is_err());
        assert!(run_trajectory(10, &[0], &[11], 0).is_err());
        assert!(run_trajectory(10, &[0, 0], &[1], 0).is_err());
    }

    #[test]
    fn checkpoint_fields_match_recomputation() {
        let times: Vec<u64> = (0..=12).map(|k| 1 << k).collect();
        let rec = run_trajectory(4096, &[0, 2], &times, 5).unwrap();
        // replay the same seed through the sparse algebra
        let mut chain = ChainState::new(5);
        let mut reference = crate::algebra::MixerElement::identity();
        let mut idx = 0;
        for t in 0..=4096u64 {
            if idx < times.len() && times[idx] == t {
                let cp = &rec.checkpoints[idx];
                assert_eq!(cp.position, reference.position);
                assert_eq!(cp.displacement, reference.perm.displacement_sum());
                assert_eq!(cp.cov, covering_number(reference.position, &reference.perm));
                assert_eq!(cp.d_lower, lower_bound(&reference.perm));
                assert!(cp.d_lower <= cp.d_upper);
                let support_ok = reference
                    .perm
                    .support()
                    .all(|x| x >= cp.min_position - 1 && x <= cp.max_position + 1);
                assert!(support_ok);
                for p in &cp.probes {
                    assert_eq!(p.offset, reference.perm.apply(p.tile) - p.tile);
                }
                idx += 1;
            }
            if t < 4096 {
                reference = reference.apply_generator(chain.step());
            }
        }
    }

    #[test]
    fn visit_counters_are_monotone_and_match_returns() {
        let times: Vec<u64> = (0..=20).map(|k| k * 500).collect();
        let rec = run_trajectory(10_000, &[0, 1, 4], &times, 17).unwrap();
        for i in 0..3 {
            let series: Vec<u64> = rec.checkpoints.iter().map(|c| c.probes[i].visits).collect();
            assert!(series.windows(2).all(|w| w[0] <= w[1]));
            let at_zero = u64::from(rec.probe_sites[i] == 0);
            assert_eq!(
                rec.visit_counters[i],
                rec.return_times[i].len() as u64 + at_zero
            );
        }
    }
}
