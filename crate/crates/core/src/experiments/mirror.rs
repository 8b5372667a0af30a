use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{par_map, ExperimentConfig};
use super::report::{Check, Report};
use crate::algebra::Site;
use crate::error::Result;
use crate::sim::{run_trajectory, SeedStream};
use crate::stats::{two_sample_chi_square, ChiSquareTest};

/// Merged bins must hold at least this many pooled observations.
const MIN_BIN_COUNT: u64 = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorRow {
    pub t: u64,
    pub statistic: String,
    pub test: ChiSquareTest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorReport {
    pub trials: usize,
    pub rows: Vec<MirrorRow>,
}

/// `(S_t, σ_t(1) − 1, σ_t(−1) + 1)` for each grid time, per trial.
fn sample_set(cfg: &ExperimentConfig, stream: u64) -> Result<Vec<Vec<(Site, Site, Site)>>> {
    let seeds = SeedStream::new(cfg.seed).child(stream);
    let runs = par_map(cfg.trials, cfg.workers, |i| {
        run_trajectory(cfg.t_max(), &[1, -1], &cfg.t_grid, seeds.seed(i as u64))
    });
    let mut out = vec![Vec::with_capacity(cfg.trials); cfg.t_grid.len()];
    for rec in runs {
        for (j, cp) in rec?.checkpoints.iter().enumerate() {
            out[j].push((cp.position, cp.probes[0].offset, cp.probes[1].offset));
        }
    }
    Ok(out)
}

/// Two-sample tests of `S_t` against `−S_t` and of `σ_t(1) − 1` against
/// `−(σ_t(−1) + 1)`, each side drawn from its own set of `cfg.trials` runs.
pub fn verify_mirror(cfg: &ExperimentConfig) -> Result<MirrorReport> {
    cfg.validate()?;
    let a = sample_set(cfg, 8)?;
    let b = sample_set(cfg, 9)?;
    let mut rows = Vec::new();
    for (j, &t) in cfg.t_grid.iter().enumerate() {
        let pos: Vec<Site> = a[j].iter().map(|s| s.0).collect();
        let neg_pos: Vec<Site> = b[j].iter().map(|s| -s.0).collect();
        rows.push(MirrorRow {
            t,
            statistic: "position".into(),
            test: two_sample_chi_square(&pos, &neg_pos, MIN_BIN_COUNT),
        });
        let right: Vec<Site> = a[j].iter().map(|s| s.1).collect();
        let left: Vec<Site> = b[j].iter().map(|s| -s.2).collect();
        rows.push(MirrorRow {
            t,
            statistic: "tile_offset".into(),
            test: two_sample_chi_square(&right, &left, MIN_BIN_COUNT),
        });
    }
    Ok(MirrorReport {
        trials: cfg.trials,
        rows,
    })
}

pub const MIRROR_COLUMNS: &[&str] = &["t", "statistic", "chi_square", "dof", "p_value", "bins"];

impl MirrorReport {
    pub fn to_report(&self, cfg: &ExperimentConfig) -> Report {
        let mut report = Report::new("mirror", cfg.echo(), MIRROR_COLUMNS);
        for r in &self.rows {
            report.push_row(vec![
                json!(r.t),
                json!(r.statistic),
                json!(r.test.statistic),
                json!(r.test.dof),
                json!(r.test.p_value),
                json!(r.test.bins),
            ]);
            let ok = r.test.p_value >= cfg.tolerances.alpha;
            let c = Check::new(
                format!("{}_t{}", r.statistic, r.t),
                ok,
                format!(
                    "chi2 = {:.3} on {} dof, p = {:.4}",
                    r.test.statistic, r.test.dof, r.test.p_value
                ),
            );
            report.check(if ok {
                c
            } else {
                c.with_replay(format!("seed={} trials={}", cfg.seed, self.trials))
            });
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_laws_agree_on_small_sample() {
        let cfg = ExperimentConfig {
            trials: 2000,
            t_grid: vec![16, 64],
            ..Default::default()
        };
        let rep = verify_mirror(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 4);
        assert!(rep.to_report(&cfg).passed);
    }
}
