use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{par_map, ExperimentConfig};
use super::report::{Check, Report};
use crate::algebra::Site;
use crate::error::Result;
use crate::sim::{run_trajectory, SeedStream};
use crate::stats::Moments;

/// Offsets `σ_t(z) − z` of the runs with `V_t(z) = k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisitBin {
    pub z: Site,
    pub t: u64,
    pub k: u64,
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub max_abs: u64,
    /// `(k − 1)/2`.
    pub target_variance: f64,
    pub checked: bool,
}

/// Per-`(z, t)` averages entering the two-sided bound on `E[|σ_t(z) − z|]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffsetBoundRow {
    pub z: Site,
    pub t: u64,
    pub mean_abs_offset: f64,
    pub mean_sqrt_visits: f64,
    pub p_visited: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalReport {
    pub trials: usize,
    pub bins: Vec<VisitBin>,
    pub offset_bounds: Vec<OffsetBoundRow>,
    /// Largest `c` with `c E[√V] − 2 P[V ≥ 1] ≤ E[|σ_t(z) − z|]` on every row.
    pub c_lower: f64,
    /// Smallest `C` with `E[|σ_t(z) − z|] ≤ C E[√V] + 2 P[V ≥ 1]` on every row.
    pub c_upper: f64,
}

/// Runs `cfg.trials` trajectories and bins `σ_t(z) − z` by `V_t(z)` for every
/// probe and grid time.
pub fn verify_conditional_law(cfg: &ExperimentConfig) -> Result<ConditionalReport> {
    cfg.validate()?;
    let seeds = SeedStream::new(cfg.seed).child(7);
    let runs = par_map(cfg.trials, cfg.workers, |i| {
        run_trajectory(
            cfg.t_max(),
            &cfg.probe_sites,
            &cfg.t_grid,
            seeds.seed(i as u64),
        )
    });
    // (probe index, time index, k) -> offsets
    let mut groups: BTreeMap<(usize, usize, u64), Vec<Site>> = BTreeMap::new();
    for rec in runs {
        for (j, cp) in rec?.checkpoints.iter().enumerate() {
            for (p, snap) in cp.probes.iter().enumerate() {
                groups
                    .entry((p, j, snap.visits))
                    .or_default()
                    .push(snap.offset);
            }
        }
    }

    let min_bin = cfg.tolerances.min_bin_samples as u64;
    let mut bins = Vec::new();
    let mut offset_bounds = Vec::new();
    for (p, &z) in cfg.probe_sites.iter().enumerate() {
        for (j, &t) in cfg.t_grid.iter().enumerate() {
            let (mut abs_sum, mut sqrt_sum, mut visited) = (0.0, 0.0, 0u64);
            for (&(_, _, k), offsets) in groups.range((p, j, 0)..=(p, j, u64::MAX)) {
                let m: Moments = offsets.iter().map(|&o| o as f64).collect();
                abs_sum += offsets.iter().map(|o| o.unsigned_abs() as f64).sum::<f64>();
                sqrt_sum += offsets.len() as f64 * (k as f64).sqrt();
                if k > 0 {
                    visited += offsets.len() as u64;
                }
                bins.push(VisitBin {
                    z,
                    t,
                    k,
                    count: m.count(),
                    mean: m.mean(),
                    variance: m.variance(),
                    max_abs: offsets.iter().map(|o| o.unsigned_abs()).max().unwrap_or(0),
                    target_variance: k.saturating_sub(1) as f64 / 2.0,
                    checked: k >= 1 && m.count() >= min_bin,
                });
            }
            let n = cfg.trials as f64;
            offset_bounds.push(OffsetBoundRow {
                z,
                t,
                mean_abs_offset: abs_sum / n,
                mean_sqrt_visits: sqrt_sum / n,
                p_visited: visited as f64 / n,
            });
        }
    }
    let usable = || offset_bounds.iter().filter(|r| r.mean_sqrt_visits > 0.0);
    let c_lower = usable()
        .map(|r| (r.mean_abs_offset + 2.0 * r.p_visited) / r.mean_sqrt_visits)
        .fold(f64::INFINITY, f64::min);
    let c_upper = usable()
        .map(|r| (r.mean_abs_offset - 2.0 * r.p_visited) / r.mean_sqrt_visits)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ConditionalReport {
        trials: cfg.trials,
        bins,
        offset_bounds,
        c_lower,
        c_upper,
    })
}

pub const CONDITIONAL_COLUMNS: &[&str] = &[
    "z",
    "t",
    "k",
    "count",
    "mean",
    "variance",
    "max_abs",
    "target_variance",
    "checked",
];

impl ConditionalReport {
    pub fn to_report(&self, cfg: &ExperimentConfig) -> Report {
        let slack = cfg.tolerances.variance_slack;
        let mut report = Report::new("conditional", cfg.echo(), CONDITIONAL_COLUMNS);
        for b in &self.bins {
            report.push_row(vec![
                json!(b.z),
                json!(b.t),
                json!(b.k),
                json!(b.count),
                json!(b.mean),
                json!(b.variance),
                json!(b.max_abs),
                json!(b.target_variance),
                json!(b.checked),
            ]);
        }
        let replay = |b: &VisitBin| {
            format!(
                "seed={} trials={} z={} t={} k={}",
                cfg.seed, self.trials, b.z, b.t, b.k
            )
        };
        let mut push = |name: String, ok: bool, detail: String, b: &VisitBin| {
            let c = Check::new(name, ok, detail);
            report.check(if ok { c } else { c.with_replay(replay(b)) });
        };
        for b in &self.bins {
            let id = format!("z{}_t{}_k{}", b.z, b.t, b.k);
            match b.k {
                0 => push(
                    format!("unvisited_{id}"),
                    b.max_abs == 0,
                    format!("max |offset| {}", b.max_abs),
                    b,
                ),
                1 => push(
                    format!("single_visit_{id}"),
                    b.max_abs <= 2,
                    format!("max |offset| {}", b.max_abs),
                    b,
                ),
                _ => {}
            }
            if !b.checked {
                continue;
            }
            push(
                format!("mean_{id}"),
                b.mean.abs() <= 2.0,
                format!("mean {:.4}, n = {}", b.mean, b.count),
                b,
            );
            let half = slack * (b.k as f64).sqrt() + 9.0;
            let ok = (b.variance - b.target_variance).abs() <= half;
            push(
                format!("variance_{id}"),
                ok,
                format!(
                    "variance {:.3} vs {:.1} ± {:.3}",
                    b.variance, b.target_variance, half
                ),
                b,
            );
        }
        if self.bins.iter().all(|b| !b.checked) {
            report.warn(format!(
                "no bin reached {} samples",
                cfg.tolerances.min_bin_samples
            ));
        }

        report.fitted.insert("c_lower".into(), self.c_lower);
        report.fitted.insert("c_upper".into(), self.c_upper);
        for r in &self.offset_bounds {
            report.fitted.insert(
                format!("mean_abs_offset_z{}_t{}", r.z, r.t),
                r.mean_abs_offset,
            );
            report.fitted.insert(
                format!("mean_sqrt_visits_z{}_t{}", r.z, r.t),
                r.mean_sqrt_visits,
            );
        }
        if self.c_lower.is_finite() {
            report.check(Check::new(
                "offset_bound_lower",
                self.c_lower > 0.0,
                format!("fitted c = {:.4}", self.c_lower),
            ));
            // E|W_{k−1}| ≤ √((k−1)/2) < √k, so C = 1 always suffices.
            report.check(Check::new(
                "offset_bound_upper",
                self.c_upper <= 1.0,
                format!("fitted C = {:.4}", self.c_upper),
            ));
        }
        report
    }
}
