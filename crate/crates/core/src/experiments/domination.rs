use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{par_map, ExperimentConfig};
use super::report::{Check, Report};
use crate::algebra::Site;
use crate::error::{MixerError, Result};
use crate::sim::{
    exact_local_time_law, exact_visit_law, law_tails, run_trajectory, simple_walk_local_times,
    SeedStream,
};
use crate::stats::{clopper_pearson, quantile, tail_probabilities, Moments};
use statrs::distribution::{ContinuousCDF, Normal};

/// One-sided critical value for `m` simultaneous comparisons at family
/// level `alpha`, never below `floor`.
pub fn bonferroni_critical(alpha: f64, m: usize, floor: f64) -> f64 {
    let std = Normal::new(0.0, 1.0).expect("standard normal");
    std.inverse_cdf(1.0 - alpha / m.max(1) as f64).max(floor)
}

/// Tail comparison at one `(z, t, k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub z: Site,
    pub t: u64,
    pub k: u64,
    /// `P[L_{2t}(2z) ≥ k]`.
    pub p_srw: f64,
    /// `P[V_t(z) ≥ k]`.
    pub p_mixer: f64,
    pub combined_se: f64,
    /// Critical value applied to `combined_se` in this `(z, t)` cell.
    pub z_crit: f64,
    /// Exact `P[L_{2t}(2z) ≥ k]`, when `t` is small enough to compute it.
    pub exact_srw: Option<f64>,
    /// Exact `P[V_t(z) ≥ k]`.
    pub exact_mixer: Option<f64>,
    /// `max(0, exact_srw − exact_mixer)`: the amount by which the inequality
    /// fails in truth at this finite `t`.
    pub exact_defect: f64,
    /// `p_mixer + exact_defect + z_crit·se − p_srw`; negative means a
    /// significant violation.
    pub margin: f64,
    /// `p_srw` exceeds `p_mixer` by more than the plain pointwise buffer.
    pub pointwise_exceeded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqrtMeans {
    pub z: Site,
    pub t: u64,
    pub srw: f64,
    pub srw_se: f64,
    pub mixer: f64,
    pub mixer_se: f64,
    /// Exact `E[√L_{2t}(2z)]`, when `t` is small enough to compute it.
    pub exact_srw: Option<f64>,
    /// Exact `E[√V_t(z)]`.
    pub exact_mixer: Option<f64>,
}

impl SqrtMeans {
    /// `max(0, E√L − E√V)` from the exact laws; zero when they are unknown.
    pub fn exact_defect(&self) -> f64 {
        self.exact_srw
            .zip(self.exact_mixer)
            .map_or(0.0, |(a, b)| (a - b).max(0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub trials: usize,
    pub buffer: f64,
    pub tails: Vec<TailRow>,
    pub sqrt_means: Vec<SqrtMeans>,
}

/// Mixer visit counts `V_t(z)` for every trial, indexed `[probe][time][trial]`.
pub(crate) fn mixer_visits(cfg: &ExperimentConfig, stream: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let seeds = SeedStream::new(cfg.seed).child(stream);
    let grid = &cfg.t_grid;
    let probes = &cfg.probe_sites;
    let runs = par_map(cfg.trials, cfg.workers, |i| {
        run_trajectory(cfg.t_max(), probes, grid, seeds.seed(i as u64))
    });
    let mut out = vec![vec![Vec::with_capacity(cfg.trials); grid.len()]; probes.len()];
    for rec in runs {
        for (j, cp) in rec?.checkpoints.iter().enumerate() {
            for (p, snap) in cp.probes.iter().enumerate() {
                out[p][j].push(snap.visits);
            }
        }
    }
    Ok(out)
}

fn srw_local_times(cfg: &ExperimentConfig) -> Result<Vec<Vec<Vec<u64>>>> {
    let seeds = SeedStream::new(cfg.seed).child(6);
    let probes: Vec<Site> = cfg
        .probe_sites
        .iter()
        .map(|&z| z.checked_mul(2).ok_or(MixerError::Overflow))
        .collect::<Result<_>>()?;
    let times: Vec<u64> = cfg.t_grid.iter().map(|&t| 2 * t).collect();
    let runs = par_map(cfg.trials, cfg.workers, |i| {
        simple_walk_local_times(2 * cfg.t_max(), &probes, &times, seeds.seed(i as u64))
    });
    let mut out = vec![vec![Vec::with_capacity(cfg.trials); times.len()]; probes.len()];
    for snaps in runs {
        for (j, s) in snaps.iter().enumerate() {
            for (p, &l) in s.local_times.iter().enumerate() {
                out[p][j].push(l);
            }
        }
    }
    Ok(out)
}

fn sqrt_mean(law: &[f64]) -> f64 {
    law.iter()
        .enumerate()
        .map(|(k, p)| (k as f64).sqrt() * p)
        .sum()
}

fn sqrt_moments(v: &[u64]) -> Moments {
    v.iter().map(|&x| (x as f64).sqrt()).collect()
}

/// Compares the tails of `L_{2t}(2z)` for a simple random walk with those of
/// the mixer visit count `V_t(z)`, for every probe `z` and grid time `t`,
/// over `cfg.trials` independent runs of each process.
pub fn verify_domination(cfg: &ExperimentConfig) -> Result<DominationReport> {
    cfg.validate()?;
    let tol = &cfg.tolerances;
    let v = mixer_visits(cfg, 5)?;
    let l = srw_local_times(cfg)?;
    let n = cfg.trials as f64;
    let mut tails = Vec::new();
    let mut sqrt_means = Vec::new();
    for (p, &z) in cfg.probe_sites.iter().enumerate() {
        for (j, &t) in cfg.t_grid.iter().enumerate() {
            let (vv, ll) = (&v[p][j], &l[p][j]);
            let k_max = quantile(vv, tol.tail_quantile)
                .max(quantile(ll, tol.tail_quantile))
                .max(1);
            let tv = tail_probabilities(vv, k_max);
            let tl = tail_probabilities(ll, k_max);
            let z_crit = bonferroni_critical(tol.alpha, k_max as usize, tol.sigma_buffer);
            // Both laws have Gaussian-type tails, so three times the sample
            // quantile leaves a negligible mass in the last cell.
            let exact = if t <= tol.exact_max_t {
                let cap = (3 * k_max as usize + 8).min(t as usize + 2);
                Some((
                    exact_local_time_law(z, t, cap)?,
                    exact_visit_law(z, t, cap)?,
                ))
            } else {
                None
            };
            let exact_tails = exact
                .as_ref()
                .map(|(el, ev)| (law_tails(el), law_tails(ev)));
            for k in 1..=k_max as usize {
                let se = (tv[k] * (1.0 - tv[k]) / n + tl[k] * (1.0 - tl[k]) / n).sqrt();
                let (exact_srw, exact_mixer) = match &exact_tails {
                    Some((el, ev)) => (Some(el[k]), Some(ev[k])),
                    None => (None, None),
                };
                let exact_defect = exact_srw
                    .zip(exact_mixer)
                    .map_or(0.0, |(a, b)| (a - b).max(0.0));
                tails.push(TailRow {
                    z,
                    t,
                    k: k as u64,
                    p_srw: tl[k],
                    p_mixer: tv[k],
                    combined_se: se,
                    z_crit,
                    exact_srw,
                    exact_mixer,
                    exact_defect,
                    margin: tv[k] + exact_defect + z_crit * se - tl[k],
                    pointwise_exceeded: tl[k] > tv[k] + tol.sigma_buffer * se,
                });
            }
            let (ms, mm) = (sqrt_moments(ll), sqrt_moments(vv));
            sqrt_means.push(SqrtMeans {
                z,
                t,
                srw: ms.mean(),
                srw_se: ms.std_error(),
                mixer: mm.mean(),
                mixer_se: mm.std_error(),
                exact_srw: exact.as_ref().map(|(el, _)| sqrt_mean(el)),
                exact_mixer: exact.as_ref().map(|(_, ev)| sqrt_mean(ev)),
            });
        }
    }
    Ok(DominationReport {
        trials: cfg.trials,
        buffer: tol.sigma_buffer,
        tails,
        sqrt_means,
    })
}

pub const DOMINATION_COLUMNS: &[&str] = &[
    "z",
    "t",
    "k",
    "p_srw",
    "p_mixer",
    "combined_se",
    "z_crit",
    "exact_srw",
    "exact_mixer",
    "exact_defect",
    "margin",
    "pointwise_exceeded",
];

impl DominationReport {
    /// Largest distance by which an exact tail falls outside the
    /// Clopper–Pearson interval of its Monte Carlo estimate, over both
    /// processes and all `k` of a cell, and the `k` where it occurs. The
    /// family level `alpha` is split evenly across the intervals.
    fn exact_disagreement(&self, z: Site, t: u64, alpha: f64) -> Option<(f64, u64)> {
        let n = self.trials as u64;
        let rows: Vec<&TailRow> = self.tails.iter().filter(|r| r.z == z && r.t == t).collect();
        let level = alpha / (2 * rows.len()).max(1) as f64;
        let outside = |p_hat: f64, p: f64| {
            let (lo, hi) = clopper_pearson((p_hat * n as f64).round() as u64, n, level);
            (lo - p).max(p - hi)
        };
        rows.iter()
            .filter_map(|r| {
                let (el, ev) = (r.exact_srw?, r.exact_mixer?);
                Some((outside(r.p_srw, el).max(outside(r.p_mixer, ev)), r.k))
            })
            .max_by(|a, b| a.0.total_cmp(&b.0))
    }

    pub fn to_report(&self, cfg: &ExperimentConfig) -> Report {
        let mut report = Report::new("domination", cfg.echo(), DOMINATION_COLUMNS);
        for r in &self.tails {
            report.push_row(vec![
                json!(r.z),
                json!(r.t),
                json!(r.k),
                json!(r.p_srw),
                json!(r.p_mixer),
                json!(r.combined_se),
                json!(r.z_crit),
                json!(r.exact_srw),
                json!(r.exact_mixer),
                json!(r.exact_defect),
                json!(r.margin),
                json!(r.pointwise_exceeded),
            ]);
        }
        for s in &self.sqrt_means {
            let cell = |r: &&TailRow| r.z == s.z && r.t == s.t;
            let worst = self
                .tails
                .iter()
                .filter(cell)
                .min_by(|a, b| a.margin.total_cmp(&b.margin));
            let exceeded = self
                .tails
                .iter()
                .filter(cell)
                .filter(|r| r.pointwise_exceeded)
                .count();
            if exceeded > 0 {
                report.warn(format!(
                    "z = {}, t = {}: {exceeded} values of k exceed the pointwise {}-SE buffer",
                    s.z, s.t, self.buffer
                ));
            }
            let defect = self
                .tails
                .iter()
                .filter(cell)
                .map(|r| r.exact_defect)
                .fold(0.0, f64::max);
            if defect > 0.0 {
                report.warn(format!(
                    "z = {}, t = {}: exact tails of L exceed those of V by up to {defect:.5}",
                    s.z, s.t
                ));
                report
                    .fitted
                    .insert(format!("exact_defect_z{}_t{}", s.z, s.t), defect);
            }
            if let Some(err) = self.exact_disagreement(s.z, s.t, cfg.tolerances.alpha) {
                let ok = err.0 <= 0.0;
                let detail = format!("largest distance of an exact tail outside its confidence interval {:.5} at k = {}", err.0, err.1);
                let c = Check::new(format!("exact_agreement_z{}_t{}", s.z, s.t), ok, detail);
                report.check(if ok {
                    c
                } else {
                    c.with_replay(format!("seed={} z={} t={} k={}", cfg.seed, s.z, s.t, err.1))
                });
            }
            if let Some(w) = worst {
                let name = format!("tail_z{}_t{}", s.z, s.t);
                let detail = format!(
                    "worst margin {:.5} at k = {} (critical value {:.3})",
                    w.margin, w.k, w.z_crit
                );
                let check = Check::new(name, w.margin >= 0.0, detail);
                report.check(if w.margin >= 0.0 {
                    check
                } else {
                    check.with_replay(format!(
                        "seed={} trials={} z={} t={} k={}",
                        cfg.seed, self.trials, s.z, s.t, w.k
                    ))
                });
            }
            let se = (s.srw_se.powi(2) + s.mixer_se.powi(2)).sqrt();
            let sqrt_defect = s.exact_defect();
            let ok = s.srw <= s.mixer + sqrt_defect + self.buffer * se;
            report
                .fitted
                .insert(format!("sqrt_mean_srw_z{}_t{}", s.z, s.t), s.srw);
            report
                .fitted
                .insert(format!("sqrt_mean_mixer_z{}_t{}", s.z, s.t), s.mixer);
            if sqrt_defect > 0.0 {
                report.warn(format!(
                    "z = {}, t = {}: exact E[sqrt L] exceeds E[sqrt V] by {sqrt_defect:.5}",
                    s.z, s.t
                ));
                report
                    .fitted
                    .insert(format!("exact_sqrt_defect_z{}_t{}", s.z, s.t), sqrt_defect);
            }
            let check = Check::new(
                format!("sqrt_mean_z{}_t{}", s.z, s.t),
                ok,
                format!(
                    "E[sqrt L] = {:.4} vs E[sqrt V] = {:.4} (se {:.4}, exact defect {sqrt_defect:.4})",
                    s.srw, s.mixer, se
                ),
            );
            report.check(if ok {
                check
            } else {
                check.with_replay(format!("seed={} z={} t={}", cfg.seed, s.z, s.t))
            });
        }
        report
    }
}
