use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{par_map, ExperimentConfig};
use super::report::{Check, Report};
use crate::error::Result;
use crate::sim::{run_trajectory, SeedStream};
use crate::stats::{ols, LinearFit, Moments};

/// Per-time aggregate over all trajectories.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub t: u64,
    pub trials: usize,
    pub mean_x: f64,
    pub se_x: f64,
    pub mean_d_lower: f64,
    pub se_d_lower: f64,
    pub mean_d_upper: f64,
    pub se_d_upper: f64,
    pub mean_cov: f64,
    pub se_cov: f64,
    /// Mean of `|I_t| = M_t − m_t + 3`.
    pub mean_interval: f64,
    pub in_fit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub rows: Vec<ExponentRow>,
    pub fit_x: Option<LinearFit>,
    pub fit_d_lower: Option<LinearFit>,
    pub fit_d_upper: Option<LinearFit>,
    pub fit_cov: Option<LinearFit>,
    /// Set when the run is too small for the fitted slopes to mean much.
    pub unstable: bool,
    pub warnings: Vec<String>,
}

fn fit_series(rows: &[ExponentRow], value: impl Fn(&ExponentRow) -> f64) -> Option<LinearFit> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.in_fit)
        .map(|r| ((r.t as f64).ln(), value(r)))
        .filter(|(_, y)| *y > 0.0)
        .map(|(x, y)| (x, y.ln()))
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    ols(&xs, &ys)
}

/// Runs `cfg.trials` trajectories to the end of the grid and fits
/// `log E[·]` against `log t` for the displacement sum, both distance bound
/// composites and the covering number.
pub fn estimate_exponent(cfg: &ExperimentConfig) -> Result<ExponentReport> {
    cfg.validate()?;
    let seeds = SeedStream::new(cfg.seed).child(1);
    let t_max = cfg.t_max();
    let grid = cfg.t_grid.clone();
    let records = par_map(cfg.trials, cfg.workers, |i| {
        run_trajectory(t_max, &[], &grid, seeds.seed(i as u64)).map(|r| r.checkpoints)
    });

    let n = grid.len();
    let mut x = vec![Moments::default(); n];
    let mut lo = vec![Moments::default(); n];
    let mut up = vec![Moments::default(); n];
    let mut cov = vec![Moments::default(); n];
    let mut interval = vec![Moments::default(); n];
    for rec in records {
        for (j, cp) in rec?.iter().enumerate() {
            x[j].push(cp.displacement as f64);
            lo[j].push(cp.d_lower as f64);
            up[j].push(cp.d_upper as f64);
            cov[j].push(cp.cov as f64);
            interval[j].push((cp.max_position - cp.min_position + 3) as f64);
        }
    }
    let rows: Vec<ExponentRow> = (0..n)
        .map(|j| ExponentRow {
            t: grid[j],
            trials: cfg.trials,
            mean_x: x[j].mean(),
            se_x: x[j].std_error(),
            mean_d_lower: lo[j].mean(),
            se_d_lower: lo[j].std_error(),
            mean_d_upper: up[j].mean(),
            se_d_upper: up[j].std_error(),
            mean_cov: cov[j].mean(),
            se_cov: cov[j].std_error(),
            mean_interval: interval[j].mean(),
            in_fit: grid[j] >= cfg.tolerances.fit_min_t,
        })
        .collect();

    let mut warnings = Vec::new();
    let fit_points = rows.iter().filter(|r| r.in_fit).count();
    let mut unstable = false;
    if cfg.trials < cfg.tolerances.min_stable_trials {
        unstable = true;
        warnings.push(format!(
            "unstable fit: {} trials is below the minimum of {}",
            cfg.trials, cfg.tolerances.min_stable_trials
        ));
    }
    if fit_points < 3 {
        unstable = true;
        warnings.push(format!(
            "unstable fit: only {fit_points} grid times at or above t = {}",
            cfg.tolerances.fit_min_t
        ));
    }

    Ok(ExponentReport {
        fit_x: fit_series(&rows, |r| r.mean_x),
        fit_d_lower: fit_series(&rows, |r| r.mean_d_lower),
        fit_d_upper: fit_series(&rows, |r| r.mean_d_upper),
        fit_cov: fit_series(&rows, |r| r.mean_cov),
        rows,
        unstable,
        warnings,
    })
}

pub const EXPONENT_COLUMNS: &[&str] = &[
    "t",
    "trials",
    "mean_x",
    "se_x",
    "mean_d_lower",
    "se_d_lower",
    "mean_d_upper",
    "se_d_upper",
    "mean_cov",
    "se_cov",
    "mean_interval",
    "in_fit",
];

impl ExponentReport {
    pub fn to_report(&self, cfg: &ExperimentConfig) -> Report {
        let mut report = Report::new("exponent", cfg.echo(), EXPONENT_COLUMNS);
        for r in &self.rows {
            report.push_row(vec![
                json!(r.t),
                json!(r.trials),
                json!(r.mean_x),
                json!(r.se_x),
                json!(r.mean_d_lower),
                json!(r.se_d_lower),
                json!(r.mean_d_upper),
                json!(r.se_d_upper),
                json!(r.mean_cov),
                json!(r.se_cov),
                json!(r.mean_interval),
                json!(r.in_fit),
            ]);
        }
        for w in &self.warnings {
            report.warn(w.clone());
        }

        for r in &self.rows {
            let ok = r.mean_d_lower <= r.mean_d_upper && r.mean_x / 2.0 <= r.mean_d_upper;
            report.check(Check::new(
                format!("sandwich_coherence_t{}", r.t),
                ok,
                format!("lower {:.3} <= upper {:.3}", r.mean_d_lower, r.mean_d_upper),
            ));
        }

        let tol = &cfg.tolerances;
        let fits = [
            ("x", &self.fit_x, tol.escape_slope),
            ("d_lower", &self.fit_d_lower, tol.escape_slope),
            ("d_upper", &self.fit_d_upper, tol.escape_slope),
            ("cov", &self.fit_cov, tol.cov_slope),
        ];
        for (name, fit, (lo, hi)) in fits {
            let check_name = format!("slope_{name}");
            match fit {
                Some(f) => {
                    report.fitted.insert(format!("slope_{name}"), f.slope);
                    report
                        .fitted
                        .insert(format!("intercept_{name}"), f.intercept);
                    report
                        .fitted
                        .insert(format!("prefactor_{name}"), f.intercept.exp());
                    report
                        .fitted
                        .insert(format!("r_squared_{name}"), f.r_squared);
                    let max_resid = f.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
                    report
                        .fitted
                        .insert(format!("max_abs_residual_{name}"), max_resid);
                    let detail = format!("slope {:.4} in [{lo}, {hi}]", f.slope);
                    if self.unstable {
                        report.check(Check::inconclusive(check_name, detail));
                    } else {
                        report.check(Check::new(
                            check_name,
                            f.slope.is_finite() && (lo..=hi).contains(&f.slope),
                            detail,
                        ));
                    }
                }
                None => report.check(Check::inconclusive(check_name, "not enough points to fit")),
            }
        }
        report
    }
}
