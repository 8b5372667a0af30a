use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::report::OutputFormat;
use crate::algebra::Site;
use crate::error::{MixerError, Result};

/// Thresholds used by the experiments. Every field can be overridden from
/// the command line; the defaults are the acceptance values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Band for the fitted slopes of `E[X_t]`, `E[⌈X_t/2⌉]` and
    /// `E[2 Cov + 5 X_t]`.
    pub escape_slope: (f64, f64),
    /// Band for the fitted slope of `E[Cov(S_t, σ_t)]`.
    pub cov_slope: (f64, f64),
    /// Only grid times `≥ fit_min_t` enter the log-log fit.
    pub fit_min_t: u64,
    /// Fewer trials than this flag the exponent fit as unstable.
    pub min_stable_trials: usize,
    /// Significance level of the two-sample and goodness-of-fit tests.
    pub alpha: f64,
    /// Width, in combined standard errors, of the buffer on inequality checks.
    pub sigma_buffer: f64,
    /// Absolute tolerance on the return-offset frequencies.
    pub claim_tolerance: f64,
    /// Below this many return samples the frequency checks are inconclusive.
    pub claim_min_samples: usize,
    /// Censored fraction above which the claim report warns.
    pub max_censored_fraction: f64,
    /// Conditional-law bins with fewer samples are reported but not checked.
    pub min_bin_samples: usize,
    /// `C` in the variance band `(k−1)/2 ± (C√k + 9)`.
    pub variance_slack: f64,
    /// Tail checks run for `k` up to this quantile of the visit counts.
    pub tail_quantile: f64,
    /// Exact visit-count laws are computed for grid times up to this value.
    pub exact_max_t: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            escape_slope: (0.70, 0.80),
            cov_slope: (0.45, 0.55),
            fit_min_t: 1 << 10,
            min_stable_trials: 30,
            alpha: 1e-3,
            sigma_buffer: 3.0,
            claim_tolerance: 0.01,
            claim_min_samples: 10_000,
            max_censored_fraction: 1e-3,
            min_bin_samples: 500,
            variance_slack: 1.0,
            tail_quantile: 0.99,
            exact_max_t: 1 << 10,
        }
    }
}

/// Shared configuration of the Monte Carlo experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    /// Observation times, strictly increasing.
    pub t_grid: Vec<u64>,
    pub probe_sites: Vec<Site>,
    /// Worker threads; results never depend on it.
    pub workers: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0x5EED_2010,
            trials: 2000,
            t_grid: (8..=16).map(|k| 1u64 << k).collect(),
            probe_sites: vec![0, 1, 4, 16],
            workers: 1,
            output_format: OutputFormat::Json,
            output_path: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(MixerError::Config("trials must be at least 1".into()));
        }
        if self.t_grid.is_empty() {
            return Err(MixerError::Config("time grid must not be empty".into()));
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MixerError::Config(
                "time grid must be strictly increasing".into(),
            ));
        }
        let mut probes = self.probe_sites.clone();
        probes.sort_unstable();
        if probes.windows(2).any(|w| w[0] == w[1]) {
            return Err(MixerError::Config("probe sites must be distinct".into()));
        }
        Ok(())
    }

    pub fn t_max(&self) -> u64 {
        self.t_grid.last().copied().unwrap_or(0)
    }

    /// Config echo stored in reports. The output path is left out so that
    /// identical runs written to different files agree byte for byte.
    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serialises");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("output_path");
            obj.remove("workers");
        }
        v
    }
}

/// Maps `f` over `0..n` on a pool of `workers` threads and returns results in
/// index order.
pub(crate) fn par_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if workers <= 1 {
        return (0..n).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| (0..n).into_par_iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_geometric() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.t_grid.first(), Some(&256));
        assert_eq!(cfg.t_max(), 65536);
        cfg.validate().unwrap();
    }

    #[test]
    fn validation_errors() {
        let mut cfg = ExperimentConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.t_grid = vec![];
        assert!(cfg.validate().is_err());
        cfg.t_grid = vec![4, 4];
        assert!(cfg.validate().is_err());
        cfg.t_grid = vec![4, 8];
        cfg.probe_sites = vec![1, 1];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn par_map_preserves_order() {
        let serial = par_map(100, 1, |i| i * i);
        let parallel = par_map(100, 4, |i| i * i);
        assert_eq!(serial, parallel);
    }
}
