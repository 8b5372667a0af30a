use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::Tolerances;
use super::report::{Check, Report};
use crate::algebra::Site;
use crate::error::Result;
use crate::sim::{return_time_samples, ReturnSample, SeedStream};
use crate::stats::{clopper_pearson, goodness_of_fit, ChiSquareTest};

const OFFSETS: [Site; 3] = [-1, 0, 1];
const EXPECTED: [f64; 3] = [0.25, 0.5, 0.25];
/// Return times reported separately.
pub const RETURN_TIME_BINS: [u64; 4] = [2, 3, 4, 5];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffsetCell {
    /// `None` for the pooled row, otherwise the first-return time `ℓ`.
    pub return_time: Option<u64>,
    pub offset: Site,
    pub count: u64,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub n_samples: usize,
    pub returned: u64,
    pub censored: usize,
    pub censored_fraction: f64,
    /// Offsets outside `{−1, 0, 1}`; must be zero at the origin.
    pub out_of_range: u64,
    pub pooled: Vec<OffsetCell>,
    pub by_return_time: Vec<OffsetCell>,
    pub fit: ChiSquareTest,
}

fn cells(counts: [u64; 3], return_time: Option<u64>, alpha: f64) -> Vec<OffsetCell> {
    let n: u64 = counts.iter().sum();
    OFFSETS
        .iter()
        .zip(counts)
        .map(|(&offset, count)| {
            let (ci_low, ci_high) = clopper_pearson(count, n, alpha);
            OffsetCell {
                return_time,
                offset,
                count,
                frequency: if n == 0 { 0.0 } else { count as f64 / n as f64 },
                ci_low,
                ci_high,
            }
        })
        .collect()
}

/// Samples `n` first returns to tile 0 and tabulates the tile's offset at
/// the return time, pooled and split by return time.
pub fn verify_claim(n: usize, seed: u64, cap: u64, tol: &Tolerances) -> Result<ClaimReport> {
    let samples = return_time_samples(0, n, SeedStream::new(seed).child(4).seed(0), cap)?;
    let mut pooled = [0u64; 3];
    let mut binned = [[0u64; 3]; RETURN_TIME_BINS.len()];
    let mut out_of_range = 0;
    for s in &samples.samples {
        if let ReturnSample::Returned { time, offset } = *s {
            let Some(cell) = OFFSETS.iter().position(|&o| o == offset) else {
                out_of_range += 1;
                continue;
            };
            pooled[cell] += 1;
            if let Some(b) = RETURN_TIME_BINS.iter().position(|&l| l == time) {
                binned[b][cell] += 1;
            }
        }
    }
    let by_return_time = RETURN_TIME_BINS
        .iter()
        .zip(binned)
        .flat_map(|(&l, c)| cells(c, Some(l), tol.alpha))
        .collect();
    Ok(ClaimReport {
        n_samples: n,
        returned: pooled.iter().sum(),
        censored: samples.censored(),
        censored_fraction: samples.censored_fraction(),
        out_of_range,
        pooled: cells(pooled, None, tol.alpha),
        by_return_time,
        fit: goodness_of_fit(&pooled, &EXPECTED),
    })
}

pub const CLAIM_COLUMNS: &[&str] = &[
    "return_time",
    "offset",
    "count",
    "frequency",
    "ci_low",
    "ci_high",
];

impl ClaimReport {
    /// Goodness of fit against `(1/4, 1/2, 1/4)` within one return-time bin.
    pub fn conditional_fit(&self, return_time: u64) -> (u64, ChiSquareTest) {
        let counts: Vec<u64> = self
            .by_return_time
            .iter()
            .filter(|c| c.return_time == Some(return_time))
            .map(|c| c.count)
            .collect();
        (counts.iter().sum(), goodness_of_fit(&counts, &EXPECTED))
    }

    pub fn frequency(&self, offset: Site) -> f64 {
        self.pooled
            .iter()
            .find(|c| c.offset == offset)
            .map_or(0.0, |c| c.frequency)
    }

    pub fn to_report(&self, config: serde_json::Value, tol: &Tolerances) -> Report {
        let mut report = Report::new("claim", config, CLAIM_COLUMNS);
        for c in self.pooled.iter().chain(&self.by_return_time) {
            report.push_row(vec![
                c.return_time.map_or_else(|| json!("all"), |l| json!(l)),
                json!(c.offset),
                json!(c.count),
                json!(c.frequency),
                json!(c.ci_low),
                json!(c.ci_high),
            ]);
        }
        report
            .fitted
            .insert("chi_square".into(), self.fit.statistic);
        report
            .fitted
            .insert("chi_square_p".into(), self.fit.p_value);
        report
            .fitted
            .insert("censored_fraction".into(), self.censored_fraction);

        if self.censored_fraction > tol.max_censored_fraction {
            report.warn(format!(
                "censored fraction {:.2e} exceeds {:.0e}",
                self.censored_fraction, tol.max_censored_fraction
            ));
        }
        report.check(Check::new(
            "offset_support",
            self.out_of_range == 0,
            format!("{} offsets outside {{-1, 0, 1}}", self.out_of_range),
        ));

        let small = (self.returned as usize) < tol.claim_min_samples;
        let mut freq_check = |name: String, ok: bool, detail: String| {
            if small {
                report.check(Check::inconclusive(
                    name,
                    format!("{detail} ({} samples)", self.returned),
                ));
            } else {
                report.check(Check::new(name, ok, detail));
            }
        };
        for (&o, &p) in OFFSETS.iter().zip(&EXPECTED) {
            let f = self.frequency(o);
            freq_check(
                format!("frequency_{o}"),
                (f - p).abs() <= tol.claim_tolerance,
                format!("{f:.5} vs {p} ± {}", tol.claim_tolerance),
            );
        }
        let gap = (self.frequency(1) - self.frequency(-1)).abs();
        freq_check(
            "plus_minus_balance".into(),
            gap <= tol.claim_tolerance,
            format!("|P(+1) − P(−1)| = {gap:.5}"),
        );
        freq_check(
            "goodness_of_fit".into(),
            self.fit.p_value >= tol.alpha,
            format!(
                "chi2 = {:.3}, p = {:.4}",
                self.fit.statistic, self.fit.p_value
            ),
        );
        for l in RETURN_TIME_BINS {
            let (n, fit) = self.conditional_fit(l);
            let name = format!("goodness_of_fit_return_time_{l}");
            let detail = format!(
                "chi2 = {:.3}, p = {:.4}, n = {n}",
                fit.statistic, fit.p_value
            );
            if (n as usize) < tol.min_bin_samples {
                report.check(Check::inconclusive(name, detail));
            } else {
                report.check(Check::new(name, fit.p_value >= tol.alpha, detail));
            }
        }
        report
    }
}
