//! Small statistics toolkit for the Monte Carlo checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

/// Running mean and variance (Welford).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; 0 with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.n as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Ordinary least squares fit `y = intercept + slope·x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let sst: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope_std_error = if n > 2 {
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    let r_squared = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    Some(LinearFit {
        slope,
        intercept,
        slope_std_error,
        r_squared,
        residuals,
    })
}

/// Result of a chi-square test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
    pub bins: usize,
}

fn chi_square_p(statistic: f64, dof: u32) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    (1.0 - dist.cdf(statistic)).max(0.0)
}

/// Two-sample chi-square homogeneity test on integer-valued samples.
///
/// Values are binned by integer, then adjacent bins (in value order) are
/// merged until each merged bin holds at least `min_count` observations
/// across both samples.
pub fn two_sample_chi_square(a: &[i64], b: &[i64], min_count: u64) -> ChiSquareTest {
    let mut counts: BTreeMap<i64, (u64, u64)> = BTreeMap::new();
    for &x in a {
        counts.entry(x).or_default().0 += 1;
    }
    for &x in b {
        counts.entry(x).or_default().1 += 1;
    }
    let mut bins: Vec<(u64, u64)> = Vec::new();
    let mut acc = (0u64, 0u64);
    for (_, (ca, cb)) in counts {
        acc.0 += ca;
        acc.1 += cb;
        if acc.0 + acc.1 >= min_count {
            bins.push(acc);
            acc = (0, 0);
        }
    }
    if acc.0 + acc.1 > 0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let total = na + nb;
    let mut statistic = 0.0;
    for &(ca, cb) in &bins {
        let row = (ca + cb) as f64;
        let ea = row * na / total;
        let eb = row * nb / total;
        if ea > 0.0 {
            statistic += (ca as f64 - ea).powi(2) / ea;
        }
        if eb > 0.0 {
            statistic += (cb as f64 - eb).powi(2) / eb;
        }
    }
    let dof = bins.len().saturating_sub(1) as u32;
    ChiSquareTest {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
        bins: bins.len(),
    }
}

/// Pearson goodness-of-fit of observed cell counts against probabilities.
pub fn goodness_of_fit(observed: &[u64], probs: &[f64]) -> ChiSquareTest {
    let n: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            if e > 0.0 {
                (o as f64 - e).powi(2) / e
            } else {
                0.0
            }
        })
        .sum();
    let dof = observed.len().saturating_sub(1) as u32;
    ChiSquareTest {
        statistic,
        dof,
        p_value: chi_square_p(statistic, dof),
        bins: observed.len(),
    }
}

/// Exact (Clopper–Pearson) two-sided confidence interval for a binomial
/// proportion at level `1 − alpha`.
pub fn clopper_pearson(successes: u64, trials: u64, alpha: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let k = successes as f64;
    let n = trials as f64;
    let lower = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("valid beta")
            .inverse_cdf(alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("valid beta")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (lower, upper)
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

pub fn two_sample_ks(a: &[i64], b: &[i64]) -> KsTest {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_unstable();
    xb.sort_unstable();
    let (na, nb) = (xa.len(), xb.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let v = xa[i].min(xb[j]);
        while i < na && xa[i] == v {
            i += 1;
        }
        while j < nb && xb[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    KsTest {
        statistic: d,
        p_value: kolmogorov_q(lambda),
    }
}

/// `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} exp(−2k²λ²)`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = 2.0 * (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Empirical tail `P[X ≥ k]` for `k = 0..=k_max`.
pub fn tail_probabilities(values: &[u64], k_max: u64) -> Vec<f64> {
    let n = values.len() as f64;
    let mut hist = vec![0u64; k_max as usize + 2];
    for &v in values {
        hist[(v.min(k_max + 1)) as usize] += 1;
    }
    let mut tails = vec![0.0; k_max as usize + 1];
    let mut acc = hist[k_max as usize + 1];
    for k in (0..=k_max as usize).rev() {
        acc += hist[k];
        tails[k] = acc as f64 / n;
    }
    tails
}

/// The `q`-quantile (nearest rank) of unsigned values.
pub fn quantile(values: &[u64], q: f64) -> u64 {
    if values.is_empty() {
        return 0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_small_sample() {
        let m: Moments = [1.0, 2.0, 3.0, 4.0].into_iter().collect();
        assert_eq!(m.mean(), 2.5);
        assert!((m.variance() - 5.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.75 * x - 2.0).collect();
        let fit = ols(&xs, &ys).unwrap();
        assert!((fit.slope - 0.75).abs() < 1e-12);
        assert!((fit.intercept + 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(ols(&[1.0], &[1.0]).is_none());
        assert!(ols(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn chi_square_identical_samples() {
        let a: Vec<i64> = (0..1000).map(|i| i % 7).collect();
        let t = two_sample_chi_square(&a, &a, 10);
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.p_value, 1.0);
        assert_eq!(t.dof, 6);
    }

    #[test]
    fn chi_square_detects_shift() {
        let a: Vec<i64> = (0..2000).map(|i| i % 10).collect();
        let b: Vec<i64> = (0..2000).map(|i| i % 10 + 3).collect();
        assert!(two_sample_chi_square(&a, &b, 10).p_value < 1e-6);
    }

    #[test]
    fn chi_square_p_value_reference() {
        // P[χ²_2 ≥ 2 ln 20] = 0.05
        assert!((chi_square_p(2.0 * 20f64.ln(), 2) - 0.05).abs() < 1e-9);
    }

    #[test]
    fn goodness_of_fit_exact_match() {
        let t = goodness_of_fit(&[25, 50, 25], &[0.25, 0.5, 0.25]);
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.dof, 2);
    }

    #[test]
    fn clopper_pearson_brackets_estimate() {
        let (lo, hi) = clopper_pearson(50, 100, 0.001);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(lo > 0.3 && hi < 0.7);
        assert_eq!(clopper_pearson(0, 10, 0.05).0, 0.0);
        assert_eq!(clopper_pearson(10, 10, 0.05).1, 1.0);
        // n = 10, k = 0 at 95%: upper = 1 − 0.025^{1/10}
        let upper = clopper_pearson(0, 10, 0.05).1;
        assert!((upper - (1.0 - 0.025f64.powf(0.1))).abs() < 1e-9);
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<i64> = (0..500).collect();
        assert_eq!(two_sample_ks(&a, &a).statistic, 0.0);
        let b: Vec<i64> = (250..750).collect();
        let t = two_sample_ks(&a, &b);
        assert!((t.statistic - 0.5).abs() < 1e-12);
        assert!(t.p_value < 1e-10);
    }

    #[test]
    fn tails_and_quantiles() {
        let v = [0, 1, 1, 2, 5];
        let t = tail_probabilities(&v, 3);
        assert_eq!(t, vec![1.0, 0.8, 0.4, 0.2]);
        assert_eq!(quantile(&v, 0.5), 1);
        assert_eq!(quantile(&v, 0.99), 5);
    }
}
