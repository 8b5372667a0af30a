use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{Check, Report};
use crate::algebra::{Cycle, MixerElement, Site, SitePermutation};
use crate::distance::{covering_number, cycle_word, transposition_word, upper_bound_word};
use crate::error::{MixerError, Result};
use crate::sim::SeedStream;

/// Random permutation moving only sites in `[−radius, radius]`: a uniform
/// shuffle of a uniformly sized random subset of that window.
pub fn random_permutation<R: Rng>(rng: &mut R, radius: Site) -> SitePermutation {
    let window: Vec<Site> = (-radius..=radius).collect();
    let size = rng.random_range(0..=window.len());
    let chosen: Vec<Site> = window.choose_multiple(rng, size).copied().collect();
    let mut images = chosen.clone();
    images.shuffle(rng);
    SitePermutation::from_pairs(chosen.into_iter().zip(images)).expect("shuffle is a bijection")
}

/// Length bound for [`cycle_word`] started at the first orbit point:
/// `5 Σ_j d(g_j, c(g_j)) − 4 d(g_1, g_2) − 3 (n − 1)`.
pub fn cycle_word_bound(c: &Cycle) -> u64 {
    let o = c.orbit();
    5 * c.displacement_sum() - 4 * o[0].abs_diff(o[1]) - 3 * (o.len() as u64 - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranspositionRow {
    pub h: Site,
    pub length: usize,
    pub expected: u64,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordFailure {
    pub index: u64,
    pub seed: u64,
    pub permutation: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordsReport {
    pub seed: u64,
    pub max_support: Site,
    pub transpositions: Vec<TranspositionRow>,
    pub n_random: usize,
    pub cycles_checked: usize,
    /// Largest `|upper_bound_word| / (2 Cov + 5 Σ)` seen over non-identity samples.
    pub max_upper_ratio: f64,
    pub failures: Vec<WordFailure>,
}

fn check_random(sigma: &SitePermutation, start: Site) -> Result<(usize, f64, Option<String>)> {
    let bound = 2 * covering_number(start, sigma) + 5 * sigma.displacement_sum();
    let word = upper_bound_word(start, sigma)?;
    let from = MixerElement::new(start, SitePermutation::identity());
    if word.evaluate_from(&from)? != MixerElement::new(start, sigma.clone()) {
        return Ok((
            0,
            0.0,
            Some("upper_bound_word does not reach the target".into()),
        ));
    }
    if word.len() as u64 > bound {
        return Ok((
            0,
            0.0,
            Some(format!("upper_bound_word length {} > {bound}", word.len())),
        ));
    }
    let ratio = if bound == 0 {
        0.0
    } else {
        word.len() as f64 / bound as f64
    };
    let cycles = sigma.cycle_decomposition();
    for c in &cycles {
        let g1 = c.orbit()[0];
        let w = cycle_word(g1, c)?;
        let target = MixerElement::new(g1, c.to_permutation());
        if w.evaluate_from(&MixerElement::new(g1, SitePermutation::identity()))? != target {
            return Ok((
                0,
                ratio,
                Some(format!("cycle_word for {c} does not reach the target")),
            ));
        }
        let cb = cycle_word_bound(c);
        if w.len() as u64 > cb {
            return Ok((
                0,
                ratio,
                Some(format!("cycle_word for {c} has length {} > {cb}", w.len())),
            ));
        }
    }
    Ok((cycles.len(), ratio, None))
}

/// Validates every word synthesiser: `transposition_word(h)` for all
/// `0 < |h| ≤ max_support`, and `upper_bound_word` plus `cycle_word` on
/// `n_random` random permutations supported in `[−max_support, max_support]`.
/// Sample `i` draws from `SeedStream::new(seed).child(3).seed(i)`.
pub fn verify_words(n_random: usize, max_support: Site, seed: u64) -> Result<WordsReport> {
    if max_support < 1 {
        return Err(MixerError::Config("max_support must be at least 1".into()));
    }
    let mut failures = Vec::new();
    let mut transpositions = Vec::new();
    for h in (-max_support..=max_support).filter(|&h| h != 0) {
        let w = transposition_word(h)?;
        let expected = 4 * h.unsigned_abs() - 3;
        let valid = w.evaluate()? == MixerElement::new(0, SitePermutation::transposition(0, h));
        if !valid || w.len() as u64 != expected {
            failures.push(WordFailure {
                index: 0,
                seed,
                permutation: format!("<0,{h}>"),
                reason: format!(
                    "transposition_word({h}): valid={valid}, length {} (expected {expected})",
                    w.len()
                ),
            });
        }
        transpositions.push(TranspositionRow {
            h,
            length: w.len(),
            expected,
            valid,
        });
    }

    let seeds = SeedStream::new(seed).child(3);
    let mut cycles_checked = 0;
    let mut max_upper_ratio = 0.0f64;
    for i in 0..n_random as u64 {
        let s = seeds.seed(i);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let sigma = random_permutation(&mut rng, max_support);
        let start = rng.random_range(-max_support..=max_support);
        let (n_cycles, ratio, failure) = check_random(&sigma, start)?;
        cycles_checked += n_cycles;
        max_upper_ratio = max_upper_ratio.max(ratio);
        if let Some(reason) = failure {
            failures.push(WordFailure {
                index: i,
                seed: s,
                permutation: sigma.to_string(),
                reason,
            });
        }
    }
    Ok(WordsReport {
        seed,
        max_support,
        transpositions,
        n_random,
        cycles_checked,
        max_upper_ratio,
        failures,
    })
}

pub const WORDS_COLUMNS: &[&str] = &["h", "length", "expected", "valid"];

impl WordsReport {
    pub fn to_report(&self, config: serde_json::Value) -> Report {
        let mut report = Report::new("words", config, WORDS_COLUMNS);
        for r in &self.transpositions {
            report.push_row(vec![
                json!(r.h),
                json!(r.length),
                json!(r.expected),
                json!(r.valid),
            ]);
        }
        report
            .fitted
            .insert("cycles_checked".into(), self.cycles_checked as f64);
        report
            .fitted
            .insert("max_upper_ratio".into(), self.max_upper_ratio);
        match self.failures.first() {
            None => report.check(Check::new(
                "words",
                true,
                format!(
                    "{} transposition words and {} random permutations valid",
                    self.transpositions.len(),
                    self.n_random
                ),
            )),
            Some(f) => report.check(
                Check::new(
                    "words",
                    false,
                    format!(
                        "{} failures; first: {} ({})",
                        self.failures.len(),
                        f.reason,
                        f.permutation
                    ),
                )
                .with_replay(format!("index={} seed={}", f.index, f.seed)),
            ),
        }
        report
    }
}
