use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{Check, Report};
use crate::algebra::MixerElement;
use crate::distance::{bfs_ball, covering_number, lower_bound, upper_bound_word, BfsLimits};
use crate::error::Result;

pub fn key_hex(key: &[u8]) -> String {
    hex::encode(key)
}

/// `2·Cov(0, σ) + 5·Σ + |g|`: build σ from the origin, then walk to `g`.
pub fn relative_upper_bound(el: &MixerElement) -> u64 {
    2 * covering_number(0, &el.perm) + 5 * el.perm.displacement_sum() + el.position.unsigned_abs()
}

/// Word from the identity to `el` realising [`relative_upper_bound`].
pub fn relative_upper_word(el: &MixerElement) -> Result<crate::algebra::GeneratorWord> {
    let mut w = upper_bound_word(0, &el.perm)?;
    w.push_moves(el.position);
    Ok(w)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SandwichLayer {
    pub distance: u32,
    pub count: usize,
    pub min_lower_slack: u64,
    pub max_lower_slack: u64,
    pub min_upper_slack: u64,
    pub max_upper_slack: u64,
    pub max_witness_len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichViolation {
    pub key: String,
    pub element: String,
    pub exact: u32,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub radius: u32,
    pub ball_size: usize,
    pub layers: Vec<SandwichLayer>,
    pub violations: Vec<SandwichViolation>,
}

/// Checks `⌈Σ/2⌉ ≤ D ≤ 2·Cov(0, σ) + 5·Σ + |g|` for every element of the
/// ball of the given radius, using exact BFS distances `D`, and checks that
/// the constructive word for the upper bound reaches the element.
pub fn verify_sandwich(radius: u32, limits: &BfsLimits) -> Result<SandwichReport> {
    let ball = bfs_ball(radius, limits)?;
    let mut layers: BTreeMap<u32, SandwichLayer> = BTreeMap::new();
    let mut violations = Vec::new();
    // deterministic order for reporting
    let mut entries: Vec<(&Vec<u8>, &u32)> = ball.iter().collect();
    entries.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));

    for (key, &exact) in entries {
        let el = MixerElement::from_canonical_key(key)?;
        let lower = lower_bound(&el.perm);
        let upper = relative_upper_bound(&el);
        let word = relative_upper_word(&el)?;
        let d = exact as u64;
        let mut fail = |reason: String| {
            violations.push(SandwichViolation {
                key: key_hex(key),
                element: el.to_string(),
                exact,
                reason,
            })
        };
        if lower > d {
            fail(format!("lower bound {lower} exceeds exact distance {d}"));
        }
        if d > upper {
            fail(format!("exact distance {d} exceeds upper bound {upper}"));
        }
        if word.len() as u64 > upper {
            fail(format!(
                "witness length {} exceeds upper bound {upper}",
                word.len()
            ));
        }
        if (word.len() as u64) < d {
            fail(format!(
                "witness length {} is below the exact distance {d}",
                word.len()
            ));
        }
        if word.evaluate()? != el {
            fail("witness word does not evaluate to the element".into());
        }
        let layer = layers.entry(exact).or_insert_with(|| SandwichLayer {
            distance: exact,
            min_lower_slack: u64::MAX,
            min_upper_slack: u64::MAX,
            ..Default::default()
        });
        let lower_slack = d.saturating_sub(lower);
        let upper_slack = upper.saturating_sub(d);
        layer.count += 1;
        layer.min_lower_slack = layer.min_lower_slack.min(lower_slack);
        layer.max_lower_slack = layer.max_lower_slack.max(lower_slack);
        layer.min_upper_slack = layer.min_upper_slack.min(upper_slack);
        layer.max_upper_slack = layer.max_upper_slack.max(upper_slack);
        layer.max_witness_len = layer.max_witness_len.max(word.len());
    }
    Ok(SandwichReport {
        radius,
        ball_size: ball.len(),
        layers: layers.into_values().collect(),
        violations,
    })
}

pub const SANDWICH_COLUMNS: &[&str] = &[
    "distance",
    "count",
    "min_lower_slack",
    "max_lower_slack",
    "min_upper_slack",
    "max_upper_slack",
    "max_witness_len",
];

impl SandwichReport {
    pub fn to_report(&self, config: serde_json::Value) -> Report {
        let mut report = Report::new("sandwich", config, SANDWICH_COLUMNS);
        for l in &self.layers {
            report.push_row(vec![
                json!(l.distance),
                json!(l.count),
                json!(l.min_lower_slack),
                json!(l.max_lower_slack),
                json!(l.min_upper_slack),
                json!(l.max_upper_slack),
                json!(l.max_witness_len),
            ]);
        }
        report
            .fitted
            .insert("ball_size".into(), self.ball_size as f64);
        let max_lower = self
            .layers
            .iter()
            .map(|l| l.max_lower_slack)
            .max()
            .unwrap_or(0);
        let max_upper = self
            .layers
            .iter()
            .map(|l| l.max_upper_slack)
            .max()
            .unwrap_or(0);
        report
            .fitted
            .insert("max_lower_slack".into(), max_lower as f64);
        report
            .fitted
            .insert("max_upper_slack".into(), max_upper as f64);
        match self.violations.first() {
            None => report.check(Check::new(
                "sandwich",
                true,
                format!(
                    "{} elements within radius {}, no violations",
                    self.ball_size, self.radius
                ),
            )),
            Some(v) => report.check(
                Check::new(
                    "sandwich",
                    false,
                    format!(
                        "{} violations; first: {} at {} ({})",
                        self.violations.len(),
                        v.reason,
                        v.element,
                        v.exact
                    ),
                )
                .with_replay(format!("canonical_key={}", v.key)),
            ),
        }
        report
    }
}

/// Exact distance and both bounds for a single element, e.g. `(0, <0,2>)`.
pub fn sandwich_point(
    el: &MixerElement,
    radius: u32,
    limits: &BfsLimits,
) -> Result<(u64, Option<u32>, u64)> {
    let exact = crate::distance::bfs_distance(el, radius, limits)?.exact();
    Ok((lower_bound(&el.perm), exact, relative_upper_bound(el)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SitePermutation;

    #[test]
    fn radius_one() {
        let rep = verify_sandwich(1, &BfsLimits::default()).unwrap();
        assert_eq!(rep.ball_size, 5);
        assert!(rep.violations.is_empty());
        let layer1 = &rep.layers[1];
        assert_eq!(layer1.count, 4);
        let t01 = MixerElement::new(0, SitePermutation::transposition(0, 1));
        assert_eq!(sandwich_point(&t01, 1, &BfsLimits::default()).unwrap().0, 1);
    }

    #[test]
    fn transposition_two_spot_values() {
        let el = MixerElement::new(0, SitePermutation::transposition(0, 2));
        let (lower, exact, upper) = sandwich_point(&el, 8, &BfsLimits::default()).unwrap();
        assert_eq!((lower, exact, upper), (2, Some(5), 24));
    }

    #[test]
    fn radius_five_clean() {
        let rep = verify_sandwich(5, &BfsLimits::default()).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations.first());
        assert!(rep.to_report(json!({})).passed);
    }
}
