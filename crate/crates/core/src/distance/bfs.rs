use std::collections::HashMap;

use crate::algebra::{Generator, MixerElement};
use crate::error::{MixerError, Result};

/// Environment variable overriding [`BfsLimits::node_budget`].
pub const NODE_BUDGET_ENV: &str = "MIXER_BFS_NODE_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BfsLimits {
    /// Largest radius a caller may ask for.
    pub radius_limit: u32,
    /// Maximum number of distinct states held at once.
    pub node_budget: usize,
}

impl Default for BfsLimits {
    fn default() -> Self {
        Self {
            radius_limit: 12,
            node_budget: 10_000_000,
        }
    }
}

impl BfsLimits {
    /// Defaults, with the node budget taken from [`NODE_BUDGET_ENV`] when it
    /// is set to a positive integer.
    pub fn from_env() -> Result<Self> {
        let mut limits = Self::default();
        if let Ok(raw) = std::env::var(NODE_BUDGET_ENV) {
            limits.node_budget = raw
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    MixerError::Config(format!(
                        "{NODE_BUDGET_ENV}={raw:?} is not a positive integer"
                    ))
                })?;
        }
        Ok(limits)
    }

    fn check_radius(&self, radius: u32) -> Result<()> {
        if radius > self.radius_limit {
            return Err(MixerError::RadiusTooLarge {
                radius,
                limit: self.radius_limit,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfsOutcome {
    Exact(u32),
    BeyondCap,
}

impl BfsOutcome {
    pub fn exact(self) -> Option<u32> {
        match self {
            BfsOutcome::Exact(d) => Some(d),
            BfsOutcome::BeyondCap => None,
        }
    }
}

/// Canonical key of every discovered element mapped to its distance.
type Ball = HashMap<Vec<u8>, u32>;

/// Layered BFS from the identity by right multiplication. Stops early once
/// `stop_at` is discovered.
fn explore(
    radius: u32,
    limits: &BfsLimits,
    stop_at: Option<&[u8]>,
) -> Result<(Ball, Option<u32>)> {
    let root = MixerElement::identity();
    let mut seen = HashMap::new();
    let root_key = root.canonical_key();
    if stop_at == Some(root_key.as_slice()) {
        seen.insert(root_key, 0);
        return Ok((seen, Some(0)));
    }
    seen.insert(root_key, 0);
    let mut frontier = vec![root];
    for depth in 1..=radius {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for el in &frontier {
            for u in Generator::ALL {
                let child = el.try_apply_generator(u)?;
                let key = child.canonical_key();
                if seen.contains_key(&key) {
                    continue;
                }
                let hit = stop_at == Some(key.as_slice());
                seen.insert(key, depth);
                if hit {
                    return Ok((seen, Some(depth)));
                }
                if seen.len() > limits.node_budget {
                    return Err(MixerError::NodeBudgetExceeded {
                        budget: limits.node_budget,
                        depth,
                    });
                }
                next.push(child);
            }
        }
        frontier = next;
    }
    Ok((seen, None))
}

/// Exact word-length distance from the identity to `target`, or
/// [`BfsOutcome::BeyondCap`] when it exceeds `radius_cap`.
pub fn bfs_distance(
    target: &MixerElement,
    radius_cap: u32,
    limits: &BfsLimits,
) -> Result<BfsOutcome> {
    limits.check_radius(radius_cap)?;
    let key = target.canonical_key();
    let (_, found) = explore(radius_cap, limits, Some(&key))?;
    Ok(found.map_or(BfsOutcome::BeyondCap, BfsOutcome::Exact))
}

/// Every element within `radius` of the identity, keyed by canonical key,
/// with its exact distance.
pub fn bfs_ball(radius: u32, limits: &BfsLimits) -> Result<Ball> {
    limits.check_radius(radius)?;
    Ok(explore(radius, limits, None)?.0)
}
