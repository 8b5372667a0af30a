//! Exact laws of `V_t(z)` and `L_{2t}(2z)` by dynamic programming.
//!
//! The mixer's position relative to tile `z`, `D_t = S_t − σ_t(z)`, is itself
//! a Markov chain started at `−z`:
//!
//! * from `0` it jumps to `±1` with probability 1/2 each (a move carries the
//!   mixer off the tile, a swap carries the tile off the mixer);
//! * from `±1` it goes to `0` w.p. 1/2 (move or swap towards the tile),
//!   to `±2` w.p. 1/4 and stays w.p. 1/4 (swap on the far edge);
//! * from `|d| ≥ 2` it is a lazy walk.
//!
//! `V_t(z)` counts the visits of `D` to `0` during `0..=t`. The local time
//! `L_{2t}(2z)` of a simple walk has the law of the number of visits of a lazy
//! walk `W` to `z` during `0..=t`, since `(S'_{2j})_j` and `(2 W_j)_j` agree in
//! law.

use crate::algebra::Site;
use crate::error::{MixerError, Result};

const NEGLIGIBLE: f64 = 1e-18;

#[derive(Clone, Copy)]
enum Chain {
    TileRelative,
    Lazy,
}

/// `P[count = k]` for `k < k_cap`, with the last entry `P[count ≥ k_cap]`.
fn visit_law(chain: Chain, start: Site, target: Site, t: u64, k_cap: usize) -> Result<Vec<f64>> {
    let reach = start.unsigned_abs().max(target.unsigned_abs()) + t + 2;
    if reach > 1 << 20 || k_cap == 0 {
        return Err(MixerError::Config(format!(
            "exact law too large: t = {t}, k_cap = {k_cap}"
        )));
    }
    let r = reach as i64;
    let width = (2 * r + 1) as usize;
    let stride = k_cap + 1;
    let idx = |d: i64| (d + r) as usize;
    let mut p = vec![0.0f64; width * stride];
    let mut q = vec![0.0f64; width * stride];
    let first = usize::from(start == target);
    p[idx(start) * stride + first] = 1.0;

    // Live band of distances; rows at its edges holding less than
    // `NEGLIGIBLE` mass are dropped.
    let (mut lo, mut hi) = (start, start);
    for step in 0..t {
        let top = (step as usize + 2).min(stride);
        let (from, to) = ((lo - 1).max(-r + 1), (hi + 1).min(r - 1));
        for d in from - 1..=to + 1 {
            q[idx(d) * stride..idx(d) * stride + (top + 1).min(stride)]
                .iter_mut()
                .for_each(|x| *x = 0.0);
        }
        for d in lo..=hi {
            let row = &p[idx(d) * stride..idx(d) * stride + top];
            let moves: &[(i64, f64)] = match chain {
                Chain::Lazy => &[(0, 0.5), (1, 0.25), (-1, 0.25)],
                Chain::TileRelative => match d {
                    0 => &[(1, 0.5), (-1, 0.5)],
                    1 => &[(-1, 0.5), (1, 0.25), (0, 0.25)],
                    -1 => &[(1, 0.5), (-1, 0.25), (0, 0.25)],
                    _ => &[(0, 0.5), (1, 0.25), (-1, 0.25)],
                },
            };
            for &(step, w) in moves {
                let to = d + step;
                let bump = usize::from(to == target);
                let base = idx(to) * stride;
                for (k, &x) in row.iter().enumerate() {
                    q[base + (k + bump).min(k_cap)] += w * x;
                }
            }
        }
        std::mem::swap(&mut p, &mut q);
        let mass = |d: i64| {
            p[idx(d) * stride..idx(d) * stride + top]
                .iter()
                .sum::<f64>()
        };
        (lo, hi) = (from, to);
        while lo < hi && lo != target && mass(lo) < NEGLIGIBLE {
            lo += 1;
        }
        while hi > lo && hi != target && mass(hi) < NEGLIGIBLE {
            hi -= 1;
        }
    }
    let mut law = vec![0.0; stride];
    for d in idx(lo)..=idx(hi) {
        for k in 0..stride {
            law[k] += p[d * stride + k];
        }
    }
    Ok(law)
}

/// Exact law of `V_t(z)`, truncated at `k_cap`.
pub fn exact_visit_law(z: Site, t: u64, k_cap: usize) -> Result<Vec<f64>> {
    visit_law(Chain::TileRelative, -z, 0, t, k_cap)
}

/// Exact law of `L_{2t}(2z)`, truncated at `k_cap`.
pub fn exact_local_time_law(z: Site, t: u64, k_cap: usize) -> Result<Vec<f64>> {
    visit_law(Chain::Lazy, 0, z, t, k_cap)
}

/// `P[X ≥ k]` for `k = 0..=k_cap` from a truncated law.
pub fn law_tails(law: &[f64]) -> Vec<f64> {
    let mut tails = vec![0.0; law.len()];
    let mut acc = 0.0;
    for k in (0..law.len()).rev() {
        acc += law[k];
        tails[k] = acc;
    }
    tails
}
