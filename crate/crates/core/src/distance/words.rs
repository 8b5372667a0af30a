//! Constructive generator words for transpositions, cycles and arbitrary
//! permutations.
//!
//! All words are meant to be evaluated by right multiplication. Right
//! multiplying `(g, π)` by a word that evaluates to `(0, ρ)` from the
//! identity gives `(g, (g ρ g⁻¹) ∘ π)`, so a transposition word for offset
//! `h` applied while standing on `g` left-composes `<g, g + h>` onto the
//! current arrangement and leaves the mixer on `g`.

use crate::algebra::{
    checked_sub, Cycle, Direction, Generator, GeneratorWord, Site, SitePermutation,
};
use crate::error::{MixerError, Result};

use super::cover::covering_path;

/// Whether no suffix of the step sequence sums to zero, i.e. for every `ℓ`
/// the product `u_ℓ ⋯ u_k` is not the identity of Z.
pub fn is_generator_simple_path(steps: &[Direction]) -> bool {
    let mut suffix: Site = 0;
    for d in steps.iter().rev() {
        suffix += d.step();
        if suffix == 0 {
            return false;
        }
    }
    true
}

/// Word for `(0, <0, u_1 + ⋯ + u_k>)` along a generator simple path:
///
/// `∏_{j<k} [S(u_j) M(u_j)] · S(u_k) · ∏_{j<k} [S(-u_{k-j}) M(-u_{k-j})]`.
///
/// The word has length `4k − 3`.
pub fn transposition_word_along(steps: &[Direction]) -> Result<GeneratorWord> {
    if steps.is_empty() || !is_generator_simple_path(steps) {
        return Err(MixerError::ZeroTransposition);
    }
    let k = steps.len();
    let mut word = GeneratorWord::new();
    for &u in &steps[..k - 1] {
        word.push(Generator::swap(u));
        word.push(Generator::mov(u));
    }
    word.push(Generator::swap(steps[k - 1]));
    for &u in steps[..k - 1].iter().rev() {
        let back = u.reversed();
        word.push(Generator::swap(back));
        word.push(Generator::mov(back));
    }
    Ok(word)
}

/// Word of length `4|h| − 3` evaluating to `(0, <0, h>)`, built along the
/// monotone path from 0 to `h`.
pub fn transposition_word(h: Site) -> Result<GeneratorWord> {
    let d = Direction::of(h).ok_or(MixerError::ZeroTransposition)?;
    let steps = vec![d; h.unsigned_abs() as usize];
    transposition_word_along(&steps)
}

/// Word taking `(g_start, id)` to `(g_start, c)` for a cycle `c` whose orbit
/// contains `g_start`.
///
/// With the orbit listed as `g_1 = g_start, g_2, …, g_n`,
///
/// `c = <g_2, g_3> ∘ <g_3, g_4> ∘ ⋯ ∘ <g_{n−1}, g_n> ∘ <g_n, g_1>`,
///
/// so the word swaps `<g_1, g_n>` from `g_1`, walks to `g_n`, swaps
/// `<g_n, g_{n−1}>`, walks to `g_{n−1}`, …, swaps `<g_3, g_2>` from `g_3`,
/// then walks straight back to `g_1`. Each transposition costs `4d − 3` and
/// each walk `d`; the return walk is at most `d(g_3, g_2) + d(g_2, g_1)`, so
/// the total is at most `5 Σ_j d(g_j, c(g_j)) − 4 d(g_1, g_2) − 3(n − 1)`.
pub fn cycle_word(g_start: Site, c: &Cycle) -> Result<GeneratorWord> {
    let cycle = c
        .rotated_to(g_start)
        .ok_or(MixerError::StartNotInOrbit { site: g_start })?;
    let orbit = cycle.orbit();
    let n = orbit.len();
    let mut word = GeneratorWord::new();
    // anchor sequence: g_1, g_n, g_{n-1}, ..., g_3; partner of anchor g_i is
    // its predecessor in the orbit (g_n for g_1).
    let mut here = orbit[0];
    let anchors = std::iter::once(0).chain((2..n).rev());
    for i in anchors {
        let anchor = orbit[i];
        let partner = orbit[(i + n - 1) % n];
        word.push_moves(checked_sub(anchor, here)?);
        word.extend_from(&transposition_word(checked_sub(partner, anchor)?)?);
        here = anchor;
    }
    word.push_moves(checked_sub(g_start, here)?);
    Ok(word)
}

/// Word taking `(g, id)` to `(g, σ)` with length at most
/// `2·Cov(g, σ) + 5·Σ |σ(x) − x|`.
///
/// Walks the minimal covering path from `g`; the first time it stands on a
/// site of a cycle not yet built, it builds that whole cycle in place. After
/// the last cycle it walks straight back to `g`.
pub fn upper_bound_word(g: Site, sigma: &SitePermutation) -> Result<GeneratorWord> {
    let mut word = GeneratorWord::new();
    if sigma.is_identity() {
        return Ok(word);
    }
    let cycles = sigma.cycle_decomposition();
    let mut built = vec![false; cycles.len()];
    let mut remaining = cycles.len();
    let path = covering_path(g, sigma);
    let mut here = g;
    for &site in path.sites() {
        if remaining == 0 {
            break;
        }
        let Some(idx) = cycles.iter().position(|c| c.contains(site)) else {
            continue;
        };
        if built[idx] {
            continue;
        }
        word.push_moves(checked_sub(site, here)?);
        word.extend_from(&cycle_word(site, &cycles[idx])?);
        built[idx] = true;
        remaining -= 1;
        here = site;
    }
    debug_assert_eq!(remaining, 0, "covering path missed part of the support");
    word.push_moves(checked_sub(g, here)?);
    Ok(word)
}
