use std::collections::HashSet;

use mixer_core::distance::{
    bfs_ball, covering_number, lower_bound, upper_bound, upper_bound_word, BfsLimits,
};
use mixer_core::sim::mirror;
use mixer_core::{Generator, MixerElement, SitePermutation};
use proptest::prelude::*;

fn permutation() -> impl Strategy<Value = SitePermutation> {
    (
        proptest::sample::subsequence((-12i64..=12).collect::<Vec<_>>(), 0..=8),
        any::<u64>(),
    )
        .prop_map(|(sites, salt)| {
            let mut images = sites.clone();
            // Deterministic shuffle driven by the salt.
            let mut s = salt;
            for i in (1..images.len()).rev() {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                images.swap(i, (s >> 33) as usize % (i + 1));
            }
            SitePermutation::from_pairs(
                sites
                    .into_iter()
                    .zip(images)
                    .filter(|(x, y)| x != y)
                    .collect::<Vec<_>>(),
            )
            .expect("a shuffle is a bijection")
        })
}

fn element() -> impl Strategy<Value = MixerElement> {
    (-15i64..=15, permutation()).prop_map(|(g, p)| MixerElement::new(g, p))
}

fn generator() -> impl Strategy<Value = Generator> {
    proptest::sample::select(Generator::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn identity_and_inverse(a in element()) {
        let e = MixerElement::identity();
        prop_assert_eq!(&e * &a, a.clone());
        prop_assert_eq!(&a * &e, a.clone());
        prop_assert!((&a * &a.inverse()).is_identity());
        prop_assert!((&a.inverse() * &a).is_identity());
        prop_assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn generator_action_is_right_multiplication(a in element(), u in generator()) {
        prop_assert_eq!(a.apply_generator(u), &a * &u.element());
        prop_assert_eq!(a.apply_generator(u).apply_generator(u.inverse()), a);
    }

    #[test]
    fn cycles_rebuild_the_permutation(p in permutation()) {
        let cycles = p.cycle_decomposition();
        let rebuilt = cycles.iter().fold(SitePermutation::identity(), |acc, c| acc.compose(&c.to_permutation()));
        prop_assert_eq!(&rebuilt, &p);
        let total: u64 = cycles.iter().map(|c| c.displacement_sum()).sum();
        prop_assert_eq!(total, p.displacement_sum());
        prop_assert_eq!(cycles.iter().map(|c| c.len()).sum::<usize>(), p.support_len());
    }

    #[test]
    fn displacement_is_inverse_invariant(p in permutation()) {
        prop_assert_eq!(p.inverse().displacement_sum(), p.displacement_sum());
    }

    #[test]
    fn mirror_is_an_involutive_automorphism(a in element(), b in element()) {
        prop_assert_eq!(mirror(&mirror(&a).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(mirror(&(&a * &b)).unwrap(), &mirror(&a).unwrap() * &mirror(&b).unwrap());
    }

    #[test]
    fn canonical_key_round_trips(a in element()) {
        prop_assert_eq!(MixerElement::from_canonical_key(&a.canonical_key()).unwrap(), a);
    }

    #[test]
    fn bounds_are_ordered_and_witnessed(a in element()) {
        let (g, p) = (a.position, &a.perm);
        let word = upper_bound_word(g, p).unwrap();
        prop_assert_eq!(word.evaluate_from(&MixerElement::new(g, SitePermutation::identity())).unwrap(), a.clone());
        prop_assert!(word.len() as u64 <= upper_bound(g, p));
        prop_assert!(lower_bound(p) <= word.len() as u64);
        if let (Some(lo), Some(hi)) = (p.support_min(), p.support_max()) {
            let width = hi.abs_diff(lo);
            let hull = hi.max(g).abs_diff(lo.min(g));
            let cov = covering_number(g, p);
            prop_assert!(cov >= width.max(lo.abs_diff(g).min(hi.abs_diff(g))));
            prop_assert!(cov <= 2 * hull);
        }
    }
}

#[test]
fn mirror_of_a_swap_step() {
    let e = MixerElement::new(1, SitePermutation::transposition(0, 1));
    assert_eq!(
        mirror(&e).unwrap(),
        MixerElement::new(-1, SitePermutation::transposition(0, -1))
    );
}

#[test]
fn canonical_keys_separate_the_ball() {
    let ball = bfs_ball(6, &BfsLimits::default()).unwrap();
    let mut seen = HashSet::new();
    for key in ball.keys() {
        let e = MixerElement::from_canonical_key(key).unwrap();
        assert_eq!(&e.canonical_key(), key);
        assert!(seen.insert(e.clone()), "two keys decode to {e}");
    }
    assert_eq!(ball.len(), 415);
}
