use std::sync::Arc;

use irslab_core::group::fixtures::{dihedral, symmetric};
use irslab_core::group::{free_ball_size, GroupElement, HomImages, Letter, MarkedGroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..2 * rank).prop_map(Letter::from_index), 0..max_len)
}

proptest! {
    #[test]
    fn free_reduction_is_idempotent(w in letters(3, 40)) {
        let f3 = MarkedGroup::free(3).unwrap();
        let once = f3.reduce_word(&w).unwrap();
        let twice = f3.reduce_word(once.as_word().unwrap()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn finite_reduction_is_idempotent(w in letters(2, 40)) {
        let s4 = symmetric(4);
        let once = s4.reduce_word(&w).unwrap();
        let geodesic = s4.word_of(&once).unwrap();
        prop_assert_eq!(s4.reduce_word(&geodesic).unwrap(), once);
    }

    #[test]
    fn parse_format_round_trip(w in letters(2, 20)) {
        let f2 = MarkedGroup::free(2).unwrap();
        let text = f2.format_word(&w);
        prop_assert_eq!(f2.parse_word(&text).unwrap(), if w.is_empty() { vec![] } else { w });
    }
}

#[test]
fn free_ball_sizes_match_closed_form() {
    for rank in 1..=3 {
        let g = MarkedGroup::free(rank).unwrap();
        let mut last = 0;
        for r in 0..=8 {
            if rank == 3 && r > 6 {
                break;
            }
            let n = g.ball(r).unwrap().len();
            // 1 + Σ 2k(2k−1)^{r−1}, summed independently of the library helper
            let k = 2 * rank as u128;
            let expected: u128 = 1 + (1..=r as u32).map(|i| k * (k - 1).pow(i - 1)).sum::<u128>();
            assert_eq!(n as u128, expected);
            assert_eq!(free_ball_size(rank, r), Some(expected));
            assert!(n >= last);
            last = n;
        }
    }
}

#[test]
fn finite_balls_are_nondecreasing_and_exhaust() {
    for g in [symmetric(4), dihedral(5)] {
        let sizes: Vec<usize> = (0..8).map(|r| g.ball(r).unwrap().len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*sizes.last().unwrap(), g.order().unwrap());
    }
}

#[test]
fn homomorphisms_are_multiplicative() {
    let f2 = MarkedGroup::free(2).unwrap();
    let s4 = symmetric(4);
    let target = s4.finite_arc().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let images = HomImages::from_generators(
            Arc::clone(&target),
            &[rng.gen_range(0..24), rng.gen_range(0..24)],
        );
        let word = |rng: &mut ChaCha8Rng| -> GroupElement {
            let len = rng.gen_range(0..12);
            let w: Vec<Letter> = (0..len).map(|_| Letter::from_index(rng.gen_range(0..4))).collect();
            f2.reduce_word(&w).unwrap()
        };
        let g = word(&mut rng);
        let h = word(&mut rng);
        let gh = f2.multiply(&g, &h).unwrap();
        let lhs = f2.evaluate_hom(&images, &gh).unwrap();
        let rhs = target.mul(f2.evaluate_hom(&images, &g).unwrap(), f2.evaluate_hom(&images, &h).unwrap());
        assert_eq!(lhs, rhs);
    }
}
