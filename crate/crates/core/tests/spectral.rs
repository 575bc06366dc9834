use irslab_core::group::MarkedGroup;
use irslab_core::spectral::{
    bs_local_statistics, cayley_spectral_radius_estimate, cycle_kernel, cycle_rho0, markov_spectral_radius_rho0,
    rho0_dense, rho0_power, SchreierGraph,
};
use irslab_core::Rational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(seed: u64, n: usize) -> SchreierGraph {
    let f2 = MarkedGroup::free(2).unwrap();
    SchreierGraph::random(&f2, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn markov_operator_is_symmetric_and_stochastic(seed in 0u64..10_000, n in 2usize..60) {
        let g = random_graph(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut mx = vec![0.0; n];
        let mut my = vec![0.0; n];
        g.apply_markov(&x, &mut mx);
        g.apply_markov(&y, &mut my);
        let lhs: f64 = mx.iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = x.iter().zip(&my).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() < 1e-12);
        let mut m1 = vec![0.0; n];
        g.apply_markov(&vec![1.0; n], &mut m1);
        prop_assert!(m1.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let r = rho0_dense(&g).unwrap();
        prop_assert!(r <= 1.0 + 1e-12);
    }

    #[test]
    fn rho0_is_invariant_under_relabeling(seed in 0u64..10_000, n in 2usize..80) {
        let g = random_graph(seed, n);
        let h = g.shuffled(&mut ChaCha8Rng::seed_from_u64(seed + 1));
        prop_assert!((rho0_dense(&g).unwrap() - rho0_dense(&h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn ball_statistics_are_relabeling_invariant(seed in 0u64..10_000, n in 1usize..80, r in 0usize..3) {
        let g = random_graph(seed, n);
        let h = g.shuffled(&mut ChaCha8Rng::seed_from_u64(seed + 2));
        let a = bs_local_statistics(&g, r);
        let b = bs_local_statistics(&h, r);
        prop_assert_eq!(a.total(), Rational::from_integer(1.into()));
        prop_assert_eq!(a, b);
    }
}

#[test]
fn dense_and_power_iteration_agree() {
    let tol = 1e-9;
    for (seed, n) in [(1, 10), (2, 50), (3, 200), (4, 600)] {
        let g = random_graph(seed, n);
        let dense = rho0_dense(&g).unwrap();
        let power = rho0_power(&g, tol).unwrap();
        assert!((dense - power).abs() <= 10.0 * tol.max(1e-6), "n = {n}: {dense} vs {power}");
    }
}

#[test]
fn cycle_family_closed_form() {
    for n in [2, 3, 4, 8, 16, 32, 64] {
        let g = SchreierGraph::from_subgroup(&cycle_kernel(n).unwrap()).unwrap();
        let r = markov_spectral_radius_rho0(&g, 1e-12).unwrap();
        assert!((r - cycle_rho0(n)).abs() < 1e-9);
    }
}

#[test]
fn cayley_interval_shrinks() {
    let f2 = MarkedGroup::free(2).unwrap();
    let target = 3f64.sqrt() / 2.0;
    let mut prev: Option<(f64, f64)> = None;
    for r in [4, 6, 8, 10, 12, 14] {
        let iv = cayley_spectral_radius_estimate(&f2, r).unwrap();
        assert!(iv.lower <= iv.upper && iv.contains(target));
        if let Some((lo, hi)) = prev {
            assert!(iv.lower >= lo && iv.upper <= hi);
        }
        prev = Some((iv.lower, iv.upper));
    }
}
