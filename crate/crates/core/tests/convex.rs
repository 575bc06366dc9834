use irslab_core::convex::fixtures::{
    half_square, klein_reflections, random_body, random_measure, random_point, random_sub_body, signed_permutations,
};
use irslab_core::convex::{
    apply_action, barycenter, extreme_point_check, fix_set, invariant_measure_test, minkowski_sum, BodyMeasure,
    ConvexBody, DirectionSet, MeasureVerdict, Point,
};
use irslab_core::group::GroupElement;
use irslab_core::irs::{conjugacy_class, IrsDistribution};
use irslab_core::rational::{dot, ratio};
use irslab_core::subgroup::{enumerate_subgroups, Subgroup};
use irslab_core::Rational;
use num::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cross2(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// `p` lies in the closed triangle `abc` (possibly degenerate).
fn in_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let d = [cross2(a, b, p), cross2(b, c, p), cross2(c, a, p)];
    let neg = d.iter().any(|x| x.is_negative());
    let pos = d.iter().any(|x| x.is_positive());
    if neg && pos {
        return false;
    }
    if cross2(a, b, c).is_zero() {
        // degenerate triangle: p must lie on one of the segments
        let on = |u: &Point, v: &Point| {
            cross2(u, v, p).is_zero()
                && (0..2).all(|k| p[k] >= u[k].clone().min(v[k].clone()) && p[k] <= u[k].clone().max(v[k].clone()))
        };
        return on(a, b) || on(b, c) || on(a, c);
    }
    true
}

proptest! {
    #[test]
    fn planar_hull_matches_triangle_oracle(seed in 0u64..100_000, n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts: Vec<Point> = (0..n).map(|_| random_point(2, &mut rng)).collect();
        pts.sort();
        pts.dedup();
        let body = ConvexBody::new(2, pts.clone()).unwrap();
        // Carathéodory: a point is not extreme iff it lies in a triangle of the others
        let mut expected = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let others: Vec<&Point> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
            let mut covered = false;
            for a in 0..others.len() {
                for b in a..others.len() {
                    for c in b..others.len() {
                        covered |= in_triangle(p, others[a], others[b], others[c]);
                    }
                }
            }
            if !covered {
                expected.push(p.clone());
            }
        }
        prop_assert_eq!(body.vertices(), expected.as_slice());
    }

    #[test]
    fn support_is_linear_on_vertices(seed in 0u64..100_000, dim in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_body(dim, &mut rng);
        let b = random_point(dim, &mut rng);
        let (hi, lo) = c.support(&b).unwrap();
        let neg: Vec<Rational> = b.iter().map(|x| -x).collect();
        prop_assert_eq!(lo, -c.support(&neg).unwrap().0);
        for v in c.vertices() {
            prop_assert!(dot(&b, v) <= hi);
        }
    }
}

#[test]
fn support_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for i in 0..500 {
        let dim = 2 + i % 2;
        let dirs = DirectionSet::default_for(dim).unwrap();
        let a = random_body(dim, &mut rng);
        let b = random_body(dim, &mut rng);
        let l = rng.gen_range(0..=4);
        let m = rng.gen_range(0..=4 - l);
        let (lambda, mu) = (ratio(l, 4), ratio(m, 4));
        let s = minkowski_sum(&a, &b, &lambda, &mu).unwrap();
        for d in dirs.directions() {
            let lhs = s.support(d).unwrap().0;
            let rhs = &lambda * a.support(d).unwrap().0 + &mu * b.support(d).unwrap().0;
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn barycenter_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let actions = [signed_permutations(2), signed_permutations(3)];
    for i in 0..500 {
        let act = &actions[i % 2];
        let c = random_body(act.dim(), &mut rng);
        let nu = random_measure(&c, &mut rng);
        let g = act.matrices().choose(&mut rng).unwrap();
        let moved = act.translate_measure(g, &nu).unwrap();
        assert_eq!(barycenter(&moved).unwrap(), apply_action(g, &barycenter(&nu).unwrap()).unwrap());
    }
}

fn random_subgroup(act: &irslab_core::convex::OrthogonalAction, rng: &mut ChaCha8Rng) -> Subgroup {
    let g = act.group();
    let order = g.order().unwrap();
    let gens: Vec<GroupElement> = (0..rng.gen_range(0..=2)).map(|_| GroupElement::Index(rng.gen_range(0..order))).collect();
    Subgroup::generated_by(g, &gens).unwrap()
}

#[test]
fn fix_set_is_equivariant_and_antitone() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let actions = [signed_permutations(2), signed_permutations(3)];
    for i in 0..500 {
        let act = &actions[i % 2];
        let c = random_body(act.dim(), &mut rng);
        let h = random_subgroup(act, &mut rng);
        let x = rng.gen_range(0..act.group().order().unwrap());
        let g = act.matrix(x);
        let fixed = act.fix_subgroup(&h, &c).unwrap();
        // Fix(gHg⁻¹) ∩ gC, computed from the conjugated matrices
        let conj = h.conjugate(&GroupElement::Index(x)).unwrap();
        let rhs = fix_set(&act.subgroup_matrices(&conj).unwrap(), &apply_action(g, &c).unwrap()).unwrap();
        assert_eq!(fixed.as_ref().map(|f| apply_action(g, f).unwrap()), rhs);

        let bigger = h.join(&random_subgroup(act, &mut rng)).unwrap();
        let small_fix = act.fix_subgroup(&bigger, &c).unwrap();
        match (small_fix, fixed) {
            (Some(s), Some(f)) => assert!(s.is_subset_of(&f).unwrap()),
            (Some(_), None) => panic!("larger subgroup fixes more"),
            _ => {}
        }
    }
}

#[test]
fn extreme_point_forcing() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut equal_midpoints = 0;
    for i in 0..500 {
        let dim = 2 + i % 2;
        let c = random_body(dim, &mut rng);
        let pick = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.4) { c.clone() } else { random_sub_body(&c, rng) };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let r = extreme_point_check(&c, &a, &b).unwrap();
        assert!(r.implication_holds());
        equal_midpoints += r.midpoint_equals as usize;
    }
    assert!(equal_midpoints > 50);
}

#[test]
fn invariant_measure_test_never_violates() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for i in 0..300 {
        let dim = 2 + i % 2;
        let dirs = DirectionSet::default_for(dim).unwrap();
        let c = random_body(dim, &mut rng);
        let nu = random_measure(&c, &mut rng);
        let verdict = invariant_measure_test(&nu, &c, &dirs).unwrap();
        assert_ne!(verdict, MeasureVerdict::Violated);
        if nu.is_dirac_at(&c) {
            assert_eq!(verdict, MeasureVerdict::Consistent);
        }
    }
}

#[test]
fn pushforward_of_invariant_irs_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for act in [klein_reflections(), signed_permutations(2), signed_permutations(3)] {
        let g = act.group().clone();
        let subs = enumerate_subgroups(&g).unwrap();
        for _ in 0..10 {
            // a symmetric body: the hull of the orbit of random points
            let seeds: Vec<Point> = (0..rng.gen_range(1..=2)).map(|_| random_point(act.dim(), &mut rng)).collect();
            let orbit: Vec<Point> = act.matrices().iter().flat_map(|m| seeds.iter().map(|p| m.apply(p))).collect();
            let c = ConvexBody::new(act.dim(), orbit).unwrap();
            assert!(act.is_fixed_body(&c).unwrap());
            let h = subs.choose(&mut rng).unwrap();
            let class = conjugacy_class(h).unwrap();
            let mu = IrsDistribution::uniform(&g, class).unwrap();
            let nu = match act.pushforward_fix(&mu, &c) {
                Ok(nu) => nu,
                Err(irslab_core::Error::EmptySet) => continue,
                Err(e) => panic!("{e}"),
            };
            assert!(act.is_invariant_measure(&nu).unwrap());
            assert!(act.is_fixed_body(&barycenter(&nu).unwrap()).unwrap());
            assert!(act.fix_equivariant(h, &c).unwrap());
        }
    }
}

#[test]
fn klein_mid_segments() {
    let act = klein_reflections();
    let g = act.group();
    let sq = half_square();
    let hx = Subgroup::generated_by(g, &[g.parse_element("sx").unwrap()]).unwrap();
    let hy = Subgroup::generated_by(g, &[g.parse_element("sy").unwrap()]).unwrap();
    let mu = IrsDistribution::uniform(g, vec![hx, hy]).unwrap();
    let nu = act.pushforward_fix(&mu, &sq).unwrap();
    let q = ratio(1, 4);
    let z = Rational::zero();
    let expected = ConvexBody::new(
        2,
        vec![vec![q.clone(), q.clone()], vec![-&q, q.clone()], vec![q.clone(), -&q], vec![-&q, -&q]],
    )
    .unwrap();
    assert_eq!(barycenter(&nu).unwrap(), expected);
    assert!(nu.atoms().iter().all(|(b, _)| b.vertices().iter().any(|v| v.contains(&z))));
    assert_eq!(BodyMeasure::from_text(&nu.to_text()).unwrap(), nu);
}
