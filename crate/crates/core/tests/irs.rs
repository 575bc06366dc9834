use irslab_core::group::fixtures::{alternating4, cyclic, dihedral, klein_four, symmetric};
use irslab_core::group::{GroupElement, MarkedGroup};
use irslab_core::irs::{conjugacy_class, FinitePmpAction, IrsDistribution};
use irslab_core::subgroup::{enumerate_subgroups, Subgroup};
use irslab_core::Rational;
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<MarkedGroup> {
    vec![symmetric(3), symmetric(4), dihedral(4), cyclic(4), alternating4(), klein_four()]
}

/// Random positive integer weights on distinct conjugacy classes, uniform within a class.
fn random_invariant(g: &MarkedGroup, subs: &[Subgroup], rng: &mut ChaCha8Rng) -> IrsDistribution {
    let k = rng.gen_range(1..=3);
    let mut classes: Vec<Vec<Subgroup>> = Vec::new();
    for _ in 0..k {
        let h = subs.choose(rng).unwrap();
        let class = conjugacy_class(h).unwrap();
        if !classes.iter().any(|c| c.contains(h)) {
            classes.push(class);
        }
    }
    let raw: Vec<u32> = classes.iter().map(|_| rng.gen_range(1..6)).collect();
    let total: u32 = raw.iter().sum();
    let mut atoms = Vec::new();
    for (class, w) in classes.iter().zip(&raw) {
        for h in class {
            atoms.push((h.clone(), Rational::new((*w).into(), (total as usize * class.len()).into())));
        }
    }
    IrsDistribution::new(g, atoms).unwrap()
}

#[test]
fn normal_closure_is_the_minimal_full_measure_subgroup() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let all: Vec<(MarkedGroup, Vec<Subgroup>)> =
        groups().into_iter().map(|g| { let s = enumerate_subgroups(&g).unwrap(); (g, s) }).collect();
    for _ in 0..200 {
        let (g, subs) = all.choose(&mut rng).unwrap();
        let mu = random_invariant(g, subs, &mut rng);
        assert!(mu.check_conjugation_invariance().unwrap().is_certificate());
        let closure = mu.normal_closure(g.order().unwrap()).unwrap();
        // subgroups of full measure: those containing every atom
        let full: Vec<&Subgroup> = subs
            .iter()
            .filter(|n| mu.atoms().iter().all(|(h, _)| h.is_subgroup_of(n).unwrap()))
            .collect();
        let min = full.iter().min_by_key(|n| n.order().unwrap()).unwrap();
        assert!(full.iter().all(|n| min.is_subgroup_of(n).unwrap()), "minimum is unique");
        assert_eq!(&closure, *min);
        assert!(closure.is_normal());
        for x in 0..g.order().unwrap() {
            let x = GroupElement::Index(x);
            if !mu.inclusion_probability(&x).unwrap().is_zero() {
                assert!(closure.contains(&x).unwrap());
            }
        }
    }
}

#[test]
fn stabilizer_pushforward_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let all: Vec<(MarkedGroup, Vec<Subgroup>)> = [symmetric(3), symmetric(4), dihedral(4)]
        .into_iter()
        .map(|g| { let s = enumerate_subgroups(&g).unwrap(); (g, s) })
        .collect();
    let mut done = 0;
    while done < 500 {
        let (g, subs) = all.choose(&mut rng).unwrap();
        let order = g.order().unwrap();
        let mut orbits = Vec::new();
        let mut points = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let h = subs.choose(&mut rng).unwrap();
            let idx = order / h.order().unwrap();
            if points + idx <= 12 {
                points += idx;
                orbits.push(h.clone());
            }
        }
        if orbits.is_empty() {
            continue;
        }
        let raw: Vec<u32> = orbits.iter().map(|_| rng.gen_range(1..5)).collect();
        let total: u32 = raw.iter().sum();
        let weighted: Vec<(Subgroup, Rational)> = orbits
            .into_iter()
            .zip(raw)
            .map(|(h, w)| (h, Rational::new(w.into(), total.into())))
            .collect();
        let action = FinitePmpAction::on_cosets(g, &weighted).unwrap();
        assert_eq!(action.points(), points);
        let mu = action.stabilizer_pushforward().unwrap();
        assert!(mu.check_conjugation_invariance().unwrap().is_certificate());
        done += 1;
    }
}

#[test]
fn ergodic_components_recompose_the_measure() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for g in groups() {
        let subs = enumerate_subgroups(&g).unwrap();
        for _ in 0..10 {
            let mu = random_invariant(&g, &subs, &mut rng);
            let comps = mu.ergodic_components().unwrap();
            assert_eq!(comps.iter().map(|(w, _)| w.clone()).sum::<Rational>(), Rational::from_integer(1.into()));
            for (h, w) in mu.atoms() {
                let recomposed: Rational = comps.iter().map(|(cw, c)| cw * c.weight_of(h)).sum();
                assert_eq!(&recomposed, w);
            }
            for (_, c) in &comps {
                // a component is a single conjugacy class
                let class = conjugacy_class(&c.atoms()[0].0).unwrap();
                assert_eq!(class.len(), c.atoms().len());
            }
        }
    }
}

#[test]
fn inclusion_probability_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for g in groups() {
        let table = g.finite().unwrap().clone();
        let subs = enumerate_subgroups(&g).unwrap();
        for _ in 0..10 {
            let mu = random_invariant(&g, &subs, &mut rng);
            for _ in 0..10 {
                let x = rng.gen_range(0..table.order());
                let h = rng.gen_range(0..table.order());
                let a = mu.inclusion_probability(&GroupElement::Index(h)).unwrap();
                let b = mu.inclusion_probability(&GroupElement::Index(table.conjugate(x, h))).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn text_round_trip_of_random_measures() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for g in groups() {
        let subs = enumerate_subgroups(&g).unwrap();
        let mu = random_invariant(&g, &subs, &mut rng);
        assert_eq!(IrsDistribution::from_text(&g, &mu.to_text()).unwrap(), mu);
    }
}
