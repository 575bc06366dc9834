use std::collections::VecDeque;

use num::{One, Zero};

use super::IrsDistribution;
use crate::error::{Error, Result};
use crate::group::{Family, MarkedGroup};
use crate::subgroup::{FoldedGraph, Subgroup};
use crate::Rational;

/// A measure-preserving action of a marked group on finitely many points. Generator `i`
/// acts by the permutation `x ↦ perms[i][x]`; inverse letters act by the inverse
/// permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePmpAction {
    parent: MarkedGroup,
    perms: Vec<Vec<usize>>,
    measure: Vec<Rational>,
}

impl FinitePmpAction {
    pub fn new(parent: &MarkedGroup, perms: Vec<Vec<usize>>, measure: Vec<Rational>) -> Result<Self> {
        let n = measure.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("no points".into()));
        }
        if perms.len() != parent.rank() {
            return Err(Error::InvalidDistribution(format!(
                "expected {} generator permutations, got {}",
                parent.rank(),
                perms.len()
            )));
        }
        for p in &perms {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&y| y >= n || std::mem::replace(&mut seen[y], true)) {
                return Err(Error::InvalidDistribution("generator does not act as a bijection".into()));
            }
        }
        if measure.iter().any(|w| *w < Rational::zero()) || !measure.iter().sum::<Rational>().is_one() {
            return Err(Error::InvalidDistribution("point weights must be non-negative and sum to 1".into()));
        }
        for p in &perms {
            if (0..n).any(|x| measure[p[x]] != measure[x]) {
                return Err(Error::NotInvariantMeasure);
            }
        }
        Ok(FinitePmpAction {
            parent: parent.clone(),
            perms,
            measure,
        })
    }

    /// Uniform measure on the points.
    pub fn uniform(parent: &MarkedGroup, perms: Vec<Vec<usize>>) -> Result<Self> {
        let n = perms.first().map_or(1, |p| p.len()).max(1);
        FinitePmpAction::new(parent, perms, vec![Rational::new(1.into(), n.into()); n])
    }

    /// The left action on `⊔ G/H_j`, with orbit `G/H_j` carrying total mass `w_j` spread
    /// uniformly. Finite parents only.
    pub fn on_cosets(parent: &MarkedGroup, orbits: &[(Subgroup, Rational)]) -> Result<Self> {
        let g = parent
            .finite()
            .ok_or_else(|| Error::Unsupported("coset actions need a finite parent".into()))?;
        let gens: Vec<usize> = parent
            .generator_letters()
            .map(|l| parent.letter_element(l).as_index().unwrap())
            .collect();
        let mut perms: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
        let mut measure = Vec::new();
        for (h, w) in orbits {
            if h.parent() != parent {
                return Err(Error::FamilyMismatch);
            }
            let elems = h.elements().expect("finite parent");
            let offset = measure.len();
            // coset xH is labelled by its least element
            let key = |x: usize| elems.iter().map(|&e| g.mul(x, e)).min().unwrap();
            let mut reps: Vec<usize> = (0..g.order()).map(key).collect();
            reps.sort_unstable();
            reps.dedup();
            let m = reps.len();
            for (i, &s) in gens.iter().enumerate() {
                for &r in &reps {
                    let target = reps.binary_search(&key(g.mul(s, r))).unwrap();
                    perms[i].push(offset + target);
                }
            }
            measure.extend(std::iter::repeat(w / Rational::from_integer(m.into())).take(m));
        }
        FinitePmpAction::new(parent, perms, measure)
    }

    pub fn points(&self) -> usize {
        self.measure.len()
    }

    pub fn parent(&self) -> &MarkedGroup {
        &self.parent
    }

    fn letter_perm(&self, letter: usize) -> Vec<usize> {
        let p = &self.perms[letter / 2];
        if letter % 2 == 0 {
            p.clone()
        } else {
            let mut inv = vec![0; p.len()];
            for (x, &y) in p.iter().enumerate() {
                inv[y] = x;
            }
            inv
        }
    }

    /// Stabilizer of every point.
    pub fn stabilizers(&self) -> Result<Vec<Subgroup>> {
        match self.parent.family() {
            Family::Finite { group, .. } => {
                // permutation of every element, by breadth-first search over right multiples
                let n = self.points();
                let letters: Vec<(usize, Vec<usize>)> = self
                    .parent
                    .letters()
                    .map(|l| (self.parent.letter_element(l).as_index().unwrap(), self.letter_perm(l.index())))
                    .collect();
                let mut perm: Vec<Option<Vec<usize>>> = vec![None; group.order()];
                perm[0] = Some((0..n).collect());
                let mut queue = VecDeque::from([0usize]);
                while let Some(g) = queue.pop_front() {
                    let pg = perm[g].clone().unwrap();
                    for (s, ps) in &letters {
                        // (g s)·x = g·(s·x)
                        let composed: Vec<usize> = (0..n).map(|x| pg[ps[x]]).collect();
                        let gs = group.mul(g, *s);
                        match &perm[gs] {
                            None => {
                                perm[gs] = Some(composed);
                                queue.push_back(gs);
                            }
                            Some(existing) if *existing != composed => {
                                return Err(Error::NotAHomomorphism(
                                    "generator permutations violate a relation of the group".into(),
                                ));
                            }
                            Some(_) => {}
                        }
                    }
                }
                (0..n)
                    .map(|x| {
                        let stab: Vec<usize> = (0..group.order())
                            .filter(|&g| perm[g].as_ref().unwrap()[x] == x)
                            .collect();
                        Subgroup::from_elements(&self.parent, &stab)
                    })
                    .collect()
            }
            Family::Free { rank } => {
                // words are traced left to right, so the table uses x·s = s⁻¹(x)
                let letters = 2 * rank;
                let right: Vec<Vec<usize>> = (0..letters).map(|l| self.letter_perm(l ^ 1)).collect();
                (0..self.points())
                    .map(|x| {
                        let mut index = vec![usize::MAX; self.points()];
                        let mut order = vec![x];
                        index[x] = 0;
                        let mut table = Vec::new();
                        let mut i = 0;
                        while i < order.len() {
                            let v = order[i];
                            for r in &right {
                                let y = r[v];
                                if index[y] == usize::MAX {
                                    index[y] = order.len();
                                    order.push(y);
                                }
                                table.push(Some(index[y]));
                            }
                            i += 1;
                        }
                        let graph = FoldedGraph::from_table(letters, &table, false).expect("permutation table");
                        let rows: Vec<Vec<usize>> = graph
                            .rows()
                            .into_iter()
                            .map(|r| r.into_iter().map(|t| t.unwrap()).collect())
                            .collect();
                        Subgroup::from_coset_table(&self.parent, &rows)
                    })
                    .collect()
            }
            Family::Tree { .. } => Err(Error::Unsupported("actions of tree groups".into())),
        }
    }

    /// Law of the stabilizer of a random point.
    pub fn stabilizer_pushforward(&self) -> Result<IrsDistribution> {
        let stabs = self.stabilizers()?;
        let mut atoms: Vec<(Subgroup, Rational)> = Vec::new();
        for (h, w) in stabs.into_iter().zip(&self.measure) {
            if w.is_zero() {
                continue;
            }
            match atoms.iter_mut().find(|(a, _)| *a == h) {
                Some((_, acc)) => *acc += w,
                None => atoms.push((h, w.clone())),
            }
        }
        IrsDistribution::new(&self.parent, atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::{cyclic, symmetric};
    use crate::rational::ratio;

    #[test]
    fn s3_on_three_points() {
        let s3 = symmetric(3);
        // generators (12) and (123) acting on {0,1,2}
        let act = FinitePmpAction::uniform(&s3, vec![vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let mu = act.stabilizer_pushforward().unwrap();
        assert_eq!(mu.atoms().len(), 3);
        for (h, w) in mu.atoms() {
            assert_eq!(h.order(), Some(2));
            assert_eq!(*w, ratio(1, 3));
        }
        assert!(mu.check_conjugation_invariance().unwrap().is_certificate());
    }

    #[test]
    fn trivial_and_free_actions() {
        let s3 = symmetric(3);
        let one = FinitePmpAction::uniform(&s3, vec![vec![0], vec![0]]).unwrap();
        let mu = one.stabilizer_pushforward().unwrap();
        assert!(mu.atoms().len() == 1 && mu.atoms()[0].0.is_whole());
        let z2 = cyclic(2);
        let free = FinitePmpAction::uniform(&z2, vec![vec![1, 0]]).unwrap();
        let mu = free.stabilizer_pushforward().unwrap();
        assert!(mu.atoms().len() == 1 && mu.atoms()[0].0.is_trivial());
    }

    #[test]
    fn rejects_non_invariant_measure_and_bad_actions() {
        let z2 = cyclic(2);
        let skew = FinitePmpAction::new(&z2, vec![vec![1, 0]], vec![ratio(1, 3), ratio(2, 3)]);
        assert_eq!(skew, Err(Error::NotInvariantMeasure));
        assert!(FinitePmpAction::uniform(&z2, vec![vec![0, 0]]).is_err());
        // a 3-cycle cannot be the action of an element of order 2
        let wrong = FinitePmpAction::uniform(&z2, vec![vec![1, 2, 0]]).unwrap();
        assert!(matches!(wrong.stabilizer_pushforward(), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn free_group_action_gives_coset_tables() {
        let f2 = MarkedGroup::free(2).unwrap();
        let act = FinitePmpAction::uniform(&f2, vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let mu = act.stabilizer_pushforward().unwrap();
        assert_eq!(mu.atoms().len(), 3);
        for (h, _) in mu.atoms() {
            assert_eq!(h.index(), Some(3));
        }
        assert!(mu.check_conjugation_invariance().unwrap().is_certificate());
        // b fixes point 2, a moves it, and (a b a⁻¹)·2 = 1
        let stabs = act.stabilizers().unwrap();
        assert!(stabs[2].contains_str("b").unwrap());
        assert!(!stabs[2].contains_str("a").unwrap());
        assert!(stabs[2].contains_str("a a a").unwrap());
        assert!(!stabs[2].contains_str("a b a^-1").unwrap());
        assert!(stabs[0].contains_str("a b a^-1").unwrap());
    }
}
