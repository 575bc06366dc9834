//! Finitely supported invariant random subgroups with exact rational weights.
//!
//! A finitely supported measure on subgroups is conjugation invariant iff its support is a
//! finite union of conjugacy classes of subgroups, each carrying constant weight. Ergodic
//! components are therefore the single conjugation orbits inside the support.

mod action;
pub mod fixtures;

use std::collections::HashMap;

use num::{One, Zero};

pub use action::FinitePmpAction;

use crate::error::{Error, Result};
use crate::group::{GroupElement, Letter, MarkedGroup};
use crate::rational::{format_rational, parse_rational_at};
use crate::subgroup::{amenable_radical, normal_closure, Subgroup};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrsDistribution {
    parent: MarkedGroup,
    atoms: Vec<(Subgroup, Rational)>,
}

/// Result of checking invariance under conjugation by each letter of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvarianceCheck {
    /// Every atom `H` satisfies `μ(sHs⁻¹) = μ(H)` for every letter `s`.
    Certificate { letters_checked: usize, atoms: usize },
    /// `μ(sHs⁻¹) ≠ μ(H)`.
    Violation {
        letter: Letter,
        subgroup: Subgroup,
        weight: Rational,
        conjugate_weight: Rational,
    },
}

impl InvarianceCheck {
    pub fn is_certificate(&self) -> bool {
        matches!(self, InvarianceCheck::Certificate { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalReport {
    pub is_amenable_irs: bool,
    pub radical: Subgroup,
    pub contained_in_radical: bool,
    pub theorem_consistent: bool,
}

impl IrsDistribution {
    /// Atoms must be distinct subgroups of `parent` with positive weights summing to one.
    /// Atoms are stored in canonical order (by serialized subgroup block).
    pub fn new(parent: &MarkedGroup, atoms: Vec<(Subgroup, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidDistribution("no atoms".into()));
        }
        let mut total = Rational::zero();
        for (h, w) in &atoms {
            if h.parent() != parent {
                return Err(Error::FamilyMismatch);
            }
            if *w <= Rational::zero() {
                return Err(Error::InvalidDistribution(format!("non-positive weight {}", format_rational(w))));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {}", format_rational(&total))));
        }
        let mut keyed: Vec<(String, Subgroup, Rational)> =
            atoms.into_iter().map(|(h, w)| (h.to_text(), h, w)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        if keyed.windows(2).any(|p| p[0].1 == p[1].1) {
            return Err(Error::InvalidDistribution("repeated atom".into()));
        }
        Ok(IrsDistribution {
            parent: parent.clone(),
            atoms: keyed.into_iter().map(|(_, h, w)| (h, w)).collect(),
        })
    }

    pub fn dirac(h: &Subgroup) -> Self {
        IrsDistribution {
            parent: h.parent().clone(),
            atoms: vec![(h.clone(), Rational::one())],
        }
    }

    /// Uniform weights over distinct subgroups.
    pub fn uniform(parent: &MarkedGroup, subgroups: Vec<Subgroup>) -> Result<Self> {
        let w = Rational::new(1.into(), subgroups.len().max(1).into());
        IrsDistribution::new(parent, subgroups.into_iter().map(|h| (h, w.clone())).collect())
    }

    /// Uniform on the conjugacy class of `h` (finite parents).
    pub fn conjugacy_class(h: &Subgroup) -> Result<Self> {
        let class = conjugacy_class(h)?;
        IrsDistribution::uniform(h.parent(), class)
    }

    pub fn parent(&self) -> &MarkedGroup {
        &self.parent
    }

    pub fn atoms(&self) -> &[(Subgroup, Rational)] {
        &self.atoms
    }

    pub fn weight_of(&self, h: &Subgroup) -> Rational {
        self.atoms
            .iter()
            .find(|(a, _)| a == h)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn check_conjugation_invariance(&self) -> Result<InvarianceCheck> {
        for l in self.parent.letters() {
            let s = self.parent.letter_element(l);
            for (h, w) in &self.atoms {
                let c = h.conjugate(&s)?;
                let cw = self.weight_of(&c);
                if cw != *w {
                    return Ok(InvarianceCheck::Violation {
                        letter: l,
                        subgroup: h.clone(),
                        weight: w.clone(),
                        conjugate_weight: cw,
                    });
                }
            }
        }
        Ok(InvarianceCheck::Certificate {
            letters_checked: self.parent.num_letters(),
            atoms: self.atoms.len(),
        })
    }

    /// `μ{H : h ∈ H}`.
    pub fn inclusion_probability(&self, h: &GroupElement) -> Result<Rational> {
        let mut p = Rational::zero();
        for (a, w) in &self.atoms {
            if a.contains(h)? {
                p += w;
            }
        }
        Ok(p)
    }

    /// The subgroup generated by all elements of positive inclusion probability, closed
    /// under conjugation (a no-op for invariant measures). `index_bound` applies to free
    /// parents.
    pub fn normal_closure(&self, index_bound: usize) -> Result<Subgroup> {
        let mut join = self.atoms[0].0.clone();
        for (h, _) in &self.atoms[1..] {
            join = join.join(h)?;
        }
        normal_closure(&join, index_bound)
    }

    pub fn is_spanning(&self, index_bound: usize) -> Result<bool> {
        Ok(self.normal_closure(index_bound)?.is_whole())
    }

    /// Conjugation orbits of the support with their total weights; each component is the
    /// normalized restriction.
    pub fn ergodic_components(&self) -> Result<Vec<(Rational, IrsDistribution)>> {
        if !self.check_conjugation_invariance()?.is_certificate() {
            return Err(Error::NotInvariant);
        }
        let n = self.atoms.len();
        let index: HashMap<&Subgroup, usize> = self.atoms.iter().enumerate().map(|(i, (h, _))| (h, i)).collect();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for l in self.parent.generator_letters() {
            let s = self.parent.letter_element(l);
            for (i, (h, _)) in self.atoms.iter().enumerate() {
                let j = index[&h.conjugate(&s)?];
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match groups.iter_mut().find(|(root, _)| *root == r) {
                Some((_, members)) => members.push(i),
                None => groups.push((r, vec![i])),
            }
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let total: Rational = members.iter().map(|&i| self.atoms[i].1.clone()).sum();
                let atoms = members
                    .iter()
                    .map(|&i| (self.atoms[i].0.clone(), &self.atoms[i].1 / &total))
                    .collect();
                Ok((total, IrsDistribution::new(&self.parent, atoms)?))
            })
            .collect()
    }

    /// Compares amenability of the atoms with containment in the amenable radical.
    pub fn amenable_radical_check(&self) -> Result<RadicalReport> {
        let radical = amenable_radical(&self.parent)?;
        let mut is_amenable_irs = true;
        let mut contained_in_radical = true;
        for (h, _) in &self.atoms {
            is_amenable_irs &= h.amenable_flag()?;
            contained_in_radical &= h.is_subgroup_of(&radical)?;
        }
        Ok(RadicalReport {
            is_amenable_irs,
            theorem_consistent: !is_amenable_irs || contained_in_radical,
            radical,
            contained_in_radical,
        })
    }

    /// `irs v1`, then `atom p/q` followed by a subgroup block per atom, then `end`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("irs v1\n");
        for (h, w) in &self.atoms {
            out.push_str(&format!("atom {}\n", format_rational(w)));
            out.push_str(&h.to_text());
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(parent: &MarkedGroup, text: &str) -> Result<Self> {
        use crate::subgroup::text::{expect_line, lines, read_block};
        let mut it = lines(text);
        let (n, header) = expect_line(&mut it, "`irs v1`")?;
        if header != "irs v1" {
            return Err(Error::parse(n, "expected `irs v1`"));
        }
        let mut atoms = Vec::new();
        loop {
            let (n, line) = expect_line(&mut it, "`atom` or `end`")?;
            if line == "end" {
                break;
            }
            let w = line
                .strip_prefix("atom ")
                .ok_or_else(|| Error::parse(n, "expected `atom p/q`"))
                .and_then(|r| parse_rational_at(r.trim(), n))?;
            atoms.push((read_block(parent, &mut it)?, w));
        }
        if let Some((n, _)) = it.next() {
            return Err(Error::parse(n, "trailing input after `end`"));
        }
        IrsDistribution::new(parent, atoms)
    }
}

/// All conjugates of `h` (finite parents, or any parent whose class is finite and small),
/// found by closing under conjugation by generators.
pub fn conjugacy_class(h: &Subgroup) -> Result<Vec<Subgroup>> {
    const CLASS_LIMIT: usize = 10_000;
    let parent = h.parent();
    let mut class = vec![h.clone()];
    let mut seen: std::collections::HashSet<Subgroup> = [h.clone()].into_iter().collect();
    let mut i = 0;
    while i < class.len() {
        for l in parent.generator_letters() {
            let c = class[i].conjugate(&parent.letter_element(l))?;
            if seen.insert(c.clone()) {
                if class.len() >= CLASS_LIMIT {
                    return Err(Error::ClosureExceedsBound { bound: CLASS_LIMIT });
                }
                class.push(c);
            }
        }
        i += 1;
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::*;
    use crate::rational::ratio;
    use crate::subgroup::enumerate_subgroups;

    fn sub(g: &MarkedGroup, names: &[&str]) -> Subgroup {
        let e: Vec<_> = names.iter().map(|s| g.parse_element(s).unwrap()).collect();
        Subgroup::generated_by(g, &e).unwrap()
    }

    fn stabilizer_irs() -> IrsDistribution {
        let s3 = symmetric(3);
        IrsDistribution::conjugacy_class(&sub(&s3, &["(12)"])).unwrap()
    }

    #[test]
    fn invariance_examples() {
        let s3 = symmetric(3);
        let a3 = sub(&s3, &["(123)"]);
        assert!(IrsDistribution::dirac(&a3).check_conjugation_invariance().unwrap().is_certificate());
        assert!(stabilizer_irs().check_conjugation_invariance().unwrap().is_certificate());
        let mixed = IrsDistribution::new(&s3, vec![(sub(&s3, &["(12)"]), ratio(1, 2)), (a3, ratio(1, 2))]).unwrap();
        match mixed.check_conjugation_invariance().unwrap() {
            InvarianceCheck::Violation { letter, subgroup, .. } => {
                assert_eq!(s3.element_name(&s3.letter_element(letter)), "(123)");
                assert_eq!(subgroup, sub(&s3, &["(12)"]));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn distribution_validation() {
        let s3 = symmetric(3);
        let h = sub(&s3, &["(12)"]);
        assert!(IrsDistribution::new(&s3, vec![(h.clone(), ratio(1, 2))]).is_err());
        assert!(IrsDistribution::new(&s3, vec![(h.clone(), ratio(1, 2)), (h.clone(), ratio(1, 2))]).is_err());
        assert!(IrsDistribution::new(&s3, vec![(h.clone(), ratio(3, 2)), (sub(&s3, &[]), ratio(-1, 2))]).is_err());
    }

    #[test]
    fn inclusion_examples() {
        let mu = stabilizer_irs();
        let s3 = mu.parent().clone();
        assert_eq!(mu.inclusion_probability(&s3.identity()).unwrap(), ratio(1, 1));
        assert_eq!(mu.inclusion_probability(&s3.parse_element("(12)").unwrap()).unwrap(), ratio(1, 3));
        let mu3 = fixtures::direct_sum(3);
        let x2 = mu3.parent().parse_element("x2").unwrap();
        assert_eq!(mu3.inclusion_probability(&x2).unwrap(), ratio(9, 49));
    }

    #[test]
    fn closure_and_spanning() {
        let mu = stabilizer_irs();
        assert!(mu.normal_closure(1).unwrap().is_whole());
        assert!(mu.is_spanning(1).unwrap());
        let s3 = symmetric(3);
        let a3 = IrsDistribution::dirac(&sub(&s3, &["(123)"]));
        assert_eq!(a3.normal_closure(1).unwrap().order(), Some(3));
        assert!(!a3.is_spanning(1).unwrap());
        assert!(IrsDistribution::dirac(&Subgroup::trivial(&s3).unwrap()).normal_closure(1).unwrap().is_trivial());
        assert!(IrsDistribution::dirac(&Subgroup::whole(&s3).unwrap()).is_spanning(1).unwrap());
    }

    #[test]
    fn closure_matches_minimal_normal_oracle() {
        for g in [symmetric(3), symmetric(4), dihedral(4), alternating4(), lamplighter(2)] {
            let subs = enumerate_subgroups(&g).unwrap();
            let normals: Vec<&Subgroup> = subs.iter().filter(|n| n.is_normal()).collect();
            for h in &subs {
                let mu = IrsDistribution::conjugacy_class(h).unwrap();
                let closure = mu.normal_closure(1).unwrap();
                let oracle = normals
                    .iter()
                    .filter(|n| mu.atoms().iter().all(|(a, _)| a.is_subgroup_of(n).unwrap()))
                    .min_by_key(|n| n.order())
                    .unwrap();
                assert_eq!(&closure, *oracle);
            }
        }
    }

    #[test]
    fn ergodic_decomposition() {
        let s3 = symmetric(3);
        let mu = stabilizer_irs();
        assert_eq!(mu.ergodic_components().unwrap().len(), 1);
        let a3 = sub(&s3, &["(123)"]);
        let mut atoms = vec![(a3, ratio(1, 2))];
        atoms.extend(mu.atoms().iter().map(|(h, _)| (h.clone(), ratio(1, 6))));
        let mixed = IrsDistribution::new(&s3, atoms).unwrap();
        let comps = mixed.ergodic_components().unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|(w, _)| *w == ratio(1, 2)));
        let whole = IrsDistribution::dirac(&Subgroup::whole(&s3).unwrap());
        assert_eq!(whole.ergodic_components().unwrap().len(), 1);
        let bad = IrsDistribution::dirac(&sub(&s3, &["(12)"]));
        assert_eq!(bad.ergodic_components(), Err(Error::NotInvariant));
    }

    #[test]
    fn radical_reports() {
        let s4 = symmetric(4);
        for h in enumerate_subgroups(&s4).unwrap() {
            let r = IrsDistribution::conjugacy_class(&h).unwrap().amenable_radical_check().unwrap();
            assert!(r.is_amenable_irs && r.radical.is_whole() && r.theorem_consistent);
        }
        let f2 = MarkedGroup::free(2).unwrap();
        let z2 = cyclic(2).finite_arc().unwrap();
        let k = Subgroup::kernel(&f2, &crate::group::HomImages::from_generators(z2, &[1, 0])).unwrap();
        let mu = IrsDistribution::conjugacy_class(&k).unwrap();
        assert!(mu.check_conjugation_invariance().unwrap().is_certificate());
        let r = mu.amenable_radical_check().unwrap();
        assert!(!r.is_amenable_irs && r.theorem_consistent);
        // a nontrivial cyclic subgroup of F2 has infinitely many conjugates
        let cyc = sub(&f2, &["a b"]);
        assert!(!IrsDistribution::dirac(&cyc).check_conjugation_invariance().unwrap().is_certificate());
        assert!(matches!(conjugacy_class(&cyc), Err(Error::ClosureExceedsBound { .. })));
    }

    #[test]
    fn text_roundtrip() {
        let mu = stabilizer_irs();
        let text = mu.to_text();
        assert!(text.starts_with("irs v1\natom 1/3\nsubgroup v1\n"));
        assert_eq!(IrsDistribution::from_text(mu.parent(), &text).unwrap(), mu);
        let f2 = MarkedGroup::free(2).unwrap();
        let k = Subgroup::random_finite_index(&f2, 5, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1)).unwrap();
        let nu = IrsDistribution::dirac(&k);
        assert_eq!(IrsDistribution::from_text(&f2, &nu.to_text()).unwrap(), nu);
    }
}
