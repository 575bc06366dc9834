use std::sync::Arc;

use super::Subgroup;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MarkedGroup};

/// The quotient `G/N` of a finite marked group, marked by the images of the generators of
/// `G`. Cosets are numbered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    group: MarkedGroup,
    coset_of: Vec<usize>,
    kernel: Subgroup,
}

impl Quotient {
    pub fn new(normal: &Subgroup) -> Result<Self> {
        let parent = normal.parent();
        let g = parent
            .finite()
            .ok_or_else(|| Error::Unsupported("quotients need a finite parent".into()))?;
        if !normal.is_normal() {
            return Err(Error::NotNormal);
        }
        let n_elems = normal.elements().expect("finite parent");
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() {
            if coset_of[x] == usize::MAX {
                for &k in n_elems {
                    coset_of[g.mul(x, k)] = reps.len();
                }
                reps.push(x);
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(coset_of[g.mul(a, b)] as u32);
            }
        }
        let names = reps.iter().map(|&r| format!("[{}]", g.name(r))).collect();
        let quotient = FiniteGroup::from_table(m, table, Some(names))?;
        let gens = parent
            .generator_letters()
            .map(|l| coset_of[parent.letter_element(l).as_index().unwrap()])
            .collect();
        let group = MarkedGroup::from_finite(Arc::new(quotient), gens, Some(parent.labels().to_vec()))?;
        Ok(Quotient {
            group,
            coset_of,
            kernel: normal.clone(),
        })
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// The coset of element `g` of the parent.
    pub fn project(&self, g: usize) -> usize {
        self.coset_of[g]
    }
}

/// Image of `h` in `G/N`: the cosets meeting `h`.
pub fn project_subgroup(h: &Subgroup, normal: &Subgroup) -> Result<Subgroup> {
    if h.parent() != normal.parent() {
        return Err(Error::FamilyMismatch);
    }
    let q = Quotient::new(normal)?;
    let image: Vec<usize> = h.elements().expect("finite parent").iter().map(|&x| q.project(x)).collect();
    Subgroup::from_elements(q.group(), &image)
}

/// Full preimage in `G` of a subgroup of `G/N`.
pub fn preimage(hbar: &Subgroup, q: &Quotient) -> Result<Subgroup> {
    if hbar.parent() != q.group() {
        return Err(Error::FamilyMismatch);
    }
    let inside = hbar.elements().expect("finite parent");
    let parent = q.kernel().parent();
    let elems: Vec<usize> = (0..q.coset_of.len())
        .filter(|&x| inside.binary_search(&q.project(x)).is_ok())
        .collect();
    Subgroup::from_elements(parent, &elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::{cyclic, symmetric};
    use crate::subgroup::enumerate_subgroups;

    fn sub(g: &MarkedGroup, names: &[&str]) -> Subgroup {
        let e: Vec<_> = names.iter().map(|s| g.parse_element(s).unwrap()).collect();
        Subgroup::generated_by(g, &e).unwrap()
    }

    #[test]
    fn projection_examples() {
        let z4 = cyclic(4);
        let n = sub(&z4, &["2"]);
        let img = project_subgroup(&n, &n).unwrap();
        assert_eq!(img.parent().order(), Some(2));
        assert!(img.is_trivial());
        assert!(project_subgroup(&Subgroup::whole(&z4).unwrap(), &n).unwrap().is_whole());
        let s3 = symmetric(3);
        let a3 = sub(&s3, &["(123)"]);
        let img = project_subgroup(&sub(&s3, &["(12)"]), &a3).unwrap();
        assert!(img.is_whole());
        assert_eq!(img.order(), Some(2));
        assert_eq!(project_subgroup(&a3, &sub(&s3, &["(12)"])), Err(Error::NotNormal));
    }

    #[test]
    fn projection_inverts_preimage() {
        let s4 = symmetric(4);
        for n in enumerate_subgroups(&s4).unwrap().into_iter().filter(|n| n.is_normal()) {
            let q = Quotient::new(&n).unwrap();
            for hbar in enumerate_subgroups(q.group()).unwrap() {
                let up = preimage(&hbar, &q).unwrap();
                assert_eq!(project_subgroup(&up, &n).unwrap(), hbar);
            }
        }
    }
}
