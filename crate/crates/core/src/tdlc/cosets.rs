//! Subgroups of a truncated tree group, level stabilizers, and unions of cosets of
//! `C ∩ V_i` inside an ambient subgroup `C`.
//!
//! For `x, r ∈ C`, `x ∈ r(C ∩ V_i)` iff `r⁻¹x ∈ V_i` iff the labels of `x` and `r` agree on
//! all levels `< i`. The portrait prefix is therefore a complete key for left cosets, and
//! Haar measure ratios reduce to counting cosets at a common level.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use super::{Portrait, RootedTreeGroup};
use crate::error::{Error, Result};
use crate::Rational;

/// Largest subgroup that is enumerated element by element.
pub const ENUMERATION_CAP: usize = 1 << 15;

/// A subgroup of a depth-`D` truncation, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSubgroup {
    group: Arc<RootedTreeGroup>,
    elements: Vec<Portrait>,
}

impl TruncatedSubgroup {
    pub fn whole(group: &Arc<RootedTreeGroup>) -> Result<Self> {
        Ok(TruncatedSubgroup {
            group: group.clone(),
            elements: group.elements(ENUMERATION_CAP)?,
        })
    }

    pub fn trivial(group: &Arc<RootedTreeGroup>) -> Self {
        TruncatedSubgroup {
            group: group.clone(),
            elements: vec![group.identity()],
        }
    }

    /// Closure of `gens` under composition.
    pub fn generated_by(group: &Arc<RootedTreeGroup>, gens: &[Portrait]) -> Result<Self> {
        for g in gens {
            group.from_labels(g.labels().to_vec())?;
        }
        let mut seen: HashSet<Portrait> = HashSet::from([group.identity()]);
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for s in gens {
                let y = group.mul(&x, s);
                if !seen.contains(&y) {
                    if seen.len() >= ENUMERATION_CAP {
                        return Err(Error::GroupTooLarge {
                            order: seen.len() + 1,
                            limit: ENUMERATION_CAP,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Portrait> = seen.into_iter().collect();
        elements.sort();
        Ok(TruncatedSubgroup {
            group: group.clone(),
            elements,
        })
    }

    /// An explicit element list, checked for closure.
    pub fn from_elements(group: &Arc<RootedTreeGroup>, elements: Vec<Portrait>) -> Result<Self> {
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        let h = TruncatedSubgroup {
            group: group.clone(),
            elements,
        };
        if !h.contains(&group.identity()) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for a in &h.elements {
            if !h.contains(&group.inverse(a)) || h.elements.iter().any(|b| !h.contains(&group.mul(a, b))) {
                return Err(Error::InvalidSubgroup(format!("not closed at {}", group.format(a))));
            }
        }
        Ok(h)
    }

    pub fn group(&self) -> &Arc<RootedTreeGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Portrait) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// All elements in portrait-lexicographic order. At finite depth this enumeration is
    /// the dense sequence: it exhausts the subgroup, and it is stable across calls.
    pub fn dense_selector(&self) -> &[Portrait] {
        &self.elements
    }

    /// `C ∩ V_i`.
    pub fn intersect_level(&self, level: usize) -> TruncatedSubgroup {
        TruncatedSubgroup {
            group: self.group.clone(),
            elements: self
                .elements
                .iter()
                .filter(|g| self.group.in_level_stabilizer(g, level))
                .cloned()
                .collect(),
        }
    }

    /// Normality in the full truncated group, by conjugating with its standard generators.
    pub fn is_normal_in_group(&self) -> bool {
        let g = &self.group;
        g.standard_generators().iter().all(|s| {
            let si = g.inverse(s);
            self.elements.iter().all(|h| self.contains(&g.mul(&g.mul(s, h), &si)))
        })
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.group.depth() {
            Err(Error::DepthOutOfRange {
                depth: level,
                max: self.group.depth(),
            })
        } else {
            Ok(())
        }
    }

    /// `[C ∩ V_i : C ∩ V_j]` for `i ≤ j`.
    fn level_index(&self, i: usize, j: usize) -> usize {
        self.intersect_level(i).order() / self.intersect_level(j).order()
    }
}

/// Portraits whose label is constant along each level. For `d = 2` this is `(ℤ/2)^D`.
pub fn level_constant_subgroup(group: &Arc<RootedTreeGroup>) -> Result<TruncatedSubgroup> {
    let m = group.sym_order();
    let depth = group.depth();
    if (m as u128).pow(depth as u32) > ENUMERATION_CAP as u128 {
        return Err(Error::GroupTooLarge {
            order: usize::MAX,
            limit: ENUMERATION_CAP,
        });
    }
    let mut elements = Vec::new();
    let mut choice = vec![0u8; depth];
    loop {
        let labels: Vec<u8> = (0..depth)
            .flat_map(|l| std::iter::repeat(choice[l]).take(group.level_width(l)))
            .collect();
        elements.push(group.from_labels(labels)?);
        let mut i = depth;
        loop {
            if i == 0 {
                elements.sort();
                return Ok(TruncatedSubgroup {
                    group: group.clone(),
                    elements,
                });
            }
            i -= 1;
            choice[i] += 1;
            if (choice[i] as usize) < m {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// `V_i`, together with a normality flag computed by conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStabilizer {
    pub subgroup: TruncatedSubgroup,
    pub normal: bool,
}

pub fn level_stabilizer(group: &Arc<RootedTreeGroup>, level: usize) -> Result<LevelStabilizer> {
    if level > group.depth() {
        return Err(Error::DepthOutOfRange {
            depth: level,
            max: group.depth(),
        });
    }
    // labels below level i are free, labels above are the identity
    let free = group.internal_vertices() - group.prefix_len(level);
    let m = group.sym_order();
    let size = (m as u128).checked_pow(free as u32).filter(|&s| s <= ENUMERATION_CAP as u128).ok_or(
        Error::GroupTooLarge {
            order: usize::MAX,
            limit: ENUMERATION_CAP,
        },
    )?;
    let prefix = group.prefix_len(level);
    let mut elements = Vec::with_capacity(size as usize);
    let mut tail = vec![0u8; free];
    loop {
        let mut labels = vec![0u8; prefix];
        labels.extend_from_slice(&tail);
        elements.push(group.from_labels(labels)?);
        let mut i = free;
        loop {
            if i == 0 {
                let subgroup = TruncatedSubgroup {
                    group: group.clone(),
                    elements,
                };
                let normal = subgroup.is_normal_in_group();
                return Ok(LevelStabilizer { subgroup, normal });
            }
            i -= 1;
            tail[i] += 1;
            if (tail[i] as usize) < m {
                break;
            }
            tail[i] = 0;
        }
    }
}

/// A union of left cosets `w (C ∩ V_i)` of the ambient subgroup `C`, one lexicographically
/// least representative per coset, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetUnion {
    level: usize,
    reps: Vec<Portrait>,
}

impl CosetUnion {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn reps(&self) -> &[Portrait] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The union of the cosets of the given representatives (which must lie in `C`).
    pub fn from_reps(ambient: &TruncatedSubgroup, level: usize, reps: &[Portrait]) -> Result<Self> {
        ambient.check_level(level)?;
        let mut elems = BTreeSet::new();
        for r in reps {
            if !ambient.contains(r) {
                return Err(Error::RepNotInSubgroup(ambient.group.format(r)));
            }
            elems.extend(coset_elements(ambient, level, r));
        }
        coset_decomposition(ambient, &elems.into_iter().collect::<Vec<_>>(), level)
    }

    /// All elements of the union.
    pub fn expand(&self, ambient: &TruncatedSubgroup) -> Vec<Portrait> {
        let mut out: Vec<Portrait> = self
            .reps
            .iter()
            .flat_map(|r| coset_elements(ambient, self.level, r))
            .collect();
        out.sort();
        out
    }

    /// The same set as a union of cosets at the finer level `level ≥ self.level()`.
    pub fn refine(&self, ambient: &TruncatedSubgroup, level: usize) -> Result<CosetUnion> {
        ambient.check_level(level)?;
        if level < self.level {
            return Err(Error::DepthOutOfRange {
                depth: level,
                max: self.level,
            });
        }
        coset_decomposition(ambient, &self.expand(ambient), level)
    }

    /// `g · O` for `g ∈ C`.
    pub fn translate(&self, ambient: &TruncatedSubgroup, g: &Portrait) -> Result<CosetUnion> {
        if !ambient.contains(g) {
            return Err(Error::RepNotInSubgroup(ambient.group.format(g)));
        }
        let moved: Vec<Portrait> = self.reps.iter().map(|r| ambient.group.mul(g, r)).collect();
        CosetUnion::from_reps(ambient, self.level, &moved)
    }
}

/// Elements of `r (C ∩ V_i)`: a contiguous run of the sorted element list.
fn coset_elements(ambient: &TruncatedSubgroup, level: usize, r: &Portrait) -> Vec<Portrait> {
    let k = ambient.group.prefix_len(level);
    let key = &r.labels()[..k];
    let start = ambient.elements.partition_point(|x| &x.labels()[..k] < key);
    let end = ambient.elements.partition_point(|x| &x.labels()[..k] <= key);
    ambient.elements[start..end].to_vec()
}

/// Writes `x ⊆ C` as a disjoint union of cosets of `C ∩ V_i`.
pub fn coset_decomposition(ambient: &TruncatedSubgroup, x: &[Portrait], level: usize) -> Result<CosetUnion> {
    ambient.check_level(level)?;
    let group = &ambient.group;
    let k = group.prefix_len(level);
    let coset_size = ambient.intersect_level(level).order();
    let mut buckets: BTreeMap<&[u8], Vec<&Portrait>> = BTreeMap::new();
    for g in x {
        if !ambient.contains(g) {
            return Err(Error::RepNotInSubgroup(group.format(g)));
        }
        buckets.entry(&g.labels()[..k]).or_default().push(g);
    }
    let mut reps = Vec::with_capacity(buckets.len());
    for members in buckets.values() {
        let mut distinct: Vec<&Portrait> = members.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != coset_size {
            return Err(Error::NotACosetUnion {
                level,
                witness: group.format(distinct[0]),
            });
        }
        reps.push(distinct[0].clone());
    }
    reps.sort();
    Ok(CosetUnion { level, reps })
}

/// `μ(O)/μ(L) = |W|/|K|` after refining both to the finer of their levels.
pub fn haar_ratio(ambient: &TruncatedSubgroup, o: &CosetUnion, l: &CosetUnion) -> Result<Rational> {
    if o.is_empty() || l.is_empty() {
        return Err(Error::EmptySet);
    }
    let level = o.level.max(l.level);
    let w = o.refine(ambient, level)?;
    let k = l.refine(ambient, level)?;
    Ok(Rational::new(w.len().into(), k.len().into()))
}

/// Coset counting without materializing the refined lists: each coset at level `i` splits
/// into `[C ∩ V_i : C ∩ V_j]` cosets at level `j`.
pub fn haar_ratio_by_index(ambient: &TruncatedSubgroup, o: &CosetUnion, l: &CosetUnion) -> Result<Rational> {
    if o.is_empty() || l.is_empty() {
        return Err(Error::EmptySet);
    }
    let level = o.level.max(l.level);
    let w = o.len() * ambient.level_index(o.level, level);
    let k = l.len() * ambient.level_index(l.level, level);
    Ok(Rational::new(w.into(), k.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn tree(d: usize, depth: usize) -> Arc<RootedTreeGroup> {
        Arc::new(RootedTreeGroup::new(d, depth).unwrap())
    }

    #[test]
    fn level_stabilizer_examples() {
        let g = tree(2, 2);
        let v1 = level_stabilizer(&g, 1).unwrap();
        assert_eq!(v1.subgroup.order(), 4);
        assert!(v1.normal);
        assert_eq!(level_stabilizer(&g, 0).unwrap().subgroup.order(), 8);
        assert_eq!(level_stabilizer(&g, 2).unwrap().subgroup.order(), 1);
        assert!(matches!(level_stabilizer(&g, 3), Err(Error::DepthOutOfRange { .. })));
        let g3 = tree(3, 2);
        assert_eq!(level_stabilizer(&g3, 1).unwrap().subgroup.order(), 216);
    }

    #[test]
    fn decomposition_examples() {
        let g = tree(2, 2);
        let whole = TruncatedSubgroup::whole(&g).unwrap();
        let cu = coset_decomposition(&whole, whole.dense_selector(), 1).unwrap();
        assert_eq!(cu.len(), 2);
        let v1 = level_stabilizer(&g, 1).unwrap().subgroup;
        let cu = coset_decomposition(&whole, v1.dense_selector(), 1).unwrap();
        assert_eq!(cu.reps(), &[g.identity()]);
        let err = coset_decomposition(&whole, &[g.identity()], 1);
        assert!(matches!(err, Err(Error::NotACosetUnion { level: 1, .. })));
    }

    #[test]
    fn ratio_examples() {
        let g = tree(2, 2);
        let whole = TruncatedSubgroup::whole(&g).unwrap();
        let all = coset_decomposition(&whole, whole.dense_selector(), 0).unwrap();
        let v1 = CosetUnion::from_reps(&whole, 1, &[g.identity()]).unwrap();
        assert_eq!(haar_ratio(&whole, &all, &v1).unwrap(), ratio(2, 1));
        assert_eq!(haar_ratio(&whole, &v1, &v1).unwrap(), ratio(1, 1));
        let g3 = tree(2, 3);
        let whole3 = TruncatedSubgroup::whole(&g3).unwrap();
        let a = CosetUnion::from_reps(&whole3, 1, &[g3.identity()]).unwrap();
        let b = CosetUnion::from_reps(&whole3, 2, &[g3.identity()]).unwrap();
        assert_eq!(haar_ratio(&whole3, &a, &b).unwrap(), ratio(4, 1));
        assert_eq!(haar_ratio_by_index(&whole3, &a, &b).unwrap(), ratio(4, 1));
        let empty = CosetUnion { level: 1, reps: vec![] };
        assert_eq!(haar_ratio(&whole3, &empty, &b), Err(Error::EmptySet));
    }

    #[test]
    fn selector_examples() {
        let g = tree(2, 2);
        assert_eq!(TruncatedSubgroup::trivial(&g).dense_selector(), &[g.identity()]);
        let v1 = level_stabilizer(&g, 1).unwrap().subgroup;
        let sel = v1.dense_selector();
        assert_eq!(sel.len(), 4);
        assert!(sel.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(TruncatedSubgroup::whole(&g).unwrap().dense_selector().len(), 8);
    }

    #[test]
    fn level_constant_is_closed() {
        let g = tree(2, 3);
        let c = level_constant_subgroup(&g).unwrap();
        assert_eq!(c.order(), 8);
        assert!(TruncatedSubgroup::from_elements(&g, c.dense_selector().to_vec()).is_ok());
        let g3 = tree(3, 2);
        let c3 = level_constant_subgroup(&g3).unwrap();
        assert_eq!(c3.order(), 36);
        assert!(TruncatedSubgroup::from_elements(&g3, c3.dense_selector().to_vec()).is_ok());
    }

    #[test]
    fn generated_subgroups() {
        let g = tree(2, 3);
        let whole = TruncatedSubgroup::generated_by(&g, &g.standard_generators()).unwrap();
        assert_eq!(whole.order(), 128);
        assert!(whole.is_normal_in_group());
        let root = g.vertex_element(0, 1);
        let c = TruncatedSubgroup::generated_by(&g, &[root]).unwrap();
        assert_eq!(c.order(), 2);
        assert!(!c.is_normal_in_group());
        assert!(TruncatedSubgroup::from_elements(&g, c.dense_selector().to_vec()).is_ok());
        assert!(TruncatedSubgroup::from_elements(&g, vec![g.vertex_element(0, 1)]).is_err());
    }
}
