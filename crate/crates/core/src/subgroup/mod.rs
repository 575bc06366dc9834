//! Subgroups of marked groups, the discrete Chabauty metric, quotient maps and
//! intersections.
//!
//! Finite parents store subgroups as sorted element sets. Free parents store the folded core
//! graph of the subgroup at its base point; when the graph is complete it is the coset table
//! (Schreier graph) of a finite-index subgroup. Both forms are canonical, so structural
//! equality is subgroup equality.

mod fingerprint;
mod graph;
mod quotient;
pub(crate) mod text;

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

pub use fingerprint::{chabauty_distance, BallFingerprint, ChabautyDistance};
pub use graph::FoldedGraph;
pub use quotient::{preimage, project_subgroup, Quotient};

use crate::error::{Error, Result};
use crate::group::{Family, GroupElement, HomImages, Letter, MarkedGroup, Word};

/// Vertex cap used when intersecting coset tables.
pub const INTERSECTION_LIMIT: usize = 1 << 20;
/// Largest finite group handled by [`enumerate_subgroups`].
pub const ENUMERATION_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Sorted element indices of a subgroup of a finite group.
    ElementSet(Vec<usize>),
    /// Complete folded graph: finite-index subgroup of a free group.
    CosetTable(FoldedGraph),
    /// Incomplete folded core graph: infinite-index finitely generated subgroup.
    GeneratorList(FoldedGraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: MarkedGroup,
    repr: Representation,
}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

fn tree_unsupported() -> Error {
    Error::Unsupported("subgroups of tree groups are handled by the tdlc module".into())
}

impl Subgroup {
    fn from_graph(parent: &MarkedGroup, g: FoldedGraph) -> Self {
        let repr = if g.is_complete() {
            Representation::CosetTable(g)
        } else {
            Representation::GeneratorList(g)
        };
        Subgroup {
            parent: parent.clone(),
            repr,
        }
    }

    fn from_sorted(parent: &MarkedGroup, elements: Vec<usize>) -> Self {
        Subgroup {
            parent: parent.clone(),
            repr: Representation::ElementSet(elements),
        }
    }

    pub fn trivial(parent: &MarkedGroup) -> Result<Self> {
        Subgroup::generated_by(parent, &[])
    }

    pub fn whole(parent: &MarkedGroup) -> Result<Self> {
        match parent.family() {
            Family::Finite { group, .. } => Ok(Subgroup::from_sorted(parent, (0..group.order()).collect())),
            Family::Free { rank } => Ok(Subgroup::from_graph(
                parent,
                FoldedGraph::from_table(2 * rank, &vec![Some(0); 2 * rank], false).expect("one-vertex table"),
            )),
            Family::Tree { .. } => Err(tree_unsupported()),
        }
    }

    /// The subgroup generated by `elements`.
    pub fn generated_by(parent: &MarkedGroup, elements: &[GroupElement]) -> Result<Self> {
        for g in elements {
            if !parent.contains(g) {
                return Err(Error::FamilyMismatch);
            }
        }
        match parent.family() {
            Family::Finite { group, .. } => {
                let seeds: Vec<usize> = elements.iter().filter_map(|g| g.as_index()).collect();
                Ok(Subgroup::from_sorted(parent, group.closure(&seeds)))
            }
            Family::Free { rank } => {
                let words: Vec<Word> = elements.iter().filter_map(|g| g.as_word().map(|w| w.to_vec())).collect();
                Ok(Subgroup::from_graph(parent, FoldedGraph::from_words(2 * rank, &words)))
            }
            Family::Tree { .. } => Err(tree_unsupported()),
        }
    }

    /// An explicit element set; must be a subgroup.
    pub fn from_elements(parent: &MarkedGroup, elements: &[usize]) -> Result<Self> {
        let group = parent.finite().ok_or(Error::FamilyMismatch)?;
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&x| x >= group.order()) {
            return Err(Error::InvalidSubgroup("element out of range".into()));
        }
        let member: HashSet<usize> = sorted.iter().copied().collect();
        if !member.contains(&0) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for &a in &sorted {
            if !member.contains(&group.inverse(a)) {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {}", group.name(a))));
            }
            for &b in &sorted {
                if !member.contains(&group.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed under multiplication at {}·{}",
                        group.name(a),
                        group.name(b)
                    )));
                }
            }
        }
        Ok(Subgroup::from_sorted(parent, sorted))
    }

    /// A complete coset table: `rows[v][l]` is the coset `v·l` for letter index `l`, base
    /// coset `0`. Must be consistent, complete and transitive.
    pub fn from_coset_table(parent: &MarkedGroup, rows: &[Vec<usize>]) -> Result<Self> {
        let rank = parent.free_rank().ok_or(Error::FamilyMismatch)?;
        let letters = 2 * rank;
        if rows.is_empty() || rows.iter().any(|r| r.len() != letters) {
            return Err(Error::InvalidSubgroup(format!("each row needs {letters} entries")));
        }
        let flat: Vec<Option<usize>> = rows.iter().flatten().map(|&t| Some(t)).collect();
        let graph = FoldedGraph::from_table(letters, &flat, false)
            .ok_or_else(|| Error::InvalidSubgroup("inverse columns are not inverse permutations".into()))?;
        if graph.vertex_count() != rows.len() {
            return Err(Error::InvalidSubgroup("table is not transitive from the base coset".into()));
        }
        Ok(Subgroup::from_graph(parent, graph))
    }

    /// Kernel of the homomorphism from a free parent given by `images`.
    pub fn kernel(parent: &MarkedGroup, images: &HomImages) -> Result<Self> {
        let rank = parent.free_rank().ok_or(Error::UnsupportedSource)?;
        images.check_for_rank(rank)?;
        let target = images.target();
        let letters = 2 * rank;
        // vertices are the elements of the image, reached by right multiplication
        let mut index = vec![usize::MAX; target.order()];
        let mut order = vec![0usize];
        index[0] = 0;
        let mut table: Vec<Option<usize>> = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for l in 0..letters {
                let y = target.mul(x, images.letter_image(Letter::from_index(l)));
                if index[y] == usize::MAX {
                    index[y] = order.len();
                    order.push(y);
                }
                table.push(Some(index[y]));
            }
            i += 1;
        }
        let graph = FoldedGraph::from_table(letters, &table, false).expect("right multiplication is consistent");
        Ok(Subgroup::from_graph(parent, graph))
    }

    /// A random finite-index subgroup of a free parent: stabilizer of a point in a uniformly
    /// random transitive action on `index` points (resampled until transitive).
    pub fn random_finite_index<R: Rng>(parent: &MarkedGroup, index: usize, rng: &mut R) -> Result<Self> {
        let rank = parent.free_rank().ok_or(Error::FamilyMismatch)?;
        if index == 0 {
            return Err(Error::InvalidSubgroup("index must be positive".into()));
        }
        loop {
            let perms: Vec<Vec<usize>> = (0..rank)
                .map(|_| {
                    let mut p: Vec<usize> = (0..index).collect();
                    p.shuffle(rng);
                    p
                })
                .collect();
            let mut table = vec![None; index * 2 * rank];
            for (g, p) in perms.iter().enumerate() {
                for (x, &y) in p.iter().enumerate() {
                    table[x * 2 * rank + 2 * g] = Some(y);
                    table[y * 2 * rank + 2 * g + 1] = Some(x);
                }
            }
            let graph = FoldedGraph::from_table(2 * rank, &table, false).expect("permutations are consistent");
            if graph.vertex_count() == index {
                return Ok(Subgroup::from_graph(parent, graph));
            }
        }
    }

    pub fn parent(&self) -> &MarkedGroup {
        &self.parent
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn elements(&self) -> Option<&[usize]> {
        match &self.repr {
            Representation::ElementSet(e) => Some(e),
            _ => None,
        }
    }

    pub fn graph(&self) -> Option<&FoldedGraph> {
        match &self.repr {
            Representation::CosetTable(g) | Representation::GeneratorList(g) => Some(g),
            Representation::ElementSet(_) => None,
        }
    }

    /// Order for finite parents.
    pub fn order(&self) -> Option<usize> {
        self.elements().map(|e| e.len())
    }

    /// Index in the parent, if finite.
    pub fn index(&self) -> Option<usize> {
        match &self.repr {
            Representation::ElementSet(e) => Some(self.parent.order()? / e.len()),
            Representation::CosetTable(g) => Some(g.vertex_count()),
            Representation::GeneratorList(_) => None,
        }
    }

    /// Rank of a subgroup of a free parent.
    pub fn free_rank(&self) -> Option<usize> {
        self.graph().map(|g| g.rank())
    }

    pub fn is_trivial(&self) -> bool {
        match &self.repr {
            Representation::ElementSet(e) => e.len() == 1,
            Representation::CosetTable(g) | Representation::GeneratorList(g) => g.edge_count() == 0,
        }
    }

    pub fn is_whole(&self) -> bool {
        match &self.repr {
            Representation::ElementSet(e) => Some(e.len()) == self.parent.order(),
            Representation::CosetTable(g) => g.vertex_count() == 1,
            Representation::GeneratorList(_) => false,
        }
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        if !self.parent.contains(g) {
            return Err(Error::FamilyMismatch);
        }
        Ok(match (&self.repr, g) {
            (Representation::ElementSet(e), GroupElement::Index(i)) => e.binary_search(i).is_ok(),
            (Representation::CosetTable(graph) | Representation::GeneratorList(graph), GroupElement::Word(w)) => {
                graph.accepts(w)
            }
            _ => return Err(Error::FamilyMismatch),
        })
    }

    /// Parses `text` as an element of the parent and tests membership.
    pub fn contains_str(&self, text: &str) -> Result<bool> {
        let g = self.parent.parse_element(text)?;
        self.contains(&g)
    }

    /// Generators: the element set itself (finite) or a free basis (free).
    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.repr {
            Representation::ElementSet(e) => e.iter().map(|&i| GroupElement::Index(i)).collect(),
            Representation::CosetTable(g) | Representation::GeneratorList(g) => {
                g.free_basis().into_iter().map(GroupElement::Word).collect()
            }
        }
    }

    fn same_parent(&self, other: &Subgroup) -> Result<()> {
        if self.parent == other.parent {
            Ok(())
        } else {
            Err(Error::FamilyMismatch)
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> Result<bool> {
        self.same_parent(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Representation::ElementSet(a), Representation::ElementSet(b)) => {
                a.iter().all(|x| b.binary_search(x).is_ok())
            }
            _ => {
                let target = other.graph().expect("free parent");
                self.graph()
                    .expect("free parent")
                    .free_basis()
                    .iter()
                    .all(|w| target.accepts(w))
            }
        })
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: &GroupElement) -> Result<Subgroup> {
        if !self.parent.contains(g) {
            return Err(Error::FamilyMismatch);
        }
        match (&self.repr, g) {
            (Representation::ElementSet(e), GroupElement::Index(x)) => {
                let group = self.parent.finite().expect("finite parent");
                let mut c: Vec<usize> = e.iter().map(|&h| group.conjugate(*x, h)).collect();
                c.sort_unstable();
                Ok(Subgroup::from_sorted(&self.parent, c))
            }
            (Representation::CosetTable(graph) | Representation::GeneratorList(graph), GroupElement::Word(w)) => {
                Ok(Subgroup::from_graph(&self.parent, graph.conjugate(w)))
            }
            _ => Err(Error::FamilyMismatch),
        }
    }

    /// Conjugation by the generators `s` and `s⁻¹` fixes the subgroup.
    pub fn is_normal(&self) -> bool {
        self.parent.letters().all(|l| {
            let s = self.parent.letter_element(l);
            self.conjugate(&s).map(|c| c == *self).unwrap_or(false)
        })
    }

    /// The subgroup generated by `self` and `other`.
    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_parent(other)?;
        match (&self.repr, &other.repr) {
            (Representation::ElementSet(a), Representation::ElementSet(b)) => {
                let group = self.parent.finite().expect("finite parent");
                let seeds: Vec<usize> = a.iter().chain(b).copied().collect();
                Ok(Subgroup::from_sorted(&self.parent, group.closure(&seeds)))
            }
            _ => Ok(Subgroup::from_graph(
                &self.parent,
                self.graph().expect("free parent").join(other.graph().expect("free parent")),
            )),
        }
    }

    /// `H ∩ K`; coset tables use the fiber product.
    pub fn intersect_with(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_parent(other)?;
        match (&self.repr, &other.repr) {
            (Representation::ElementSet(a), Representation::ElementSet(b)) => {
                let c = a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect();
                Ok(Subgroup::from_sorted(&self.parent, c))
            }
            _ => {
                let g = self
                    .graph()
                    .expect("free parent")
                    .intersect(other.graph().expect("free parent"), INTERSECTION_LIMIT)
                    .ok_or(Error::IndexOverflow {
                        limit: INTERSECTION_LIMIT,
                    })?;
                Ok(Subgroup::from_graph(&self.parent, g))
            }
        }
    }

    /// Membership in the class of amenable subgroups, decided by family rules: finite
    /// groups are amenable, and a subgroup of a free group is amenable iff its rank is at
    /// most one.
    pub fn amenable_flag(&self) -> Result<bool> {
        match &self.repr {
            Representation::ElementSet(_) => Ok(true),
            Representation::CosetTable(g) | Representation::GeneratorList(g) => Ok(g.rank() <= 1),
        }
    }

    /// Canonical sort key: element sets by size then elements, graphs by vertex count then
    /// table.
    pub fn sort_key(&self) -> (usize, Vec<u64>) {
        match &self.repr {
            Representation::ElementSet(e) => (e.len(), e.iter().map(|&x| x as u64).collect()),
            Representation::CosetTable(g) | Representation::GeneratorList(g) => (
                g.vertex_count(),
                g.rows()
                    .into_iter()
                    .flatten()
                    .map(|t| t.map_or(u64::MAX, |t| t as u64))
                    .collect(),
            ),
        }
    }

    /// Graphviz rendering of the coset table or core graph.
    pub fn to_dot(&self) -> Result<String> {
        let g = self
            .graph()
            .ok_or_else(|| Error::Unsupported("element sets have no graph".into()))?;
        Ok(g.to_dot("subgroup", |l| self.parent.letter_label(l)))
    }
}

/// Vertex cap for intermediate core graphs in free normal closures, per unit of index bound.
const CLOSURE_WORK_FACTOR: usize = 8;

/// The smallest normal subgroup containing `elements`. Free parents need the result to have
/// index at most `index_bound`.
pub fn normal_closure_of_set(parent: &MarkedGroup, elements: &[GroupElement], index_bound: usize) -> Result<Subgroup> {
    let start = Subgroup::generated_by(parent, elements)?;
    normal_closure(&start, index_bound)
}

/// Normal closure of a subgroup.
pub fn normal_closure(h: &Subgroup, index_bound: usize) -> Result<Subgroup> {
    let parent = h.parent().clone();
    match h.representation() {
        Representation::ElementSet(_) => {
            let group = parent.finite().expect("finite parent");
            let letters: Vec<usize> = parent.letters().filter_map(|l| parent.letter_element(l).as_index()).collect();
            let mut current = h.elements().unwrap().to_vec();
            loop {
                let mut seeds = current.clone();
                for &s in &letters {
                    seeds.extend(current.iter().map(|&x| group.conjugate(s, x)));
                }
                let next = group.closure(&seeds);
                if next == current {
                    return Ok(Subgroup::from_sorted(&parent, current));
                }
                current = next;
            }
        }
        _ => {
            if h.is_trivial() {
                return Ok(h.clone());
            }
            let cap = index_bound.saturating_mul(CLOSURE_WORK_FACTOR).max(64);
            let mut current = h.graph().unwrap().clone();
            loop {
                let mut next = current.clone();
                for l in parent.letters() {
                    let conj = current.conjugate(&[l]);
                    next = next.join(&conj);
                    if next.vertex_count() > cap {
                        return Err(Error::ClosureExceedsBound { bound: index_bound });
                    }
                }
                if next == current {
                    break;
                }
                current = next;
            }
            if !current.is_complete() || current.vertex_count() > index_bound {
                return Err(Error::ClosureExceedsBound { bound: index_bound });
            }
            Ok(Subgroup::from_graph(&parent, current))
        }
    }
}

/// Every subgroup of a finite group of order at most 200, sorted by order and then by
/// element list.
pub fn enumerate_subgroups(parent: &MarkedGroup) -> Result<Vec<Subgroup>> {
    let group = parent.finite().ok_or(Error::FamilyMismatch)?;
    let n = group.order();
    if n > ENUMERATION_LIMIT {
        return Err(Error::GroupTooLarge {
            order: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut cyclic: Vec<Vec<usize>> = (0..n).map(|g| group.closure(&[g])).collect();
    cyclic.sort();
    cyclic.dedup();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: Vec<Vec<usize>> = vec![vec![0]];
    seen.insert(vec![0]);
    while let Some(h) = queue.pop() {
        for c in &cyclic {
            if c.iter().all(|x| h.binary_search(x).is_ok()) {
                continue;
            }
            let seeds: Vec<usize> = h.iter().chain(c).copied().collect();
            let j = group.closure(&seeds);
            if seen.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    let mut all: Vec<Vec<usize>> = seen.into_iter().collect();
    all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(all.into_iter().map(|e| Subgroup::from_sorted(parent, e)).collect())
}

/// The largest amenable normal subgroup: the whole group for finite groups and `ℤ`,
/// trivial for free groups of rank at least two.
pub fn amenable_radical(parent: &MarkedGroup) -> Result<Subgroup> {
    match parent.family() {
        Family::Finite { .. } => Subgroup::whole(parent),
        Family::Free { rank: 1 } => Subgroup::whole(parent),
        Family::Free { .. } => Subgroup::trivial(parent),
        Family::Tree { .. } => Err(Error::Unsupported("amenable radical of a tree group".into())),
    }
}
