//! Marked groups: a group family together with a finite symmetric generating set.
//!
//! Generators carry string labels. Internally a letter is a generator index plus a sign,
//! so the symmetric set `S` always has `2k` formal letters `s, s⁻¹` for `k` generators. In
//! text, inverses are written with the suffix `^-1` (the form `⁻¹` is also accepted).

mod finite;
pub mod fixtures;
mod perm;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

pub use finite::{FiniteGroup, TABLE_LIMIT};
pub use perm::Permutation;

use crate::error::{Error, Result};
use crate::tdlc::{Portrait, RootedTreeGroup};

/// Default cap on the number of elements a ball may hold.
pub const DEFAULT_BALL_CAP: usize = 10_000_000;

/// A formal letter of the symmetric generating set: generator `i` or its inverse.
/// Letters are ordered `a < a⁻¹ < b < b⁻¹ < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((2 * generator + inverse as usize) as u32)
    }

    pub fn from_index(index: usize) -> Self {
        Letter(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

pub type Word = Vec<Letter>;

/// Free reduction: cancels every adjacent `s s⁻¹`.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Canonical element forms: reduced words (free groups), table indices (finite groups) or
/// portraits (truncated tree groups).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Word(Word),
    Index(usize),
    Portrait(Portrait),
}

impl GroupElement {
    pub fn as_index(&self) -> Option<usize> {
        match self {
            GroupElement::Index(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[Letter]> {
        match self {
            GroupElement::Word(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Finite {
        group: Arc<FiniteGroup>,
        generators: Vec<usize>,
    },
    Free {
        rank: usize,
    },
    Tree {
        group: Arc<RootedTreeGroup>,
        generators: Vec<Portrait>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGroup {
    labels: Vec<String>,
    family: Family,
}

fn default_labels(rank: usize) -> Vec<String> {
    (0..rank)
        .map(|i| {
            if rank <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

impl MarkedGroup {
    pub fn free(rank: usize) -> Result<Self> {
        MarkedGroup::free_with_labels(default_labels(rank))
    }

    pub fn free_with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidGroup("free group needs at least one generator".into()));
        }
        let rank = labels.len();
        MarkedGroup::new(labels, Family::Free { rank })
    }

    /// A finite group marked by generators given as element indices. Checks generation and
    /// associativity (Light's test on the generators).
    pub fn from_finite(group: Arc<FiniteGroup>, generators: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        if generators.iter().any(|&g| g >= group.order()) {
            return Err(Error::InvalidGroup("generator index out of range".into()));
        }
        if group.order() > 1 && group.closure(&generators).len() != group.order() {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        if !group.is_associative_on(&generators) {
            return Err(Error::InvalidGroup("table is not associative".into()));
        }
        let labels = labels.unwrap_or_else(|| generators.iter().map(|&g| group.name(g).to_string()).collect());
        MarkedGroup::new(labels, Family::Finite { group, generators })
    }

    pub fn tree(group: Arc<RootedTreeGroup>, generators: Vec<Portrait>, labels: Option<Vec<String>>) -> Result<Self> {
        if generators.iter().any(|g| g.labels().len() != group.internal_vertices()) {
            return Err(Error::InvalidGroup("portrait does not match the tree".into()));
        }
        let labels = labels.unwrap_or_else(|| default_labels(generators.len()));
        MarkedGroup::new(labels, Family::Tree { group, generators })
    }

    fn new(labels: Vec<String>, family: Family) -> Result<Self> {
        let k = match &family {
            Family::Finite { generators, .. } => generators.len(),
            Family::Free { rank } => *rank,
            Family::Tree { generators, .. } => generators.len(),
        };
        if k == 0 {
            return Err(Error::InvalidGroup("|S| must be at least 1".into()));
        }
        if labels.len() != k {
            return Err(Error::InvalidGroup("one label per generator required".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != k || labels.iter().any(|l| l.is_empty() || l.contains(char::is_whitespace)) {
            return Err(Error::InvalidGroup("labels must be distinct non-empty tokens".into()));
        }
        Ok(MarkedGroup { labels, family })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn finite(&self) -> Option<&FiniteGroup> {
        match &self.family {
            Family::Finite { group, .. } => Some(group),
            _ => None,
        }
    }

    pub fn finite_arc(&self) -> Option<Arc<FiniteGroup>> {
        match &self.family {
            Family::Finite { group, .. } => Some(group.clone()),
            _ => None,
        }
    }

    pub fn free_rank(&self) -> Option<usize> {
        match self.family {
            Family::Free { rank } => Some(rank),
            _ => None,
        }
    }

    pub fn is_free(&self) -> bool {
        self.free_rank().is_some()
    }

    /// Number of generators `k`; the symmetric set has `2k` letters.
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn num_letters(&self) -> usize {
        2 * self.rank()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.num_letters()).map(Letter::from_index)
    }

    pub fn generator_letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.rank()).map(|g| Letter::new(g, false))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letter_label(&self, l: Letter) -> String {
        let base = &self.labels[l.generator()];
        if l.is_inverse() {
            format!("{base}^-1")
        } else {
            base.clone()
        }
    }

    /// Group order, when finite and representable.
    pub fn order(&self) -> Option<usize> {
        match &self.family {
            Family::Finite { group, .. } => Some(group.order()),
            Family::Free { .. } => None,
            Family::Tree { .. } => None,
        }
    }

    /// Tokenizes a word over `S`: labels are matched greedily (longest first), each with an
    /// optional `^-1`/`⁻¹` suffix; whitespace separates nothing. `e` or the empty string is
    /// the empty word unless `e` is itself a label.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || (text == "e" && !self.labels.iter().any(|l| l == "e")) {
            return Ok(Vec::new());
        }
        let mut order: Vec<usize> = (0..self.rank()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.labels[i].len()));
        let mut rest = text;
        let mut word = Vec::new();
        'outer: while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            for &g in &order {
                if let Some(after) = rest.strip_prefix(self.labels[g].as_str()) {
                    let (inverse, after) = if let Some(a) = after.strip_prefix("^-1") {
                        (true, a)
                    } else if let Some(a) = after.strip_prefix("⁻¹") {
                        (true, a)
                    } else {
                        (false, after)
                    };
                    word.push(Letter::new(g, inverse));
                    rest = after;
                    continue 'outer;
                }
            }
            let token: String = rest.chars().take_while(|c| !c.is_whitespace()).collect();
            return Err(Error::UnknownGenerator(token));
        }
        Ok(word)
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "e".into();
        }
        word.iter().map(|&l| self.letter_label(l)).collect::<Vec<_>>().join(" ")
    }

    pub fn identity(&self) -> GroupElement {
        match &self.family {
            Family::Finite { .. } => GroupElement::Index(0),
            Family::Free { .. } => GroupElement::Word(Vec::new()),
            Family::Tree { group, .. } => GroupElement::Portrait(group.identity()),
        }
    }

    pub fn letter_element(&self, l: Letter) -> GroupElement {
        match &self.family {
            Family::Finite { group, generators } => {
                let g = generators[l.generator()];
                GroupElement::Index(if l.is_inverse() { group.inverse(g) } else { g })
            }
            Family::Free { .. } => GroupElement::Word(vec![l]),
            Family::Tree { group, generators } => {
                let g = &generators[l.generator()];
                GroupElement::Portrait(if l.is_inverse() { group.inverse(g) } else { g.clone() })
            }
        }
    }

    fn check_letters(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|l| l.index() >= self.num_letters()) {
            Some(l) => Err(Error::UnknownGenerator(format!("letter #{}", l.index()))),
            None => Ok(()),
        }
    }

    /// Canonical form of the product of the letters of `word`.
    pub fn reduce_word(&self, word: &[Letter]) -> Result<GroupElement> {
        self.check_letters(word)?;
        match &self.family {
            Family::Free { .. } => Ok(GroupElement::Word(free_reduce(word))),
            Family::Finite { group, generators } => {
                let mut x = 0usize;
                for &l in word {
                    let g = generators[l.generator()];
                    x = group.mul(x, if l.is_inverse() { group.inverse(g) } else { g });
                }
                Ok(GroupElement::Index(x))
            }
            Family::Tree { group, .. } => {
                let mut x = group.identity();
                for &l in word {
                    if let GroupElement::Portrait(p) = self.letter_element(l) {
                        x = group.mul(&x, &p);
                    }
                }
                Ok(GroupElement::Portrait(x))
            }
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (&self.family, g) {
            (Family::Free { .. }, GroupElement::Word(w)) => {
                w.iter().all(|l| l.index() < self.num_letters()) && free_reduce(w).len() == w.len()
            }
            (Family::Finite { group, .. }, GroupElement::Index(i)) => *i < group.order(),
            (Family::Tree { group, .. }, GroupElement::Portrait(p)) => {
                p.labels().len() == group.internal_vertices()
            }
            _ => false,
        }
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch)
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (&self.family, g, h) {
            (Family::Free { .. }, GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                GroupElement::Word(free_reduce(&w))
            }
            (Family::Finite { group, .. }, GroupElement::Index(a), GroupElement::Index(b)) => {
                GroupElement::Index(group.mul(*a, *b))
            }
            (Family::Tree { group, .. }, GroupElement::Portrait(a), GroupElement::Portrait(b)) => {
                GroupElement::Portrait(group.mul(a, b))
            }
            _ => return Err(Error::FamilyMismatch),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(match (&self.family, g) {
            (Family::Free { .. }, GroupElement::Word(w)) => GroupElement::Word(invert_word(w)),
            (Family::Finite { group, .. }, GroupElement::Index(a)) => GroupElement::Index(group.inverse(*a)),
            (Family::Tree { group, .. }, GroupElement::Portrait(p)) => GroupElement::Portrait(group.inverse(p)),
            _ => return Err(Error::FamilyMismatch),
        })
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        let gh = self.multiply(g, h)?;
        self.multiply(&gh, &self.inverse(g)?)
    }

    pub fn element_name(&self, g: &GroupElement) -> String {
        match (&self.family, g) {
            (Family::Free { .. }, GroupElement::Word(w)) => {
                if w.is_empty() {
                    "e".into()
                } else {
                    w.iter().map(|&l| self.letter_label(l)).collect::<Vec<_>>().join("")
                }
            }
            (Family::Finite { group, .. }, GroupElement::Index(i)) if *i < group.order() => group.name(*i).to_string(),
            (Family::Tree { group, .. }, GroupElement::Portrait(p)) => group.format(p),
            _ => format!("{g:?}"),
        }
    }

    /// Parses an element: an element name (finite groups), a portrait (tree groups), or a
    /// word over `S` in any family.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        match &self.family {
            Family::Finite { group, .. } => {
                if let Some(i) = group.index_of(text.trim()) {
                    return Ok(GroupElement::Index(i));
                }
            }
            Family::Tree { group, .. } => {
                if text.contains('|') || group.depth() == 1 {
                    if let Ok(p) = group.parse(text) {
                        return Ok(GroupElement::Portrait(p));
                    }
                }
            }
            Family::Free { .. } => {}
        }
        let word = self.parse_word(text)?;
        self.reduce_word(&word)
    }

    /// A word for `g`: the reduced word itself in free groups, a shortlex geodesic in finite
    /// groups.
    pub fn word_of(&self, g: &GroupElement) -> Result<Word> {
        self.check(g)?;
        match (&self.family, g) {
            (Family::Free { .. }, GroupElement::Word(w)) => Ok(w.clone()),
            (Family::Finite { group, generators }, GroupElement::Index(target)) => {
                let words = finite_geodesics(group, generators);
                Ok(words[*target].clone())
            }
            _ => Err(Error::Unsupported("words for tree-group elements".into())),
        }
    }

    /// Elements of word length at most `radius`, in canonical order: shortlex on reduced
    /// words (free), index order (finite), portrait order (tree).
    pub fn ball(&self, radius: usize) -> Result<Vec<GroupElement>> {
        self.ball_with_cap(radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_with_cap(&self, radius: usize, cap: usize) -> Result<Vec<GroupElement>> {
        Ok(self.ball_with_lengths(radius, cap)?.into_iter().map(|(g, _)| g).collect())
    }

    /// Like [`ball_with_cap`](Self::ball_with_cap), paired with word lengths.
    pub fn ball_with_lengths(&self, radius: usize, cap: usize) -> Result<Vec<(GroupElement, usize)>> {
        let too_large = Error::BallTooLarge { radius, cap };
        match &self.family {
            Family::Free { rank } => {
                let size = free_ball_size(*rank, radius).ok_or(too_large.clone())?;
                if size > cap as u128 {
                    return Err(too_large);
                }
                let mut out: Vec<(GroupElement, usize)> = vec![(GroupElement::Word(Vec::new()), 0)];
                let mut start = 0;
                for r in 1..=radius {
                    let end = out.len();
                    for i in start..end {
                        let w = out[i].0.as_word().unwrap().to_vec();
                        for l in self.letters() {
                            if w.last() == Some(&l.inverse()) {
                                continue;
                            }
                            let mut next = w.clone();
                            next.push(l);
                            out.push((GroupElement::Word(next), r));
                        }
                    }
                    start = end;
                }
                Ok(out)
            }
            Family::Finite { group, .. } => {
                let dist = self.finite_distances(group);
                let out: Vec<(GroupElement, usize)> = dist
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d <= radius)
                    .map(|(i, &d)| (GroupElement::Index(i), d))
                    .collect();
                if out.len() > cap {
                    return Err(too_large);
                }
                Ok(out)
            }
            Family::Tree { group, .. } => {
                let mut seen: HashMap<Portrait, usize> = HashMap::from([(group.identity(), 0)]);
                let mut frontier = vec![group.identity()];
                let letters: Vec<Portrait> = self
                    .letters()
                    .map(|l| match self.letter_element(l) {
                        GroupElement::Portrait(p) => p,
                        _ => unreachable!(),
                    })
                    .collect();
                for r in 1..=radius {
                    let mut next = Vec::new();
                    for x in &frontier {
                        for s in &letters {
                            let y = group.mul(x, s);
                            if !seen.contains_key(&y) {
                                if seen.len() >= cap {
                                    return Err(too_large);
                                }
                                seen.insert(y.clone(), r);
                                next.push(y);
                            }
                        }
                    }
                    if next.is_empty() {
                        break;
                    }
                    frontier = next;
                }
                let mut out: Vec<(GroupElement, usize)> =
                    seen.into_iter().map(|(p, d)| (GroupElement::Portrait(p), d)).collect();
                out.sort();
                Ok(out)
            }
        }
    }

    fn finite_distances(&self, group: &FiniteGroup) -> Vec<usize> {
        let letters: Vec<usize> = self.letters().filter_map(|l| self.letter_element(l).as_index()).collect();
        let mut dist = vec![usize::MAX; group.order()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &letters {
                let y = group.mul(x, s);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Image of `w` under the homomorphism from a free group determined by `images`.
    pub fn evaluate_hom(&self, images: &HomImages, w: &GroupElement) -> Result<usize> {
        let rank = self.free_rank().ok_or(Error::UnsupportedSource)?;
        images.check_for_rank(rank)?;
        let word = w.as_word().ok_or(Error::FamilyMismatch)?;
        self.check(w)?;
        Ok(images.evaluate(word))
    }
}

impl fmt::Display for MarkedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Free { rank } => write!(f, "F{rank}"),
            Family::Finite { group, .. } => write!(f, "finite group of order {}", group.order()),
            Family::Tree { group, .. } => write!(f, "Aut(T[{}, {}])", group.arity(), group.depth()),
        }?;
        write!(f, " <{}>", self.labels.join(", "))
    }
}

/// `1 + Σ_{r=1..R} 2k(2k−1)^{r−1}`.
pub fn free_ball_size(rank: usize, radius: usize) -> Option<u128> {
    let q = 2 * rank as u128;
    let mut total: u128 = 1;
    let mut sphere: u128 = q;
    for r in 1..=radius {
        if r > 1 {
            sphere = sphere.checked_mul(q - 1)?;
        }
        total = total.checked_add(sphere)?;
    }
    Some(total)
}

/// Shortlex geodesic words for every element of a finite marked group.
fn finite_geodesics(group: &FiniteGroup, generators: &[usize]) -> Vec<Word> {
    let letters: Vec<(Letter, usize)> = (0..2 * generators.len())
        .map(|i| {
            let l = Letter::from_index(i);
            let g = generators[l.generator()];
            (l, if l.is_inverse() { group.inverse(g) } else { g })
        })
        .collect();
    let mut words: Vec<Option<Word>> = vec![None; group.order()];
    words[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &(l, s) in &letters {
            let y = group.mul(x, s);
            if words[y].is_none() {
                let mut w = words[x].clone().unwrap();
                w.push(l);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    words.into_iter().map(|w| w.unwrap_or_default()).collect()
}

/// Images of the letters of a free group in a finite target group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomImages {
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl HomImages {
    /// One image per letter, in letter order `a, a⁻¹, b, b⁻¹, …`. Symmetry is checked when
    /// the homomorphism is evaluated.
    pub fn from_letters(target: Arc<FiniteGroup>, images: Vec<usize>) -> Self {
        HomImages { target, images }
    }

    /// Images of the generators; inverse letters get the inverse images.
    pub fn from_generators(target: Arc<FiniteGroup>, generator_images: &[usize]) -> Self {
        let images = generator_images
            .iter()
            .flat_map(|&g| [g, target.inverse(g.min(target.order() - 1))])
            .collect();
        HomImages { target, images }
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn letter_image(&self, l: Letter) -> usize {
        self.images[l.index()]
    }

    pub(crate) fn check_for_rank(&self, rank: usize) -> Result<()> {
        if self.images.len() != 2 * rank {
            return Err(Error::NotAHomomorphism(format!(
                "expected {} letter images, got {}",
                2 * rank,
                self.images.len()
            )));
        }
        for (i, &x) in self.images.iter().enumerate() {
            if x >= self.target.order() {
                return Err(Error::NotAHomomorphism(format!("image {x} not in target")));
            }
            let partner = self.images[i ^ 1];
            if self.target.inverse(x) != partner {
                return Err(Error::NotAHomomorphism(format!(
                    "image of letter {i} is not inverse to the image of its inverse letter"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn evaluate(&self, word: &[Letter]) -> usize {
        word.iter()
            .fold(0usize, |acc, &l| self.target.mul(acc, self.images[l.index()]))
    }
}
