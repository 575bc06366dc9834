//! Rooted labelled balls and their empirical distribution.
//!
//! The ball of radius `R` around `v` consists of the vertices within distance `R` and the
//! edges traversed by walks of length `≤ R` from `v`, i.e. every edge leaving a vertex at
//! distance `< R`. Because every vertex has exactly one outgoing edge per letter, numbering
//! vertices in breadth-first order (letters in letter order) is canonical: two rooted balls
//! are isomorphic as labelled graphs iff their numbered edge lists coincide.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;

use num::{One, Zero};

use super::SchreierGraph;
use crate::error::{Error, Result};
use crate::group::{free_reduce, Letter, MarkedGroup};
use crate::Rational;

/// Canonical form of a rooted labelled ball: for each vertex at distance `< R`, in
/// canonical order, the numbers of its neighbours in letter order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallKey {
    radius: usize,
    letters: usize,
    rows: Vec<u32>,
}

impl BallKey {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of vertices in the ball.
    pub fn vertex_count(&self) -> usize {
        self.rows.iter().map(|&t| t as usize + 1).max().unwrap_or(1)
    }
}

/// Canonical key of the `radius`-ball at `root` for any locally finite graph where each
/// state has one successor per letter.
pub fn ball_key<S, F>(root: S, radius: usize, letters: usize, next: F) -> BallKey
where
    S: Clone + Eq + Hash,
    F: Fn(&S, usize) -> S,
{
    let mut number: HashMap<S, u32> = HashMap::from([(root.clone(), 0)]);
    let mut queue = VecDeque::from([(root, 0usize)]);
    let mut rows = Vec::new();
    while let Some((v, d)) = queue.pop_front() {
        if d >= radius {
            continue;
        }
        for l in 0..letters {
            let w = next(&v, l);
            let id = match number.get(&w) {
                Some(&id) => id,
                None => {
                    let id = number.len() as u32;
                    number.insert(w.clone(), id);
                    queue.push_back((w, d + 1));
                    id
                }
            };
            rows.push(id);
        }
    }
    BallKey { radius, letters, rows }
}

/// The ball of the Cayley graph of the free group of the given rank.
pub fn tree_ball_key(rank: usize, radius: usize) -> BallKey {
    ball_key(Vec::<Letter>::new(), radius, 2 * rank, |w, l| {
        let mut x = w.clone();
        x.push(Letter::from_index(l));
        free_reduce(&x)
    })
}

/// Distribution of rooted `R`-balls at a uniform random vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalBallStatistics {
    radius: usize,
    vertices: usize,
    classes: BTreeMap<BallKey, usize>,
}

impl LocalBallStatistics {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Classes with their frequencies, in key order.
    pub fn classes(&self) -> impl Iterator<Item = (&BallKey, Rational)> + '_ {
        self.classes
            .iter()
            .map(|(k, &c)| (k, Rational::new(c.into(), self.vertices.into())))
    }

    pub fn frequency(&self, key: &BallKey) -> Rational {
        Rational::new(self.classes.get(key).copied().unwrap_or(0).into(), self.vertices.into())
    }

    pub fn total(&self) -> Rational {
        self.classes().map(|(_, f)| f).sum()
    }
}

pub fn bs_local_statistics(graph: &SchreierGraph, radius: usize) -> LocalBallStatistics {
    let mut classes = BTreeMap::new();
    for v in 0..graph.vertex_count() {
        let key = ball_key(v, radius, graph.letters(), |&x, l| graph.neighbor(x, l));
        *classes.entry(key).or_insert(0) += 1;
    }
    LocalBallStatistics {
        radius,
        vertices: graph.vertex_count(),
        classes,
    }
}

/// Total-variation distance to the Cayley point mass: `1 − freq(tree ball)`.
pub fn bs_distance_to_cayley(stats: &LocalBallStatistics, g: &MarkedGroup) -> Result<Rational> {
    let rank = g
        .free_rank()
        .ok_or_else(|| Error::Unsupported("distance to a free Cayley graph needs a free group".into()))?;
    if let Some((k, _)) = stats.classes.iter().next() {
        if k.letters != 2 * rank {
            return Err(Error::FamilyMismatch);
        }
    }
    let tree = tree_ball_key(rank, stats.radius);
    Ok(Rational::one() - stats.frequency(&tree))
}

/// Fraction of vertices whose `R`-ball differs from the tree ball, computed independently
/// of the canonical keys: a ball is a tree iff its breadth-first search discovers a new
/// vertex along every edge it explores other than the edge back to the parent.
pub fn non_tree_fraction(graph: &SchreierGraph, radius: usize) -> Rational {
    let n = graph.vertex_count();
    let mut bad = 0usize;
    for v in 0..n {
        let mut depth: HashMap<usize, usize> = HashMap::from([(v, 0)]);
        let mut queue = VecDeque::from([(v, usize::MAX)]);
        let mut tree = true;
        'bfs: while let Some((x, came_by)) = queue.pop_front() {
            if depth[&x] >= radius {
                continue;
            }
            for l in 0..graph.letters() {
                if came_by != usize::MAX && l == (came_by ^ 1) {
                    continue;
                }
                let y = graph.neighbor(x, l);
                if depth.contains_key(&y) {
                    tree = false;
                    break 'bfs;
                }
                depth.insert(y, depth[&x] + 1);
                queue.push_back((y, l));
            }
        }
        if !tree {
            bad += 1;
        }
    }
    if n == 0 {
        Rational::zero()
    } else {
        Rational::new(bad.into(), n.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::cyclic;
    use crate::group::HomImages;
    use crate::subgroup::Subgroup;
    use rand::SeedableRng;

    fn cycle(n: usize) -> SchreierGraph {
        let f2 = MarkedGroup::free(2).unwrap();
        let zn = cyclic(n).finite_arc().unwrap();
        SchreierGraph::from_subgroup(&Subgroup::kernel(&f2, &HomImages::from_generators(zn, &[1, 0])).unwrap())
            .unwrap()
    }

    #[test]
    fn tree_ball_sizes() {
        assert_eq!(tree_ball_key(2, 0).vertex_count(), 1);
        assert_eq!(tree_ball_key(2, 1).vertex_count(), 5);
        assert_eq!(tree_ball_key(2, 2).vertex_count(), 17);
        assert_eq!(tree_ball_key(3, 2).vertex_count(), 1 + 6 + 30);
    }

    #[test]
    fn cycle_family_has_no_tree_balls() {
        let f2 = MarkedGroup::free(2).unwrap();
        for n in [4, 8, 16] {
            let stats = bs_local_statistics(&cycle(n), 1);
            assert_eq!(stats.class_count(), 1);
            assert_eq!(bs_distance_to_cayley(&stats, &f2).unwrap(), Rational::one());
        }
        let two = bs_local_statistics(&cycle(2), 1);
        assert_eq!(two.class_count(), 1);
        assert_eq!(two.total(), Rational::one());
    }

    #[test]
    fn girth_controls_tree_balls() {
        // both generators act as one long cycle shifted by coprime steps
        let n = 101;
        let a: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
        let b: Vec<usize> = (0..n).map(|v| (v + 10) % n).collect();
        let g = SchreierGraph::from_generator_permutations(&[a, b]).unwrap();
        let f2 = MarkedGroup::free(2).unwrap();
        let stats = bs_local_statistics(&g, 1);
        assert_eq!(bs_distance_to_cayley(&stats, &f2).unwrap(), Rational::zero());
        // ab = ba, so radius 2 balls already close a square
        let stats = bs_local_statistics(&g, 2);
        assert_eq!(bs_distance_to_cayley(&stats, &f2).unwrap(), Rational::one());
    }

    #[test]
    fn distance_matches_independent_count() {
        let f2 = MarkedGroup::free(2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let g = SchreierGraph::random(&f2, 60, &mut rng).unwrap();
            for r in 1..=3 {
                let stats = bs_local_statistics(&g, r);
                assert_eq!(bs_distance_to_cayley(&stats, &f2).unwrap(), non_tree_fraction(&g, r));
            }
        }
    }

    #[test]
    fn statistics_invariant_under_relabeling() {
        let f2 = MarkedGroup::free(2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = SchreierGraph::random(&f2, 40, &mut rng).unwrap();
        let h = g.shuffled(&mut rng);
        assert_eq!(bs_local_statistics(&g, 2), bs_local_statistics(&h, 2));
    }
}
