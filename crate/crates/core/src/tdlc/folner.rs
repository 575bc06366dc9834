//! Følner-set search over unions of cosets of `C ∩ V_i`, and an independent checker.

use std::collections::{BTreeSet, HashMap};

use super::cosets::{coset_decomposition, haar_ratio, CosetUnion, TruncatedSubgroup};
use super::Portrait;
use crate::error::{Error, Result};
use crate::Rational;

/// Subsets of at most this many cosets are searched exhaustively.
pub const EXHAUSTIVE_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerOptions {
    /// `Q = ⋃ f (C ∩ V_q)`; levels below `q` are not searched.
    pub q_level: usize,
    /// Levels with more cosets than this are skipped.
    pub max_cosets: usize,
    /// Cap on candidate evaluations in the exhaustive phase, per level.
    pub subset_budget: usize,
}

impl Default for FolnerOptions {
    fn default() -> Self {
        FolnerOptions {
            q_level: 0,
            max_cosets: 4096,
            subset_budget: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerCertificate {
    pub level: usize,
    /// Lexicographically least representatives of the cosets making up `U`.
    pub reps: Vec<Portrait>,
    pub worst_ratio: Rational,
    pub n: u64,
    pub q_level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAttempt {
    pub level: usize,
    pub cosets: usize,
    pub skipped: bool,
    /// Smallest worst ratio seen among the candidates evaluated at this level.
    pub best_ratio: Option<Rational>,
}

/// No certificate within the truncation and the search limits. This says nothing about
/// amenability of any inverse limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustionReport {
    pub n: u64,
    pub q_level: usize,
    pub attempts: Vec<LevelAttempt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FolnerOutcome {
    Certificate(FolnerCertificate),
    Exhausted(ExhaustionReport),
}

impl FolnerOutcome {
    pub fn certificate(&self) -> Option<&FolnerCertificate> {
        match self {
            FolnerOutcome::Certificate(c) => Some(c),
            FolnerOutcome::Exhausted(_) => None,
        }
    }
}

/// Elements of `Q = ⋃_{f ∈ reps} f (C ∩ V_q)`.
fn test_set(c: &TruncatedSubgroup, q_reps: &[Portrait], q_level: usize) -> Result<Vec<Portrait>> {
    if q_level > c.group().depth() {
        return Err(Error::DepthOutOfRange {
            depth: q_level,
            max: c.group().depth(),
        });
    }
    let cq = c.intersect_level(q_level);
    let mut q = BTreeSet::new();
    for f in q_reps {
        if !c.contains(f) {
            return Err(Error::RepNotInSubgroup(c.group().format(f)));
        }
        for k in cq.dense_selector() {
            q.insert(c.group().mul(f, k));
        }
    }
    Ok(q.into_iter().collect())
}

/// Cosets of `C ∩ V_i` in `C` and the permutations induced on them by `Q`.
struct CosetAction {
    reps: Vec<Portrait>,
    perms: Vec<Vec<usize>>,
}

impl CosetAction {
    fn new(c: &TruncatedSubgroup, q: &[Portrait], level: usize) -> Self {
        let group = c.group();
        let k = group.prefix_len(level);
        let mut reps: Vec<Portrait> = Vec::new();
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        // elements are sorted, so the first hit of each prefix is the least representative
        for x in c.dense_selector() {
            let key = x.labels()[..k].to_vec();
            if !index.contains_key(&key) {
                index.insert(key, reps.len());
                reps.push(x.clone());
            }
        }
        let mut seen = BTreeSet::new();
        let mut perms = Vec::new();
        for g in q {
            // the action on cosets only depends on the labels above level i
            if !seen.insert(g.labels()[..k].to_vec()) {
                continue;
            }
            let perm: Vec<usize> = reps
                .iter()
                .map(|r| index[&group.mul(g, r).labels()[..k]])
                .collect();
            perms.push(perm);
        }
        CosetAction { reps, perms }
    }

    /// `max_g |gS Δ S| / |S|` over the test set.
    fn worst_ratio(&self, subset: &[usize]) -> Rational {
        let mut member = vec![false; self.reps.len()];
        for &s in subset {
            member[s] = true;
        }
        let moved = self
            .perms
            .iter()
            .map(|p| subset.iter().filter(|&&s| !member[p[s]]).count())
            .max()
            .unwrap_or(0);
        Rational::new((2 * moved).into(), subset.len().into())
    }
}

fn next_combination(comb: &mut [usize], m: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < m - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Searches levels `q..=D` in order. At each level: all unions of at most
/// [`EXHAUSTIVE_MAX`] cosets by size then lexicographic combination order, then
/// prefixes of the coset enumeration, with a greedy pass dropping cosets from a prefix hit.
pub fn folner_search(
    c: &TruncatedSubgroup,
    q_reps: &[Portrait],
    n: u64,
    options: &FolnerOptions,
) -> Result<FolnerOutcome> {
    if n == 0 {
        return Err(Error::MalformedCertificate("n must be positive".into()));
    }
    let q = test_set(c, q_reps, options.q_level)?;
    let bound = Rational::new(1.into(), n.into());
    let mut attempts = Vec::new();
    for level in options.q_level..=c.group().depth() {
        let action = CosetAction::new(c, &q, level);
        let m = action.reps.len();
        if m > options.max_cosets {
            attempts.push(LevelAttempt {
                level,
                cosets: m,
                skipped: true,
                best_ratio: None,
            });
            continue;
        }
        let mut best: Option<Rational> = None;
        let mut consider = |r: &Rational| {
            if best.as_ref().map_or(true, |b| r < b) {
                best = Some(r.clone());
            }
        };
        let finish = |subset: &[usize], ratio: Rational| FolnerCertificate {
            level,
            reps: subset.iter().map(|&s| action.reps[s].clone()).collect(),
            worst_ratio: ratio,
            n,
            q_level: options.q_level,
        };

        let mut budget = options.subset_budget;
        'sizes: for k in 1..=EXHAUSTIVE_MAX.min(m) {
            let mut comb: Vec<usize> = (0..k).collect();
            loop {
                if budget == 0 {
                    break 'sizes;
                }
                budget -= 1;
                let r = action.worst_ratio(&comb);
                if r <= bound {
                    return Ok(FolnerOutcome::Certificate(finish(&comb, r)));
                }
                consider(&r);
                if !next_combination(&mut comb, m) {
                    break;
                }
            }
        }

        for j in 1..=m {
            let mut subset: Vec<usize> = (0..j).collect();
            let r = action.worst_ratio(&subset);
            if r <= bound {
                let mut ratio = r;
                let mut shrunk = true;
                while shrunk && subset.len() > 1 {
                    shrunk = false;
                    for pos in 0..subset.len() {
                        let mut smaller = subset.clone();
                        smaller.remove(pos);
                        let r = action.worst_ratio(&smaller);
                        if r <= bound {
                            subset = smaller;
                            ratio = r;
                            shrunk = true;
                            break;
                        }
                    }
                }
                return Ok(FolnerOutcome::Certificate(finish(&subset, ratio)));
            }
            consider(&r);
        }
        attempts.push(LevelAttempt {
            level,
            cosets: m,
            skipped: false,
            best_ratio: best,
        });
    }
    Ok(FolnerOutcome::Exhausted(ExhaustionReport {
        n,
        q_level: options.q_level,
        attempts,
    }))
}

/// Recomputes `μ(gU Δ U)/μ(U)` for every `g ∈ Q` from element sets, independent of the
/// coset permutations used by the search.
pub fn folner_certificate_check(
    cert: &FolnerCertificate,
    c: &TruncatedSubgroup,
    q_reps: &[Portrait],
    n: u64,
) -> Result<bool> {
    let group = c.group();
    if n == 0 {
        return Err(Error::MalformedCertificate("n must be positive".into()));
    }
    if cert.level > group.depth() || cert.q_level > group.depth() {
        return Err(Error::MalformedCertificate("level beyond truncation depth".into()));
    }
    if cert.reps.is_empty() {
        return Err(Error::MalformedCertificate("empty representative list".into()));
    }
    let u = CosetUnion::from_reps(c, cert.level, &cert.reps)
        .map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    if u.len() != cert.reps.len() {
        return Err(Error::MalformedCertificate("representatives share a coset".into()));
    }
    let q = test_set(c, q_reps, cert.q_level).map_err(|e| Error::MalformedCertificate(e.to_string()))?;
    let u_elems: BTreeSet<Portrait> = u.expand(c).into_iter().collect();
    let bound = Rational::new(1.into(), n.into());
    for g in &q {
        let moved: BTreeSet<Portrait> = u_elems.iter().map(|x| group.mul(g, x)).collect();
        let diff: Vec<Portrait> = moved.symmetric_difference(&u_elems).cloned().collect();
        if diff.is_empty() {
            continue;
        }
        let d = coset_decomposition(c, &diff, cert.level)?;
        if haar_ratio(c, &d, &u)? > bound {
            return Ok(false);
        }
    }
    Ok(true)
}
