use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Letter, MarkedGroup};
use crate::subgroup::{Representation, Subgroup};

/// A finite Schreier graph: one permutation of the vertices per letter of `S`, base
/// vertex `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGraph {
    n: usize,
    /// `perms[l][v]` is the endpoint of the `l`-edge out of `v`.
    perms: Vec<Vec<u32>>,
}

impl SchreierGraph {
    /// Schreier graph of a finite-index subgroup of a free group, from its coset table.
    pub fn from_subgroup(h: &Subgroup) -> Result<Self> {
        let graph = match h.representation() {
            Representation::CosetTable(g) => g,
            _ => return Err(Error::IncompleteTable),
        };
        let letters = graph.letters();
        let n = graph.vertex_count();
        let perms = (0..letters)
            .map(|l| {
                (0..n)
                    .map(|v| graph.edge(v, Letter::from_index(l)).expect("complete") as u32)
                    .collect()
            })
            .collect();
        Ok(SchreierGraph { n, perms })
    }

    /// From the permutations of the generators; inverse letters get inverse permutations.
    pub fn from_generator_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let n = gens.first().map_or(0, |p| p.len());
        if gens.is_empty() || n == 0 {
            return Err(Error::InvalidGraph("need at least one generator and one vertex".into()));
        }
        let mut perms = Vec::with_capacity(2 * gens.len());
        for p in gens {
            let mut inv = vec![u32::MAX; n];
            if p.len() != n {
                return Err(Error::InvalidGraph("permutations of different sizes".into()));
            }
            for (v, &w) in p.iter().enumerate() {
                if w >= n || inv[w] != u32::MAX {
                    return Err(Error::InvalidGraph("not a permutation".into()));
                }
                inv[w] = v as u32;
            }
            perms.push(p.iter().map(|&w| w as u32).collect());
            perms.push(inv);
        }
        let g = SchreierGraph { n, perms };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Schreier graph of a uniformly random transitive action of `F_rank` on `n` points.
    pub fn random<R: Rng>(parent: &MarkedGroup, n: usize, rng: &mut R) -> Result<Self> {
        SchreierGraph::from_subgroup(&Subgroup::random_finite_index(parent, n, rng)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> usize {
        self.perms.len()
    }

    pub fn neighbor(&self, v: usize, l: usize) -> usize {
        self.perms[l][v] as usize
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for p in &self.perms {
                let w = p[v] as usize;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// `y = M x` with `M = (1/|S|) Σ_s P_s`, summed in letter order.
    pub fn apply_markov(&self, x: &[f64], y: &mut [f64]) {
        let scale = 1.0 / self.perms.len() as f64;
        for v in 0..self.n {
            let mut acc = 0.0;
            for p in &self.perms {
                acc += x[p[v] as usize];
            }
            y[v] = acc * scale;
        }
    }

    /// The same graph with vertex `v` renamed `relabel[v]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Self {
        let perms = self
            .perms
            .iter()
            .map(|p| {
                let mut q = vec![0u32; self.n];
                for v in 0..self.n {
                    q[relabel[v]] = relabel[p[v] as usize] as u32;
                }
                q
            })
            .collect();
        SchreierGraph { n: self.n, perms }
    }

    /// A uniformly random relabeling.
    pub fn shuffled<R: Rng>(&self, rng: &mut R) -> Self {
        let mut relabel: Vec<usize> = (0..self.n).collect();
        relabel.shuffle(rng);
        self.relabeled(&relabel)
    }

    /// DOT export; the `s` and `s⁻¹` edges are drawn as one edge labelled `s`.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut out = String::from("digraph schreier {\n  node [shape=circle];\n  0 [shape=doublecircle];\n");
        for (g, p) in self.perms.iter().step_by(2).enumerate() {
            let label = labels.get(g).cloned().unwrap_or_else(|| format!("s{g}"));
            for v in 0..self.n {
                out.push_str(&format!("  {v} -> {} [label=\"{label}\"];\n", p[v]));
            }
        }
        out.push_str("}\n");
        out
    }
}
