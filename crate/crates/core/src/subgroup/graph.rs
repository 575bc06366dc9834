//! Based labelled graphs over the letters of a free group: Stallings folding, core graphs
//! and complete coset tables share this type.

use std::collections::{HashMap, VecDeque};

use crate::group::{free_reduce, invert_word, Letter, Word};

const NONE: u32 = u32::MAX;

/// A folded graph with base vertex `0`. `edge(v, l)` is the endpoint of the `l`-edge out of
/// `v`; the `l⁻¹` column is always the inverse partial permutation of the `l` column.
/// Values built through the public constructors are canonical: vertices are numbered in
/// breadth-first order from the base, exploring letters in letter order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FoldedGraph {
    letters: usize,
    edges: Vec<u32>,
}

impl FoldedGraph {
    /// The one-vertex graph of the trivial subgroup.
    pub fn trivial(letters: usize) -> Self {
        FoldedGraph {
            letters,
            edges: vec![NONE; letters],
        }
    }

    /// Core graph of the subgroup generated by `words`.
    pub fn from_words(letters: usize, words: &[Word]) -> Self {
        let mut f = Folder::new(letters, 1);
        for w in words {
            f.add_loop(0, &free_reduce(w));
        }
        f.finish(0, true)
    }

    /// Builds from a complete or partial table of `n * letters` targets (`None` = undefined),
    /// folding and canonicalizing. Returns `None` if a column is inconsistent with its
    /// inverse column.
    pub fn from_table(letters: usize, table: &[Option<usize>], prune: bool) -> Option<Self> {
        let n = table.len() / letters;
        for v in 0..n {
            for l in 0..letters {
                if let Some(t) = table[v * letters + l] {
                    if t >= n || table[t * letters + (l ^ 1)] != Some(v) {
                        return None;
                    }
                }
            }
        }
        let mut f = Folder::new(letters, n.max(1));
        for v in 0..n {
            for l in (0..letters).step_by(2) {
                if let Some(t) = table[v * letters + l] {
                    f.add_edge(v as u32, l, t as u32);
                }
            }
        }
        f.settle();
        Some(f.finish(0, prune))
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len() / self.letters
    }

    pub fn edge(&self, v: usize, l: Letter) -> Option<usize> {
        match self.edges[v * self.letters + l.index()] {
            NONE => None,
            t => Some(t as usize),
        }
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| (0..self.letters).step_by(2).filter(|&l| self.edges[v * self.letters + l] != NONE).count())
            .sum()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.iter().all(|&t| t != NONE)
    }

    /// Rank of the fundamental group, `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Endpoint of the path labelled `word` starting at `from`, if it exists.
    pub fn trace_from(&self, from: usize, word: &[Letter]) -> Option<usize> {
        word.iter().try_fold(from, |v, &l| self.edge(v, l))
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.trace_from(0, word) == Some(0)
    }

    /// Rows of the table, `None` for missing edges.
    pub fn rows(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.vertex_count())
            .map(|v| {
                (0..self.letters)
                    .map(|l| self.edge(v, Letter::from_index(l)))
                    .collect()
            })
            .collect()
    }

    /// Shortlex geodesic from the base to every vertex (a breadth-first spanning tree).
    pub fn tree_paths(&self) -> Vec<Word> {
        let mut paths: Vec<Option<Word>> = vec![None; self.vertex_count()];
        paths[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for l in 0..self.letters {
                let l = Letter::from_index(l);
                if let Some(t) = self.edge(v, l) {
                    if paths[t].is_none() {
                        let mut p = paths[v].clone().unwrap();
                        p.push(l);
                        paths[t] = Some(p);
                        queue.push_back(t);
                    }
                }
            }
        }
        paths.into_iter().map(|p| p.unwrap_or_default()).collect()
    }

    /// A free basis: one generator per edge outside the breadth-first spanning tree.
    pub fn free_basis(&self) -> Vec<Word> {
        let paths = self.tree_paths();
        let mut basis = Vec::new();
        for v in 0..self.vertex_count() {
            for l in (0..self.letters).step_by(2) {
                let l = Letter::from_index(l);
                if let Some(t) = self.edge(v, l) {
                    let mut through = paths[v].clone();
                    through.push(l);
                    if through == paths[t] {
                        continue;
                    }
                    let back = paths[t].clone();
                    // the tree edge into `t` could also be this edge read backwards
                    let mut rev = paths[t].clone();
                    rev.push(l.inverse());
                    if rev == paths[v] {
                        continue;
                    }
                    through.extend(invert_word(&back));
                    basis.push(free_reduce(&through));
                }
            }
        }
        basis
    }

    /// Graph of `g H g⁻¹` where `H` is the subgroup of `self`.
    pub fn conjugate(&self, g: &[Letter]) -> Self {
        let g = free_reduce(g);
        if g.is_empty() {
            return self.clone();
        }
        let n = self.vertex_count();
        let mut f = Folder::from_graph(self, 1 + g.len());
        // a path labelled g from the new base to the old base 0
        let new_base = n as u32;
        let mut cur = new_base;
        for (i, &l) in g.iter().enumerate() {
            let next = if i + 1 == g.len() { 0 } else { (n + 1 + i) as u32 };
            f.add_edge_letter(cur, l, next);
            cur = next;
        }
        f.settle();
        let base = f.find(new_base);
        f.finish(base, true)
    }

    /// Graph of the subgroup generated by `self` and `other`.
    pub fn join(&self, other: &FoldedGraph) -> Self {
        let n = self.vertex_count();
        let mut f = Folder::from_graph(self, other.vertex_count());
        for v in 0..other.vertex_count() {
            for l in (0..self.letters).step_by(2) {
                if let Some(t) = other.edge(v, Letter::from_index(l)) {
                    let map = |x: usize| if x == 0 { 0 } else { (n + x - 1) as u32 };
                    f.add_edge(map(v), l, map(t));
                }
            }
        }
        f.settle();
        f.finish(0, true)
    }

    /// Fiber product at the pair of base points; `None` if it exceeds `limit` vertices.
    pub fn intersect(&self, other: &FoldedGraph, limit: usize) -> Option<Self> {
        let mut index: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
        let mut pairs = vec![(0usize, 0usize)];
        let mut table: Vec<Option<usize>> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for l in 0..self.letters {
                let l = Letter::from_index(l);
                let t = match (self.edge(a, l), other.edge(b, l)) {
                    (Some(x), Some(y)) => {
                        let next = index.len();
                        let id = *index.entry((x, y)).or_insert(next);
                        if id == next {
                            if next >= limit {
                                return None;
                            }
                            pairs.push((x, y));
                        }
                        Some(id)
                    }
                    _ => None,
                };
                table.push(t);
            }
            i += 1;
        }
        FoldedGraph::from_table(self.letters, &table, true)
    }

    /// Graphviz rendering with letter labels.
    pub fn to_dot(&self, name: &str, label: impl Fn(Letter) -> String) -> String {
        let mut out = format!("digraph {name} {{\n  node [shape=circle];\n  0 [shape=doublecircle];\n");
        for v in 0..self.vertex_count() {
            for l in (0..self.letters).step_by(2) {
                let l = Letter::from_index(l);
                if let Some(t) = self.edge(v, l) {
                    out.push_str(&format!("  {v} -> {t} [label=\"{}\"];\n", label(l)));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Incremental Stallings folding with union-find.
struct Folder {
    letters: usize,
    parent: Vec<u32>,
    edges: Vec<u32>,
    pending: Vec<(u32, u32)>,
}

impl Folder {
    fn new(letters: usize, vertices: usize) -> Self {
        Folder {
            letters,
            parent: (0..vertices as u32).collect(),
            edges: vec![NONE; vertices * letters],
            pending: Vec::new(),
        }
    }

    fn from_graph(g: &FoldedGraph, extra: usize) -> Self {
        let n = g.vertex_count();
        let mut f = Folder::new(g.letters, n + extra);
        f.edges[..g.edges.len()].copy_from_slice(&g.edges);
        f
    }

    fn new_vertex(&mut self) -> u32 {
        let v = self.parent.len() as u32;
        self.parent.push(v);
        self.edges.extend(std::iter::repeat(NONE).take(self.letters));
        v
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let p = self.parent[v as usize];
            self.parent[v as usize] = self.parent[p as usize];
            v = p;
        }
        v
    }

    fn slot(&self, v: u32, l: usize) -> usize {
        v as usize * self.letters + l
    }

    /// Adds `u --l--> v` (and the reverse), queueing identifications instead of creating
    /// a second edge with the same label.
    fn add_edge(&mut self, u: u32, l: usize, v: u32) {
        let u = self.find(u);
        let v = self.find(v);
        let s = self.slot(u, l);
        let r = self.slot(v, l ^ 1);
        let fwd = match self.edges[s] {
            NONE => NONE,
            w => self.find(w),
        };
        let back = match self.edges[r] {
            NONE => NONE,
            x => self.find(x),
        };
        if fwd == NONE {
            self.edges[s] = v;
        } else if fwd != v {
            self.pending.push((fwd, v));
        }
        if back == NONE {
            self.edges[r] = u;
        } else if back != u {
            self.pending.push((back, u));
        }
    }

    fn add_edge_letter(&mut self, u: u32, l: Letter, v: u32) {
        while self.parent.len() <= u.max(v) as usize {
            self.new_vertex();
        }
        self.add_edge(u, l.index(), v);
    }

    fn add_loop(&mut self, base: u32, word: &[Letter]) {
        if word.is_empty() {
            return;
        }
        let mut cur = base;
        for (i, &l) in word.iter().enumerate() {
            let next = if i + 1 == word.len() { base } else { self.new_vertex() };
            self.add_edge(cur, l.index(), next);
            cur = next;
        }
        self.settle();
    }

    fn settle(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = (a.min(b), a.max(b));
            self.parent[gone as usize] = keep;
            for l in 0..self.letters {
                let s = self.slot(gone, l);
                let t = self.edges[s];
                if t != NONE {
                    self.edges[s] = NONE;
                    self.add_edge(keep, l, t);
                }
            }
        }
    }

    /// Compacts to representatives, optionally prunes hanging trees away from `base`, and
    /// renumbers canonically from `base`.
    fn finish(mut self, base: u32, prune: bool) -> FoldedGraph {
        self.settle();
        let n = self.parent.len();
        let letters = self.letters;
        let base = self.find(base) as usize;
        let mut out: Vec<Vec<u32>> = vec![vec![NONE; letters]; n];
        let mut alive = vec![false; n];
        for v in 0..n {
            let rv = self.find(v as u32) as usize;
            alive[rv] = true;
            for l in 0..letters {
                let t = self.edges[v * letters + l];
                if t != NONE {
                    out[rv][l] = self.find(t);
                }
            }
        }
        if prune {
            let degree = |out: &Vec<Vec<u32>>, v: usize| out[v].iter().filter(|&&t| t != NONE).count();
            let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && v != base && degree(&out, v) <= 1).collect();
            while let Some(v) = stack.pop() {
                if !alive[v] || v == base || degree(&out, v) > 1 {
                    continue;
                }
                alive[v] = false;
                for l in 0..letters {
                    let t = out[v][l];
                    if t != NONE {
                        out[v][l] = NONE;
                        out[t as usize][l ^ 1] = NONE;
                        if t as usize != base && degree(&out, t as usize) <= 1 {
                            stack.push(t as usize);
                        }
                    }
                }
            }
        }
        let mut number = vec![NONE; n];
        let mut order = vec![base];
        number[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for l in 0..letters {
                let t = out[v][l];
                if t != NONE && number[t as usize] == NONE {
                    number[t as usize] = order.len() as u32;
                    order.push(t as usize);
                }
            }
            i += 1;
        }
        let mut edges = Vec::with_capacity(order.len() * letters);
        for &v in &order {
            for l in 0..letters {
                let t = out[v][l];
                edges.push(if t == NONE { NONE } else { number[t as usize] });
            }
        }
        FoldedGraph { letters, edges }
    }
}
