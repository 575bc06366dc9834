use std::fmt;

use crate::error::{Error, Result};

/// Largest supported arity; labels are stored as `u8` indices into `Sym(d)`.
pub const MAX_ARITY: usize = 5;

/// An automorphism of the depth-`D` rooted `d`-ary tree, given by its portrait: one label
/// in `Sym(d)` per internal vertex, listed level by level. Labels index the permutations of
/// `Sym(d)` in lexicographic order, so the identity is the all-zero portrait and the derived
/// ordering is portrait-lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Portrait(Vec<u8>);

impl Portrait {
    pub fn labels(&self) -> &[u8] {
        &self.0
    }
}

/// The full automorphism group of the rooted `d`-ary tree truncated at depth `D`, i.e. the
/// iterated permutational wreath product `Sym(d) ≀ … ≀ Sym(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTreeGroup {
    arity: usize,
    depth: usize,
    sym: Vec<Vec<u8>>,
    sym_mul: Vec<u8>,
    sym_inv: Vec<u8>,
    offsets: Vec<usize>,
}

impl RootedTreeGroup {
    pub fn new(arity: usize, depth: usize) -> Result<Self> {
        if !(2..=MAX_ARITY).contains(&arity) || depth == 0 {
            return Err(Error::InvalidGroup(format!(
                "tree group needs 2 <= arity <= {MAX_ARITY} and depth >= 1"
            )));
        }
        let sym = permutations(arity);
        let idx = |p: &[u8]| sym.iter().position(|q| q == p).expect("closed under composition");
        let m = sym.len();
        let mut sym_mul = vec![0u8; m * m];
        let mut sym_inv = vec![0u8; m];
        for (a, pa) in sym.iter().enumerate() {
            for (b, pb) in sym.iter().enumerate() {
                let c: Vec<u8> = pb.iter().map(|&x| pa[x as usize]).collect();
                sym_mul[a * m + b] = idx(&c) as u8;
            }
            let mut inv = vec![0u8; arity];
            for (i, &x) in pa.iter().enumerate() {
                inv[x as usize] = i as u8;
            }
            sym_inv[a] = idx(&inv) as u8;
        }
        let mut offsets = vec![0usize];
        let mut width = 1usize;
        for _ in 0..depth {
            offsets.push(offsets.last().unwrap() + width);
            width = width.checked_mul(arity).ok_or_else(|| {
                Error::InvalidGroup("tree too large".into())
            })?;
        }
        Ok(RootedTreeGroup {
            arity,
            depth,
            sym,
            sym_mul,
            sym_inv,
            offsets,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of internal vertices, `(d^D - 1)/(d - 1)`.
    pub fn internal_vertices(&self) -> usize {
        self.offsets[self.depth]
    }

    /// Number of labels stored above level `i`, i.e. the length of the portrait prefix that
    /// determines the left coset of the level stabilizer `V_i`.
    pub fn prefix_len(&self, level: usize) -> usize {
        self.offsets[level.min(self.depth)]
    }

    /// `|Sym(d)|^{(d^D-1)/(d-1)}`, or `None` on overflow.
    pub fn order(&self) -> Option<u128> {
        (self.sym.len() as u128).checked_pow(self.internal_vertices() as u32)
    }

    /// `|Sym(d)|`.
    pub fn sym_order(&self) -> usize {
        self.sym.len()
    }

    /// Index of a permutation of `0..d` among the labels.
    pub fn label_of(&self, perm: &[u8]) -> Option<u8> {
        self.sym.iter().position(|q| q == perm).map(|i| i as u8)
    }

    /// The element with label `label` at internal vertex `vertex` (level order) and identity
    /// labels elsewhere.
    pub fn vertex_element(&self, vertex: usize, label: u8) -> Portrait {
        let mut labels = vec![0u8; self.internal_vertices()];
        labels[vertex] = label;
        Portrait(labels)
    }

    /// A generating set of the full group: a transposition and a `d`-cycle at every
    /// internal vertex.
    pub fn standard_generators(&self) -> Vec<Portrait> {
        let d = self.arity as u8;
        let swap: Vec<u8> = [1, 0].into_iter().chain(2..d).collect();
        let cycle: Vec<u8> = (0..d).map(|x| (x + 1) % d).collect();
        let labels = [self.label_of(&swap).unwrap(), self.label_of(&cycle).unwrap()];
        let mut out = Vec::new();
        for v in 0..self.internal_vertices() {
            for &l in &labels {
                let g = self.vertex_element(v, l);
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out
    }

    pub fn level_width(&self, level: usize) -> usize {
        self.arity.pow(level as u32)
    }

    pub fn identity(&self) -> Portrait {
        Portrait(vec![0; self.internal_vertices()])
    }

    pub fn from_labels(&self, labels: Vec<u8>) -> Result<Portrait> {
        if labels.len() != self.internal_vertices()
            || labels.iter().any(|&l| l as usize >= self.sym.len())
        {
            return Err(Error::InvalidGroup("portrait does not match the tree".into()));
        }
        Ok(Portrait(labels))
    }

    /// Positions of the images of all vertices, level by level (`images[l][p]`).
    fn vertex_images(&self, g: &Portrait) -> Vec<Vec<usize>> {
        let mut images = vec![vec![0usize]];
        for level in 0..self.depth {
            let prev = &images[level];
            let mut next = vec![0usize; prev.len() * self.arity];
            for (p, &img) in prev.iter().enumerate() {
                let sigma = &self.sym[g.0[self.offsets[level] + p] as usize];
                for c in 0..self.arity {
                    next[p * self.arity + c] = img * self.arity + sigma[c] as usize;
                }
            }
            images.push(next);
        }
        images
    }

    /// Image of the vertex at `(level, position)`.
    pub fn act(&self, g: &Portrait, level: usize, position: usize) -> usize {
        let mut digits = Vec::with_capacity(level);
        let mut p = position;
        for _ in 0..level {
            digits.push(p % self.arity);
            p /= self.arity;
        }
        let mut image = 0usize;
        let mut source = 0usize;
        for (l, &digit) in digits.iter().rev().enumerate() {
            let sigma = &self.sym[g.0[self.offsets[l] + source] as usize];
            image = image * self.arity + sigma[digit] as usize;
            source = source * self.arity + digit;
        }
        image
    }

    /// `g ∘ h` (apply `h` first).
    pub fn mul(&self, g: &Portrait, h: &Portrait) -> Portrait {
        let m = self.sym.len();
        let h_images = self.vertex_images(h);
        let mut out = vec![0u8; self.internal_vertices()];
        for level in 0..self.depth {
            let off = self.offsets[level];
            for (p, &hp) in h_images[level].iter().enumerate() {
                let gl = g.0[off + hp] as usize;
                let hl = h.0[off + p] as usize;
                out[off + p] = self.sym_mul[gl * m + hl];
            }
        }
        Portrait(out)
    }

    pub fn inverse(&self, g: &Portrait) -> Portrait {
        let images = self.vertex_images(g);
        let mut out = vec![0u8; self.internal_vertices()];
        for level in 0..self.depth {
            let off = self.offsets[level];
            for (p, &gp) in images[level].iter().enumerate() {
                out[off + gp] = self.sym_inv[g.0[off + p] as usize];
            }
        }
        Portrait(out)
    }

    /// Whether `g` acts trivially on all levels `<= level`, i.e. `g ∈ V_level`.
    pub fn in_level_stabilizer(&self, g: &Portrait, level: usize) -> bool {
        g.0[..self.prefix_len(level)].iter().all(|&l| l == 0)
    }

    /// All elements in portrait-lexicographic order, if there are at most `limit`.
    pub fn elements(&self, limit: usize) -> Result<Vec<Portrait>> {
        let order = self.order().filter(|&o| o <= limit as u128).ok_or(Error::GroupTooLarge {
            order: self.order().map_or(usize::MAX, |o| o.min(usize::MAX as u128) as usize),
            limit,
        })?;
        let m = self.sym.len() as u8;
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0u8; self.internal_vertices()];
        loop {
            out.push(Portrait(cur.clone()));
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < m {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Level-order list of permutation words: `10 | 01 10` for a depth-2 binary portrait.
    pub fn format(&self, g: &Portrait) -> String {
        let mut levels = Vec::with_capacity(self.depth);
        for level in 0..self.depth {
            let labels: Vec<String> = g.0[self.offsets[level]..self.offsets[level + 1]]
                .iter()
                .map(|&l| {
                    self.sym[l as usize]
                        .iter()
                        .map(|&x| char::from_digit(x as u32, 10).unwrap())
                        .collect()
                })
                .collect();
            levels.push(labels.join(" "));
        }
        levels.join(" | ")
    }

    pub fn parse(&self, s: &str) -> Result<Portrait> {
        let bad = |msg: &str| Error::InvalidGroup(format!("bad portrait `{s}`: {msg}"));
        let levels: Vec<&str> = s.split('|').map(str::trim).collect();
        if levels.len() != self.depth {
            return Err(bad("wrong number of levels"));
        }
        let mut labels = Vec::with_capacity(self.internal_vertices());
        for (level, text) in levels.iter().enumerate() {
            let words: Vec<&str> = text.split_whitespace().collect();
            if words.len() != self.level_width(level) {
                return Err(bad("wrong number of labels on a level"));
            }
            for w in words {
                let perm: Vec<u8> = w
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as u8))
                    .collect::<Option<_>>()
                    .ok_or_else(|| bad("non-digit label"))?;
                let idx = self
                    .sym
                    .iter()
                    .position(|q| *q == perm)
                    .ok_or_else(|| bad("label is not a permutation"))?;
                labels.push(idx as u8);
            }
        }
        Ok(Portrait(labels))
    }
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}
