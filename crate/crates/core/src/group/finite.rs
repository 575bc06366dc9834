use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest order for which a full multiplication table is stored.
pub const TABLE_LIMIT: usize = 5000;

/// A finite group stored as a full multiplication table. Element `0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table; checks the Latin-square property and that `0`
    /// is a two-sided identity. Associativity is checked by [`MarkedGroup`] against the
    /// marked generators.
    ///
    /// [`MarkedGroup`]: crate::group::MarkedGroup
    pub fn from_table(order: usize, table: Vec<u32>, names: Option<Vec<String>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        if order > TABLE_LIMIT {
            return Err(Error::GroupTooLarge {
                order,
                limit: TABLE_LIMIT,
            });
        }
        if table.len() != order * order {
            return Err(Error::InvalidGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        let mut inverses = vec![u32::MAX; order];
        for a in 0..order {
            let mut row_seen = vec![false; order];
            for b in 0..order {
                let p = table[a * order + b] as usize;
                if p >= order || row_seen[p] {
                    return Err(Error::InvalidGroup(format!("row {a} is not a permutation")));
                }
                row_seen[p] = true;
                if p == 0 {
                    inverses[a] = b as u32;
                }
            }
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        for b in 0..order {
            let mut col_seen = vec![false; order];
            for a in 0..order {
                let p = table[a * order + b] as usize;
                if col_seen[p] {
                    return Err(Error::InvalidGroup(format!("column {b} is not a permutation")));
                }
                col_seen[p] = true;
            }
        }
        let names = match names {
            Some(n) if n.len() == order => n,
            Some(_) => return Err(Error::InvalidGroup("wrong number of element names".into())),
            None => (0..order)
                .map(|i| if i == 0 { "e".to_string() } else { i.to_string() })
                .collect(),
        };
        Ok(FiniteGroup {
            order,
            table,
            inverses,
            names,
        })
    }

    /// Reads the `i,j,k` CSV format: one `row,col,product` triple per line, 0-based.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim().replace(' ', "") == "i,j,k" => {}
            Some((n, _)) => return Err(Error::parse(n + 1, "expected header `i,j,k`")),
            None => return Err(Error::parse(1, "empty table file")),
        }
        let mut triples = Vec::new();
        for (n, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::parse(n + 1, "expected three fields"));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(n + 1, format!("bad index `{s}`")))
            };
            triples.push((parse(fields[0])?, parse(fields[1])?, parse(fields[2])?));
        }
        let order = (triples.len() as f64).sqrt().round() as usize;
        if order * order != triples.len() {
            return Err(Error::InvalidGroup(format!(
                "{} triples do not form a square table",
                triples.len()
            )));
        }
        let mut table = vec![u32::MAX; order * order];
        for (i, j, k) in triples {
            if i >= order || j >= order || k >= order {
                return Err(Error::InvalidGroup(format!("index out of range in ({i},{j},{k})")));
            }
            if table[i * order + j] != u32::MAX {
                return Err(Error::InvalidGroup(format!("duplicate entry ({i},{j})")));
            }
            table[i * order + j] = k as u32;
        }
        FiniteGroup::from_table(order, table, None)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,k\n");
        for a in 0..self.order {
            for b in 0..self.order {
                out.push_str(&format!("{a},{b},{}\n", self.mul(a, b)));
            }
        }
        out
    }

    /// Closes `gens` under multiplication and tabulates the result.
    ///
    /// Returns the group, the concrete elements (indexed like the table) and the indices of
    /// the generators. Elements are numbered in breadth-first order from the identity.
    pub fn generate<T, M, N>(
        identity: T,
        gens: &[T],
        mul: M,
        name: N,
        limit: usize,
    ) -> Result<(FiniteGroup, Vec<T>, Vec<usize>)>
    where
        T: Clone + Eq + Hash,
        M: Fn(&T, &T) -> T,
        N: Fn(&T) -> String,
    {
        let limit = limit.min(TABLE_LIMIT);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        // parent[b] = (a, g) with b = a * gens[g]
        let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (g, gen) in gens.iter().enumerate() {
                let p = mul(&elements[i], gen);
                let j = match index.get(&p) {
                    Some(&j) => j,
                    None => {
                        let j = elements.len();
                        if j >= limit {
                            return Err(Error::GroupTooLarge {
                                order: j + 1,
                                limit,
                            });
                        }
                        index.insert(p.clone(), j);
                        elements.push(p);
                        parent.push((i, g));
                        j
                    }
                };
                row.push(j as u32);
            }
            right.push(row);
            i += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            table[a * n] = a as u32;
            for b in 1..n {
                let (pb, g) = parent[b];
                let prefix = table[a * n + pb] as usize;
                table[a * n + b] = right[prefix][g];
            }
        }
        let names: Vec<String> = elements.iter().map(&name).collect();
        let group = FiniteGroup::from_table(n, table, Some(names))?;
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok((group, elements, gen_idx))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Light's associativity test relative to a generating set.
    pub fn is_associative_on(&self, gens: &[usize]) -> bool {
        gens.iter().all(|&g| {
            (0..self.order).all(|x| {
                (0..self.order).all(|y| self.mul(self.mul(x, g), y) == self.mul(x, self.mul(g, y)))
            })
        })
    }

    /// The subgroup generated by `seeds`, as a sorted element list.
    pub fn closure(&self, seeds: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut out = vec![0usize];
        while let Some(x) = queue.pop_front() {
            for &s in seeds {
                let y = self.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures;

    #[test]
    fn csv_round_trip() {
        let g = fixtures::symmetric(3);
        let back = FiniteGroup::from_csv(&g.finite().unwrap().to_csv()).unwrap();
        assert_eq!(back.order(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(back.mul(a, b), g.finite().unwrap().mul(a, b));
            }
        }
    }

    #[test]
    fn csv_rejects_bad_input() {
        assert!(FiniteGroup::from_csv("a,b,c\n0,0,0\n").is_err());
        assert!(FiniteGroup::from_csv("i,j,k\n0,0,0\n0,1,1\n1,0,1\n1,1,1\n").is_err());
    }

    #[test]
    fn closure_and_inverses() {
        let g = fixtures::symmetric(3);
        let f = g.finite().unwrap();
        for a in 0..6 {
            assert_eq!(f.mul(a, f.inverse(a)), 0);
        }
        assert_eq!(f.closure(&[]), vec![0]);
        assert_eq!(f.closure(&[1]).len(), 2);
    }
}
