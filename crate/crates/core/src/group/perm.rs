use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as the image vector.
///
/// Products compose right to left: `(g * h)(x) = g(h(x))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidGroup(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based cycle notation such as `(12)(34)` or `(1,10)` on `n` points.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Self> {
        let bad = || Error::InvalidGroup(format!("bad cycle notation `{s}`"));
        let s = s.trim();
        if s == "e" || s == "()" {
            return Ok(Permutation::identity(n));
        }
        let mut rest = s;
        let mut cycles = Vec::new();
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let body = &open[..close];
            let points: Vec<usize> = if body.contains(',') {
                body.split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                    .collect::<Result<_>>()?
            };
            if points.iter().any(|&p| p == 0 || p > n) {
                return Err(bad());
            }
            cycles.push(points);
            rest = open[close + 1..].trim_start();
        }
        // "(12)(13)" is the product (12)∘(13).
        let mut perm = Permutation::identity(n);
        for cycle in &cycles {
            let mut images: Vec<u32> = (0..n as u32).collect();
            for (i, &p) in cycle.iter().enumerate() {
                images[p - 1] = (cycle[(i + 1) % cycle.len()] - 1) as u32;
            }
            perm = perm.compose(&Permutation::from_images(images)?);
        }
        Ok(perm)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Disjoint cycles (length ≥ 2), each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        let sep = if self.degree() > 9 { "," } else { "" };
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::parse_cycles("(123)", 3).unwrap();
        assert_eq!(p.to_string(), "(123)");
        assert_eq!(p.apply(0), 1);
        assert_eq!(Permutation::parse_cycles("e", 4).unwrap(), Permutation::identity(4));
        assert!(Permutation::parse_cycles("(14)", 3).is_err());
    }

    #[test]
    fn composition_is_right_to_left() {
        let t12 = Permutation::parse_cycles("(12)", 3).unwrap();
        let t13 = Permutation::parse_cycles("(13)", 3).unwrap();
        assert_eq!(t12.compose(&t13).to_string(), "(132)");
        let product = Permutation::parse_cycles("(12)(13)", 3).unwrap();
        assert_eq!(product.to_string(), "(132)");
    }
}
