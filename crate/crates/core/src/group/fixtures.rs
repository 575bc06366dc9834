//! Small named groups used by tests, examples and the command line.

use std::sync::Arc;

use super::{FiniteGroup, MarkedGroup, Permutation};
use crate::error::Result;

fn permutation_group(degree: usize, gens: &[&str], labels: Option<Vec<String>>) -> Result<MarkedGroup> {
    let gens: Vec<Permutation> = gens
        .iter()
        .map(|s| Permutation::parse_cycles(s, degree))
        .collect::<Result<_>>()?;
    let (group, _, idx) = FiniteGroup::generate(
        Permutation::identity(degree),
        &gens,
        |a, b| a.compose(b),
        |p| p.to_string(),
        usize::MAX,
    )?;
    MarkedGroup::from_finite(Arc::new(group), idx, labels)
}

/// `Sym(n)` marked by `(12)` and `(12…n)`.
pub fn symmetric(n: usize) -> MarkedGroup {
    match n {
        0 | 1 => trivial(),
        2 => permutation_group(2, &["(12)"], None).unwrap(),
        _ => {
            let cycle = if n <= 9 {
                format!("({})", (1..=n).map(|i| i.to_string()).collect::<String>())
            } else {
                format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            };
            permutation_group(n, &["(12)", &cycle], None).unwrap()
        }
    }
}

/// `Alt(4)` marked by `(123)` and `(12)(34)`.
pub fn alternating4() -> MarkedGroup {
    permutation_group(4, &["(123)", "(12)(34)"], None).unwrap()
}

/// The dihedral group of order `2n` acting on an `n`-gon, marked by a rotation `r` and a
/// reflection `s`.
pub fn dihedral(n: usize) -> MarkedGroup {
    assert!(n >= 3 && n <= 9, "dihedral fixture supports 3 <= n <= 9");
    let rot = format!("({})", (1..=n).map(|i| i.to_string()).collect::<String>());
    let mut refl = String::new();
    for i in 2..=n {
        let j = n + 2 - i;
        if i < j {
            refl.push_str(&format!("({i}{j})"));
        }
    }
    permutation_group(n, &[&rot, &refl], Some(vec!["r".into(), "s".into()])).unwrap()
}

/// `ℤ/n`, elements named `0 … n−1`, marked by `1`.
pub fn cyclic(n: usize) -> MarkedGroup {
    assert!(n >= 1);
    let (group, _, idx) = FiniteGroup::generate(0usize, &[1 % n], |a, b| (a + b) % n, |a| a.to_string(), usize::MAX)
        .expect("cyclic group fits");
    MarkedGroup::from_finite(Arc::new(group), idx, Some(vec!["t".into()])).unwrap()
}

/// `(ℤ/2)^n` with elements named by bit strings, marked by the unit vectors `x1 … xn`.
pub fn elementary_abelian(n: usize) -> MarkedGroup {
    assert!((1..=12).contains(&n));
    let gens: Vec<u32> = (0..n).map(|i| 1 << i).collect();
    let (group, _, idx) = FiniteGroup::generate(
        0u32,
        &gens,
        |a, b| a ^ b,
        |a| (0..n).map(|i| if a >> i & 1 == 1 { '1' } else { '0' }).collect(),
        usize::MAX,
    )
    .expect("elementary abelian group fits");
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    MarkedGroup::from_finite(Arc::new(group), idx, Some(labels)).unwrap()
}

pub fn klein_four() -> MarkedGroup {
    elementary_abelian(2)
}

/// The lamplighter quotient `ℤ/2 ≀ ℤ/m`: pairs `(lamps, position)`, marked by the toggle `a`
/// at position 0 and the shift `t`.
pub fn lamplighter(m: usize) -> MarkedGroup {
    assert!((1..=8).contains(&m));
    let rot = move |v: u32, s: usize| -> u32 {
        let mask = (1u32 << m) - 1;
        ((v << s) | (v >> ((m - s) % m))) & mask
    };
    let mul = move |x: &(u32, usize), y: &(u32, usize)| (x.0 ^ rot(y.0, x.1), (x.1 + y.1) % m);
    let name = move |x: &(u32, usize)| {
        let lamps: String = (0..m).map(|i| if x.0 >> i & 1 == 1 { '1' } else { '0' }).collect();
        format!("{lamps}@{}", x.1)
    };
    let (group, _, idx) = FiniteGroup::generate((0u32, 0usize), &[(1, 0), (0, 1 % m)], mul, name, usize::MAX)
        .expect("lamplighter fits");
    MarkedGroup::from_finite(Arc::new(group), idx, Some(vec!["a".into(), "t".into()])).unwrap()
}

pub fn trivial() -> MarkedGroup {
    let group = FiniteGroup::from_table(1, vec![0], None).unwrap();
    MarkedGroup::from_finite(Arc::new(group), vec![0], Some(vec!["e1".into()])).unwrap()
}

/// The infinite cyclic group `ℤ = F₁`, marked by `t`.
pub fn integers() -> MarkedGroup {
    MarkedGroup::free_with_labels(vec!["t".into()]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(symmetric(3).order(), Some(6));
        assert_eq!(symmetric(4).order(), Some(24));
        assert_eq!(symmetric(5).order(), Some(120));
        assert_eq!(alternating4().order(), Some(12));
        assert_eq!(dihedral(4).order(), Some(8));
        assert_eq!(cyclic(7).order(), Some(7));
        assert_eq!(elementary_abelian(3).order(), Some(8));
        assert_eq!(lamplighter(3).order(), Some(24));
        assert_eq!(trivial().order(), Some(1));
    }

    #[test]
    fn abelian_flags() {
        assert!(!symmetric(3).finite().unwrap().is_abelian());
        assert!(!dihedral(4).finite().unwrap().is_abelian());
        assert!(klein_four().finite().unwrap().is_abelian());
        assert!(!lamplighter(3).finite().unwrap().is_abelian());
    }
}
