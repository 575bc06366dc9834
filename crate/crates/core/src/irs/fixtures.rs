//! Finite truncations of two classical invariant random subgroups.

use super::IrsDistribution;
use crate::group::fixtures::{elementary_abelian, lamplighter as lamplighter_group};
use crate::subgroup::Subgroup;
use crate::Rational;

/// On `(ℤ/2)^N`: the coordinate copy `⟨x_n⟩` with weight proportional to `1/n²`.
pub fn direct_sum(n: usize) -> IrsDistribution {
    let g = elementary_abelian(n);
    let raw: Vec<Rational> = (1..=n).map(|k| Rational::new(1.into(), (k * k).into())).collect();
    let total: Rational = raw.iter().sum();
    let atoms = (1..=n)
        .zip(raw)
        .map(|(k, w)| {
            let x = g.parse_element(&format!("x{k}")).unwrap();
            (Subgroup::generated_by(&g, &[x]).unwrap(), w / &total)
        })
        .collect();
    IrsDistribution::new(&g, atoms).expect("valid weights")
}

/// On `ℤ/2 ≀ ℤ/m`: uniform over the `m` lamp copies `⟨t^i a t^{-i}⟩`.
pub fn lamplighter(m: usize) -> IrsDistribution {
    let g = lamplighter_group(m);
    let copies = (0..m)
        .map(|i| {
            let t = "t ".repeat(i);
            let ti = "t^-1 ".repeat(i);
            let x = g.parse_element(&format!("{t}a {ti}")).unwrap();
            Subgroup::generated_by(&g, &[x]).unwrap()
        })
        .collect();
    IrsDistribution::uniform(&g, copies).expect("distinct copies")
}
