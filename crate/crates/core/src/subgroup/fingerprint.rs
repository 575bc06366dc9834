use std::fmt;

use num::{BigInt, One, Zero};

use super::Subgroup;
use crate::error::{Error, Result};
use crate::group::{MarkedGroup, DEFAULT_BALL_CAP};
use crate::rational::Rational;

/// Membership bits of a subgroup over the ball of radius `R`, in the canonical element
/// order of [`MarkedGroup::ball`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallFingerprint {
    radius: usize,
    bits: Vec<bool>,
}

impl BallFingerprint {
    pub fn new(h: &Subgroup, radius: usize) -> Result<Self> {
        let ball = h.parent().ball_with_cap(radius, DEFAULT_BALL_CAP)?;
        let bits = ball.iter().map(|g| h.contains(g)).collect::<Result<_>>()?;
        Ok(BallFingerprint { radius, bits })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// `R` and the bits packed most-significant-bit first, as lowercase hex.
    pub fn to_text(&self) -> String {
        let mut hex = String::with_capacity(self.bits.len() / 4 + 2);
        for chunk in self.bits.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)));
            hex.push_str(&format!("{byte:02x}"));
        }
        format!("{} {}", self.radius, hex)
    }

    /// Inverse of [`to_text`](Self::to_text); the ball size comes from `parent`.
    pub fn parse(text: &str, parent: &MarkedGroup) -> Result<Self> {
        let mut parts = text.split_whitespace();
        let radius: usize = parts
            .next()
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::parse(1, "missing fingerprint radius"))?;
        let hex = parts.next().unwrap_or("");
        let len = parent.ball_with_cap(radius, DEFAULT_BALL_CAP)?.len();
        if hex.len() != len.div_ceil(8) * 2 {
            return Err(Error::parse(1, format!("expected {} hex digits", len.div_ceil(8) * 2)));
        }
        let mut bits = Vec::with_capacity(len);
        for i in 0..len.div_ceil(8) {
            let byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|_| Error::parse(1, "bad hex digit"))?;
            for j in 0..8 {
                if bits.len() < len {
                    bits.push(byte >> (7 - j) & 1 == 1);
                }
            }
        }
        Ok(BallFingerprint { radius, bits })
    }
}

impl fmt::Display for BallFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChabautyDistance {
    /// `2^{-r}` with `r` the largest radius at which the fingerprints agree, or `0`.
    pub distance: Rational,
    /// Largest radius `≤ R_max` with equal fingerprints.
    pub agreement_radius: usize,
    /// Fingerprints agree at every radius up to `R_max`.
    pub indistinguishable: bool,
}

/// Discrete Chabauty distance truncated at `r_max`.
pub fn chabauty_distance(h1: &Subgroup, h2: &Subgroup, r_max: usize) -> Result<ChabautyDistance> {
    if h1.parent() != h2.parent() {
        return Err(Error::FamilyMismatch);
    }
    if r_max == 0 {
        return Err(Error::InvalidSubgroup("R_max must be at least 1".into()));
    }
    let ball = h1.parent().ball_with_lengths(r_max, DEFAULT_BALL_CAP)?;
    let mut first_diff: Option<usize> = None;
    for (g, len) in &ball {
        if first_diff.is_some_and(|d| *len >= d) {
            continue;
        }
        if h1.contains(g)? != h2.contains(g)? {
            first_diff = Some(*len);
        }
    }
    Ok(match first_diff {
        None => ChabautyDistance {
            distance: Rational::zero(),
            agreement_radius: r_max,
            indistinguishable: true,
        },
        Some(d) => ChabautyDistance {
            distance: Rational::new(BigInt::one(), BigInt::one() << (d - 1)),
            agreement_radius: d - 1,
            indistinguishable: false,
        },
    })
}

impl Subgroup {
    pub fn fingerprint(&self, radius: usize) -> Result<BallFingerprint> {
        BallFingerprint::new(self, radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fixtures::integers;
    use crate::group::{GroupElement, HomImages};
    use crate::group::fixtures::cyclic;
    use crate::rational::ratio;

    fn z_sub(n: usize) -> Subgroup {
        let z = integers();
        let g = z.parse_element(&vec!["t"; n].join(" ")).unwrap();
        Subgroup::generated_by(&z, &[g]).unwrap()
    }

    fn int_of(g: &GroupElement) -> i64 {
        let w = g.as_word().unwrap();
        w.iter().map(|l| if l.is_inverse() { -1 } else { 1 }).sum()
    }

    #[test]
    fn even_integers_fingerprint() {
        let h = z_sub(2);
        let fp = h.fingerprint(3).unwrap();
        let ball = h.parent().ball(3).unwrap();
        let mut by_int: Vec<(i64, bool)> = ball.iter().map(int_of).zip(fp.bits().iter().copied()).collect();
        by_int.sort();
        let bits: Vec<u8> = by_int.iter().map(|&(_, b)| b as u8).collect();
        assert_eq!(bits, [0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn trivial_fingerprint() {
        let z = integers();
        let t = Subgroup::trivial(&z).unwrap();
        let fp = t.fingerprint(4).unwrap();
        assert_eq!(fp.count(), 1);
        assert!(fp.bits()[0]);
    }

    #[test]
    fn kernel_fingerprint_matches_hom() {
        let f2 = MarkedGroup::free(2).unwrap();
        let z2 = cyclic(2).finite_arc().unwrap();
        let hom = HomImages::from_generators(z2, &[1, 1]);
        let k = Subgroup::kernel(&f2, &hom).unwrap();
        let fp = k.fingerprint(2).unwrap();
        let ball = f2.ball(2).unwrap();
        assert_eq!(ball.len(), 17);
        let mut marked: Vec<String> = ball
            .iter()
            .zip(fp.bits())
            .filter(|(_, &b)| b)
            .map(|(g, _)| f2.element_name(g))
            .collect();
        marked.sort();
        let mut expected = vec![
            "e", "ab", "ab^-1", "a^-1b", "a^-1b^-1", "ba", "ba^-1", "b^-1a", "b^-1a^-1", "aa", "a^-1a^-1", "bb",
            "b^-1b^-1",
        ];
        expected.sort();
        assert_eq!(marked, expected);
        for (g, &b) in ball.iter().zip(fp.bits()) {
            assert_eq!(f2.evaluate_hom(&hom, g).unwrap() == 0, b);
        }
    }

    #[test]
    fn distance_examples() {
        let d = chabauty_distance(&z_sub(2), &z_sub(3), 5).unwrap();
        assert_eq!(d.distance, ratio(1, 2));
        let same = chabauty_distance(&z_sub(2), &z_sub(2), 5).unwrap();
        assert!(same.indistinguishable);
        assert_eq!(same.distance, ratio(0, 1));
        let trivial = Subgroup::trivial(&integers()).unwrap();
        let d = chabauty_distance(&z_sub(6), &trivial, 10).unwrap();
        assert_eq!(d.distance, ratio(1, 32));
    }

    #[test]
    fn text_roundtrip() {
        let h = z_sub(3);
        let fp = h.fingerprint(5).unwrap();
        let text = fp.to_text();
        assert_eq!(BallFingerprint::parse(&text, h.parent()).unwrap(), fp);
    }
}
