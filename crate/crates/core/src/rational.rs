//! Exact rational helpers shared by the probability, Haar and polytope code.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `p/q` or an integer `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub(crate) fn parse_rational_at(s: &str, line: usize) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::parse(line, format!("bad rational `{s}`")))
}

/// Always `p/q`, including integers (`3/1`), so that serialized values are uniform.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[Rational]) -> Rational {
    dot(a, a)
}

pub fn is_probability_vector<'a>(weights: impl IntoIterator<Item = &'a Rational>) -> bool {
    let mut total = Rational::zero();
    for w in weights {
        if !w.is_positive() {
            return false;
        }
        total += w;
    }
    total.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("9/49"), Some(ratio(9, 49)));
        assert_eq!(parse_rational(" -2 "), Some(int(-2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&ratio(4, 2)), "2/1");
        assert_eq!(format_rational(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn probability_vectors() {
        assert!(is_probability_vector(&[ratio(1, 3), ratio(2, 3)]));
        assert!(!is_probability_vector(&[ratio(1, 3), ratio(1, 3)]));
        assert!(!is_probability_vector(&[int(0), int(1)]));
    }
}
