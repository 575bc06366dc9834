use irslab_core::group::fixtures::integers;
use irslab_core::group::MarkedGroup;
use irslab_core::subgroup::{chabauty_distance, Subgroup};
use irslab_core::Result;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Checks, Fixtures};

const MAX_RADIUS: usize = 24;

/// `(n, first radius at which n!ℤ and {0} differ)`, `None` when beyond [`MAX_RADIUS`].
fn parse_factorial(text: &str) -> std::result::Result<Vec<(usize, Option<usize>)>, String> {
    super::data_lines(text)
        .map(|(line, content)| {
            let bad = || format!("line {line}: expected `n radius` or `n none`");
            match content.split_whitespace().collect::<Vec<_>>()[..] {
                [n, "none"] => Ok((n.parse().map_err(|_| bad())?, None)),
                [n, r] => Ok((n.parse().map_err(|_| bad())?, Some(r.parse().map_err(|_| bad())?))),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn random_free_subgroup(f2: &MarkedGroup, rng: &mut ChaCha8Rng) -> Result<Subgroup> {
    if rng.gen_bool(0.2) {
        let w = f2.parse_word(["a b", "a^-1 b a", "b b", "a a a"][rng.gen_range(0..4)])?;
        Subgroup::generated_by(f2, &[f2.reduce_word(&w)?])
    } else {
        Subgroup::random_finite_index(f2, rng.gen_range(1..=6), rng)
    }
}

fn triple(f2: &MarkedGroup, rng: &mut ChaCha8Rng) -> Result<bool> {
    let h = [
        random_free_subgroup(f2, rng)?,
        random_free_subgroup(f2, rng)?,
        random_free_subgroup(f2, rng)?,
    ];
    let d = |i: usize, j: usize| chabauty_distance(&h[i], &h[j], 6).map(|d| d.distance);
    Ok(d(0, 1)? == d(1, 0)? && d(0, 0)?.is_zero() && d(0, 2)? <= d(0, 1)?.max(d(1, 2)?))
}

/// First radius `≤ MAX_RADIUS` at which the fingerprints of `n!ℤ` and `{0}` differ.
fn first_disagreement(z: &MarkedGroup, n: usize) -> Result<Option<usize>> {
    let f: usize = (1..=n).product();
    let trivial = Subgroup::trivial(z)?;
    let h = Subgroup::generated_by(z, &[z.parse_element(&"t ".repeat(f))?])?;
    for r in 0..=MAX_RADIUS {
        if h.fingerprint(r)? != trivial.fingerprint(r)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub(super) fn ultrametric(fx: &Fixtures, ck: &mut Checks) {
    let Some(f2) = ck.ok("free group", MarkedGroup::free(2)) else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut passed, mut notes) = (0, Vec::new());
    for i in 0..200 {
        match triple(&f2, &mut rng) {
            Ok(true) => passed += 1,
            Ok(false) => notes.push(format!("triple {i} fails")),
            Err(e) => notes.push(format!("triple {i}: {e}")),
        }
    }
    ck.check(
        "symmetric, zero on the diagonal, ultrametric",
        passed == 200,
        format!("{passed}/200 {}", notes.join("; ")),
    );

    let z = integers();
    let Some(rows) = ck.ok("factorial fixture parses", parse_factorial(&fx.factorial)) else { return };
    for (n, expected) in rows {
        let name = format!("{n}!Z first differs from the trivial subgroup at the listed radius");
        if let Some(got) = ck.ok(&name, first_disagreement(&z, n)) {
            ck.check(&name, got == expected, format!("got {got:?}, fixture {expected:?}"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_fixture_parses() {
        let rows = parse_factorial(&Fixtures::bundled().factorial).unwrap();
        assert_eq!(rows.last(), Some(&(5, None)));
        assert!(parse_factorial("3 six").is_err());
    }
}
