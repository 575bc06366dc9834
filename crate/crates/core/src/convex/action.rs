//! Finite groups of rational orthogonal matrices acting on bodies, fixed-point sets of
//! subgroups, and the pushforward of an IRS along `H ↦ Fix(H) ∩ C`.

use std::sync::Arc;

use num::{One, Signed, Zero};

use super::body::{barycenter, BodyMeasure, ConvexBody, Point};
use super::directions::DirectionSet;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, MarkedGroup};
use crate::irs::IrsDistribution;
use crate::rational::format_rational;
use crate::subgroup::Subgroup;
use crate::Rational;

/// Largest matrix group closed by [`OrthogonalAction::generated_by`].
pub const ACTION_LIMIT: usize = 1000;

/// An `n × n` matrix with rational entries and `QᵀQ = I`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthogonalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl OrthogonalMatrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        let m = OrthogonalMatrix { n, entries };
        if !m.transpose().mul(&m).is_identity() {
            return Err(Error::NotOrthogonal);
        }
        Ok(m)
    }

    pub fn from_ints(n: usize, entries: &[i64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        OrthogonalMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &OrthogonalMatrix) -> OrthogonalMatrix {
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
            }
        }
        OrthogonalMatrix { n, entries }
    }

    /// Also the inverse.
    pub fn transpose(&self) -> OrthogonalMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entry(k % n, k / n).clone()).collect();
        OrthogonalMatrix { n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn apply(&self, p: &[Rational]) -> Point {
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.entry(i, k) * &p[k]).sum())
            .collect()
    }

    fn name(&self) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let x = self.entry(i, j);
                        if x.is_integer() {
                            x.numer().to_string()
                        } else {
                            format_rational(x)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("[{}]", rows.join(";"))
    }
}

/// `gC`, vertex by vertex.
pub fn apply_action(g: &OrthogonalMatrix, c: &ConvexBody) -> Result<ConvexBody> {
    if g.n != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: g.n,
        });
    }
    ConvexBody::new(c.dim(), c.vertices().iter().map(|v| g.apply(v)).collect())
}

/// Rows spanning the row space of `rows`, in reduced echelon form.
fn row_reduce(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x /= &lead;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// `C ∩ Fix(H)` where `H` is generated by `gens`; the fixed subspace is the common kernel
/// of `g − I`. `None` when the intersection is empty.
pub fn fix_set(gens: &[OrthogonalMatrix], c: &ConvexBody) -> Result<Option<ConvexBody>> {
    let n = c.dim();
    let mut rows = Vec::new();
    for g in gens {
        if g.n != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.n });
        }
        for i in 0..n {
            rows.push(
                (0..n)
                    .map(|j| {
                        let delta = if i == j { Rational::one() } else { Rational::zero() };
                        g.entry(i, j) - delta
                    })
                    .collect(),
            );
        }
    }
    let mut body = c.clone();
    for row in row_reduce(rows, n) {
        match body.section(&row)? {
            Some(b) => body = b,
            None => return Ok(None),
        }
    }
    Ok(Some(body))
}

/// A finite group of orthogonal matrices, with its multiplication table as a marked group.
#[derive(Debug, Clone)]
pub struct OrthogonalAction {
    dim: usize,
    group: MarkedGroup,
    matrices: Vec<OrthogonalMatrix>,
}

impl OrthogonalAction {
    pub fn generated_by(gens: Vec<OrthogonalMatrix>, labels: Option<Vec<String>>) -> Result<Self> {
        let dim = gens.first().map(|g| g.n).ok_or(Error::InvalidGroup("no generators".into()))?;
        if let Some(g) = gens.iter().find(|g| g.n != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: g.n });
        }
        let (table, matrices, gen_idx) = FiniteGroup::generate(
            OrthogonalMatrix::identity(dim),
            &gens,
            |a, b| a.mul(b),
            |m| m.name(),
            ACTION_LIMIT,
        )?;
        let group = MarkedGroup::from_finite(Arc::new(table), gen_idx, labels)?;
        Ok(OrthogonalAction { dim, group, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn matrix(&self, element: usize) -> &OrthogonalMatrix {
        &self.matrices[element]
    }

    pub fn matrices(&self) -> &[OrthogonalMatrix] {
        &self.matrices
    }

    pub fn generator_matrices(&self) -> Vec<&OrthogonalMatrix> {
        match self.group.family() {
            crate::group::Family::Finite { generators, .. } => generators.iter().map(|&g| &self.matrices[g]).collect(),
            _ => unreachable!("orthogonal actions are finite"),
        }
    }

    pub fn subgroup_matrices(&self, h: &Subgroup) -> Result<Vec<OrthogonalMatrix>> {
        if h.parent() != &self.group {
            return Err(Error::FamilyMismatch);
        }
        let elems = h.elements().ok_or(Error::FamilyMismatch)?;
        Ok(elems.iter().map(|&i| self.matrices[i].clone()).collect())
    }

    /// A small generating set of `h`, chosen greedily in element order.
    fn generating_set(&self, h: &Subgroup) -> Result<Vec<usize>> {
        if h.parent() != &self.group {
            return Err(Error::FamilyMismatch);
        }
        let table = self.group.finite().expect("orthogonal actions are finite");
        let elems = h.elements().ok_or(Error::FamilyMismatch)?;
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![table.identity()];
        for &x in elems {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = table.closure(&gens);
                span.sort_unstable();
            }
        }
        Ok(gens)
    }

    pub fn fix_subgroup(&self, h: &Subgroup, c: &ConvexBody) -> Result<Option<ConvexBody>> {
        let gens: Vec<OrthogonalMatrix> = self.generating_set(h)?.iter().map(|&i| self.matrices[i].clone()).collect();
        fix_set(&gens, c)
    }

    /// `g · (Fix(H) ∩ C) = Fix(gHg⁻¹) ∩ gC` for every element `g`.
    pub fn fix_equivariant(&self, h: &Subgroup, c: &ConvexBody) -> Result<bool> {
        let fixed = self.fix_subgroup(h, c)?;
        let gens = self.generating_set(h)?;
        for gm in &self.matrices {
            let moved_body = apply_action(gm, c)?;
            let conj: Vec<OrthogonalMatrix> = gens
                .iter()
                .map(|&x| gm.mul(&self.matrices[x]).mul(&gm.transpose()))
                .collect();
            let lhs = fixed.as_ref().map(|f| apply_action(gm, f)).transpose()?;
            if lhs != fix_set(&conj, &moved_body)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `g_* ν`.
    pub fn translate_measure(&self, g: &OrthogonalMatrix, nu: &BodyMeasure) -> Result<BodyMeasure> {
        BodyMeasure::new(
            nu.atoms()
                .iter()
                .map(|(b, w)| Ok((apply_action(g, b)?, w.clone())))
                .collect::<Result<_>>()?,
        )
    }

    pub fn is_invariant_measure(&self, nu: &BodyMeasure) -> Result<bool> {
        for g in self.generator_matrices() {
            if &self.translate_measure(g, nu)? != nu {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_fixed_body(&self, c: &ConvexBody) -> Result<bool> {
        for g in self.generator_matrices() {
            if &apply_action(g, c)? != c {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image of `μ` under `H ↦ Fix(H) ∩ C`, with weights of equal images aggregated.
    pub fn pushforward_fix(&self, mu: &IrsDistribution, c: &ConvexBody) -> Result<BodyMeasure> {
        if mu.parent() != &self.group {
            return Err(Error::FamilyMismatch);
        }
        let mut atoms = Vec::with_capacity(mu.atoms().len());
        for (h, w) in mu.atoms() {
            let body = self.fix_subgroup(h, c)?.ok_or(Error::EmptySet)?;
            atoms.push((body, w.clone()));
        }
        BodyMeasure::new(atoms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureVerdict {
    /// `bary(ν) = C` and `ν = δ_C`.
    Consistent,
    /// `bary(ν) = C` although `ν ≠ δ_C`.
    Violated,
    /// `bary(ν) ⊊ C`; `direction` is where the support drops by `drop`, if any direction in
    /// the set sees it.
    BarycenterProper { direction: Option<Point>, drop: Rational },
}

pub fn invariant_measure_test(nu: &BodyMeasure, c: &ConvexBody, dirs: &DirectionSet) -> Result<MeasureVerdict> {
    for (body, _) in nu.atoms() {
        if !body.is_subset_of(c)? {
            return Err(Error::AtomNotContained);
        }
    }
    let bary = barycenter(nu)?;
    if &bary == c {
        return Ok(if nu.is_dirac_at(c) {
            MeasureVerdict::Consistent
        } else {
            MeasureVerdict::Violated
        });
    }
    let mut best: Option<(Point, Rational)> = None;
    for d in dirs.directions() {
        let drop = c.support_max(d)? - bary.support_max(d)?;
        if drop.is_positive() && best.as_ref().map_or(true, |(_, b)| &drop > b) {
            best = Some((d.clone(), drop));
        }
    }
    Ok(match best {
        Some((d, drop)) => MeasureVerdict::BarycenterProper {
            direction: Some(d),
            drop,
        },
        None => MeasureVerdict::BarycenterProper {
            direction: None,
            drop: Rational::zero(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::fixtures::{half_square, klein_reflections};
    use crate::rational::{int, ratio};

    fn p(a: Rational, b: Rational) -> Point {
        vec![a, b]
    }

    #[test]
    fn orthogonality_is_checked() {
        assert_eq!(OrthogonalMatrix::from_ints(2, &[1, 1, 0, 1]), Err(Error::NotOrthogonal));
        let r = OrthogonalMatrix::new(2, vec![ratio(3, 5), ratio(-4, 5), ratio(4, 5), ratio(3, 5)]).unwrap();
        assert!(r.mul(&r.transpose()).is_identity());
    }

    #[test]
    fn action_examples() {
        let sq = half_square();
        assert_eq!(apply_action(&OrthogonalMatrix::identity(2), &sq).unwrap(), sq);
        let rot = OrthogonalMatrix::from_ints(2, &[0, -1, 1, 0]).unwrap();
        assert_eq!(apply_action(&rot, &sq).unwrap(), sq);
        let refl = OrthogonalMatrix::from_ints(2, &[-1, 0, 0, 1]).unwrap();
        let seg = ConvexBody::segment(p(int(0), int(0)), p(int(1), int(0))).unwrap();
        let expected = ConvexBody::segment(p(int(-1), int(0)), p(int(0), int(0))).unwrap();
        assert_eq!(apply_action(&refl, &seg).unwrap(), expected);
    }

    #[test]
    fn fix_set_examples() {
        let sq = half_square();
        let id = OrthogonalMatrix::identity(2);
        assert_eq!(fix_set(&[id], &sq).unwrap().unwrap(), sq);
        let minus = OrthogonalMatrix::from_ints(2, &[-1, 0, 0, -1]).unwrap();
        let origin = ConvexBody::point(p(int(0), int(0))).unwrap();
        assert_eq!(fix_set(&[minus], &sq).unwrap().unwrap(), origin);
        let sx = OrthogonalMatrix::from_ints(2, &[1, 0, 0, -1]).unwrap();
        let axis = ConvexBody::segment(p(ratio(-1, 2), int(0)), p(ratio(1, 2), int(0))).unwrap();
        assert_eq!(fix_set(&[sx], &sq).unwrap().unwrap(), axis);
    }

    #[test]
    fn klein_pushforward() {
        let act = klein_reflections();
        assert_eq!(act.group().order(), Some(4));
        let sq = half_square();
        let g = act.group();
        let trivial = Subgroup::trivial(g).unwrap();
        let whole = Subgroup::whole(g).unwrap();
        let nu = act.pushforward_fix(&IrsDistribution::dirac(&trivial), &sq).unwrap();
        assert!(nu.is_dirac_at(&sq));
        let nu = act.pushforward_fix(&IrsDistribution::dirac(&whole), &sq).unwrap();
        assert!(nu.is_dirac_at(&ConvexBody::point(p(int(0), int(0))).unwrap()));
        let hx = Subgroup::generated_by(g, &[g.parse_element("sx").unwrap()]).unwrap();
        let hy = Subgroup::generated_by(g, &[g.parse_element("sy").unwrap()]).unwrap();
        let mu = IrsDistribution::uniform(g, vec![hx.clone(), hy]).unwrap();
        let nu = act.pushforward_fix(&mu, &sq).unwrap();
        let horizontal = ConvexBody::segment(p(ratio(-1, 2), int(0)), p(ratio(1, 2), int(0))).unwrap();
        let vertical = ConvexBody::segment(p(int(0), ratio(-1, 2)), p(int(0), ratio(1, 2))).unwrap();
        assert_eq!(nu.atoms().len(), 2);
        assert!(nu.atoms().iter().any(|(b, w)| b == &horizontal && *w == ratio(1, 2)));
        assert!(nu.atoms().iter().any(|(b, w)| b == &vertical && *w == ratio(1, 2)));
        assert!(act.is_invariant_measure(&nu).unwrap());
        assert!(act.fix_equivariant(&hx, &sq).unwrap());
        assert!(act.is_fixed_body(&barycenter(&nu).unwrap()).unwrap());
    }

    #[test]
    fn verdicts() {
        let sq = half_square();
        let dirs = DirectionSet::default_for(2).unwrap();
        assert_eq!(
            invariant_measure_test(&BodyMeasure::dirac(&sq), &sq, &dirs).unwrap(),
            MeasureVerdict::Consistent
        );
        let face = ConvexBody::segment(p(ratio(1, 2), ratio(1, 2)), p(ratio(1, 2), ratio(-1, 2))).unwrap();
        let nu = BodyMeasure::new(vec![(sq.clone(), ratio(9, 10)), (face, ratio(1, 10))]).unwrap();
        match invariant_measure_test(&nu, &sq, &dirs).unwrap() {
            MeasureVerdict::BarycenterProper { direction, drop } => {
                // at -e1 the face sits a full unit above the square's support
                assert_eq!(direction, Some(p(int(-1), int(0))));
                assert_eq!(drop, ratio(1, 10));
            }
            v => panic!("unexpected verdict {v:?}"),
        }
        let outside = ConvexBody::point(p(ratio(3, 4), int(0))).unwrap();
        assert_eq!(
            invariant_measure_test(&BodyMeasure::dirac(&outside), &sq, &dirs),
            Err(Error::AtomNotContained)
        );
    }
}
