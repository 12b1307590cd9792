//! Newton representation: exponent vectors as lattice points, and the line
//! through them when they are collinear.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::fields::Field;
use crate::poly::{Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton points")]
    ZeroPolynomial,
    #[error("empty point set")]
    EmptySet,
    #[error("zero direction vector")]
    ZeroDirection,
}

/// Distinct exponent vectors of the nonzero terms, in ascending lexicographic
/// order of the vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct NewtonSet(Vec<Vec<u32>>);

impl NewtonSet {
    pub fn from_points<I: IntoIterator<Item = Vec<u32>>>(points: I) -> Self {
        let set: BTreeSet<Vec<u32>> = points.into_iter().collect();
        NewtonSet(set.into_iter().collect())
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The line `base + k * delta` carrying a collinear point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveDirection {
    /// Primitive, with first nonzero component positive.
    pub delta: Vec<i64>,
    /// The point with the least step.
    pub base: Vec<u32>,
    /// Sorted, starting at 0.
    pub steps: Vec<u64>,
}

impl PrimitiveDirection {
    pub fn max_step(&self) -> u64 {
        self.steps.last().copied().unwrap_or(0)
    }

    pub fn point(&self, k: u64) -> Vec<u32> {
        self.base
            .iter()
            .zip(&self.delta)
            .map(|(&b, &d)| (i64::from(b) + k as i64 * d) as u32)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineFit {
    SinglePoint { point: Vec<u32> },
    Line(PrimitiveDirection),
    NotCollinear,
}

impl LineFit {
    /// A single point counts as collinear.
    pub fn is_collinear(&self) -> bool {
        !matches!(self, LineFit::NotCollinear)
    }

    pub fn direction(&self) -> Option<&PrimitiveDirection> {
        match self {
            LineFit::Line(d) => Some(d),
            _ => None,
        }
    }
}

pub fn newton_points<F: Field>(p: &Poly<F>) -> Result<NewtonSet, NewtonError> {
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    Ok(NewtonSet::from_points(
        p.support().map(|m| m.exponents().to_vec()),
    ))
}

/// Fits a line through the points with exact integer arithmetic.
pub fn collinear(points: &[Vec<u32>]) -> Result<LineFit, NewtonError> {
    let set: BTreeSet<&Vec<u32>> = points.iter().collect();
    let mut it = set.iter();
    let first = *it.next().ok_or(NewtonError::EmptySet)?;
    let Some(second) = it.next() else {
        return Ok(LineFit::SinglePoint {
            point: first.clone(),
        });
    };
    let diff = |q: &[u32]| -> Vec<i64> {
        q.iter()
            .zip(first)
            .map(|(&a, &b)| i64::from(a) - i64::from(b))
            .collect()
    };
    let v = diff(second);
    let g = v.iter().fold(0i64, |g, &c| g.gcd(&c));
    let mut delta: Vec<i64> = v.iter().map(|c| c / g).collect();
    if delta.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        delta.iter_mut().for_each(|c| *c = -*c);
    }
    let pivot = delta.iter().position(|&c| c != 0).expect("distinct points");

    let mut params = Vec::with_capacity(set.len());
    for q in &set {
        let w = diff(q);
        if w[pivot] % delta[pivot] != 0 {
            return Ok(LineFit::NotCollinear);
        }
        let t = w[pivot] / delta[pivot];
        if w.iter().zip(&delta).any(|(&wi, &di)| wi != t * di) {
            return Ok(LineFit::NotCollinear);
        }
        params.push((t, *q));
    }
    params.sort();
    let t0 = params[0].0;
    Ok(LineFit::Line(PrimitiveDirection {
        delta,
        base: params[0].1.clone(),
        steps: params.iter().map(|(t, _)| (t - t0) as u64).collect(),
    }))
}

/// Whether the Newton points of `p` together with `extra` lie on one line.
pub fn joint_line_test<F: Field>(p: &Poly<F>, extra: &[Monomial]) -> Result<bool, NewtonError> {
    let mut points = newton_points(p)?.0;
    points.extend(extra.iter().map(|m| m.exponents().to_vec()));
    Ok(collinear(&points)?.is_collinear())
}

/// Positive part of `delta` as `m1`, negated negative part as `m2`.
pub fn split_direction(delta: &[i64]) -> Result<(Monomial, Monomial), NewtonError> {
    if delta.iter().all(|&c| c == 0) {
        return Err(NewtonError::ZeroDirection);
    }
    let m1 = delta.iter().map(|&c| c.max(0) as u32).collect();
    let m2 = delta.iter().map(|&c| (-c).max(0) as u32).collect();
    Ok((Monomial::new(m1), Monomial::new(m2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Rationals;
    use crate::poly::test_support::poly;
    use proptest::prelude::*;

    fn pts(v: &[&[u32]]) -> Vec<Vec<u32>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    /// Independent collinearity test: all 2x2 minors of the difference
    /// vectors vanish.
    fn cross_collinear(points: &[Vec<u32>]) -> bool {
        let p0 = &points[0];
        let d: Vec<Vec<i64>> = points
            .iter()
            .map(|q| {
                q.iter()
                    .zip(p0)
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect()
            })
            .collect();
        for a in &d {
            for b in &d {
                for i in 0..a.len() {
                    for j in 0..a.len() {
                        if a[i] * b[j] != a[j] * b[i] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn newton_point_examples() {
        let q = Rationals;
        let p = poly(&q, &[(1, &[2, 1]), (3, &[0, 0])]);
        assert_eq!(
            newton_points(&p).unwrap().points(),
            &pts(&[&[0, 0], &[2, 1]])
        );
        let s = poly(&q, &[(1, &[2, 0]), (-1, &[0, 3])]).pow(3);
        assert_eq!(
            newton_points(&s).unwrap().points(),
            &pts(&[&[0, 9], &[2, 6], &[4, 3], &[6, 0]])
        );
    }

    #[test]
    fn cusp_cube_line() {
        let fit = collinear(&pts(&[&[6, 0], &[4, 3], &[2, 6], &[0, 9]])).unwrap();
        let d = fit.direction().unwrap();
        assert_eq!(d.delta, vec![2, -3]);
        assert_eq!(d.base, vec![0, 9]);
        assert_eq!(d.steps, vec![0, 1, 2, 3]);
    }

    #[test]
    fn non_collinear_and_axis() {
        let set = pts(&[&[1, 1], &[2, 4], &[3, 6]]);
        assert!(!cross_collinear(&set));
        assert_eq!(collinear(&set).unwrap(), LineFit::NotCollinear);
        let fit = collinear(&pts(&[&[0, 0], &[5, 0]])).unwrap();
        let d = fit.direction().unwrap();
        assert_eq!(
            (d.delta.clone(), d.base.clone(), d.steps.clone()),
            (vec![1, 0], vec![0, 0], vec![0, 5])
        );
        assert_eq!(collinear(&[]), Err(NewtonError::EmptySet));
        assert!(matches!(
            collinear(&pts(&[&[1, 2]])).unwrap(),
            LineFit::SinglePoint { .. }
        ));
    }

    #[test]
    fn joint_line_examples() {
        let q = Rationals;
        let p = poly(&q, &[(1, &[2, 0]), (1, &[1, 1]), (1, &[0, 2])]);
        assert!(joint_line_test(&p, &[]).unwrap());
        assert!(!joint_line_test(&p, &[Monomial::new(vec![3, 0])]).unwrap());
        let p = poly(&q, &[(1, &[2, 0]), (1, &[0, 2])]);
        assert!(joint_line_test(&p, &[Monomial::new(vec![1, 1])]).unwrap());
        let p = poly(&q, &[(1, &[3, 0]), (1, &[0, 3]), (1, &[1, 1])]);
        assert!(!joint_line_test(&p, &[Monomial::new(vec![1, 0])]).unwrap());
    }

    #[test]
    fn split_examples() {
        let m = |v: &[u32]| Monomial::new(v.to_vec());
        assert_eq!(split_direction(&[2, -3]).unwrap(), (m(&[2, 0]), m(&[0, 3])));
        assert_eq!(split_direction(&[1, 0]).unwrap(), (m(&[1, 0]), m(&[0, 0])));
        assert_eq!(split_direction(&[1, 2]).unwrap(), (m(&[1, 2]), m(&[0, 0])));
        assert_eq!(split_direction(&[0, 0]), Err(NewtonError::ZeroDirection));
    }

    fn arb_points() -> impl Strategy<Value = Vec<Vec<u32>>> {
        prop::collection::vec(prop::collection::vec(0u32..6, 3), 1..6)
    }

    fn arb_line() -> impl Strategy<Value = Vec<Vec<u32>>> {
        (
            prop::collection::vec(0u32..5, 3),
            prop::collection::vec(-2i64..3, 3),
            prop::collection::btree_set(0i64..4, 1..4),
        )
            .prop_map(|(base, dir, ks)| {
                let lo: Vec<i64> = base.iter().map(|&b| b as i64 + 10).collect();
                ks.into_iter()
                    .map(|k| {
                        lo.iter()
                            .zip(&dir)
                            .map(|(b, d)| (b + k * d) as u32)
                            .collect()
                    })
                    .collect()
            })
    }

    proptest! {
        #[test]
        fn agrees_with_cross_products(points in arb_points()) {
            prop_assert_eq!(collinear(&points).unwrap().is_collinear(), cross_collinear(&points));
        }

        #[test]
        fn lines_reconstruct(points in arb_line()) {
            let fit = collinear(&points).unwrap();
            prop_assert!(fit.is_collinear());
            if let LineFit::Line(d) = fit {
                let g = d.delta.iter().fold(0i64, |g, &c| g.gcd(&c));
                prop_assert_eq!(g, 1);
                prop_assert!(*d.delta.iter().find(|&&c| c != 0).unwrap() > 0);
                let rebuilt = NewtonSet::from_points(d.steps.iter().map(|&k| d.point(k)));
                prop_assert_eq!(rebuilt, NewtonSet::from_points(points.clone()));
                let (m1, m2) = split_direction(&d.delta).unwrap();
                prop_assert!(m1.coprime(&m2));
                prop_assert_eq!(m1.exponent_gcd().gcd(&m2.exponent_gcd()), 1);
            }
        }

        #[test]
        fn invariant_under_permutation_and_translation(
            points in prop_oneof![arb_points(), arb_line()],
            shift in prop::collection::vec(0u32..4, 3),
            rot in 0usize..5,
        ) {
            let base = collinear(&points).unwrap();
            let mut permuted = points.clone();
            permuted.rotate_left(rot % points.len());
            permuted.reverse();
            prop_assert_eq!(collinear(&permuted).unwrap(), base.clone());
            let moved: Vec<Vec<u32>> = points
                .iter()
                .map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect())
                .collect();
            let fit = collinear(&moved).unwrap();
            prop_assert_eq!(fit.is_collinear(), base.is_collinear());
            if let (LineFit::Line(a), LineFit::Line(b)) = (&fit, &base) {
                prop_assert_eq!(&a.delta, &b.delta);
                prop_assert_eq!(&a.steps, &b.steps);
            }
        }
    }
}
