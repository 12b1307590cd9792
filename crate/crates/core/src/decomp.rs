//! Homogeneous decompositions in two monomials: `P = sum a_k m1^k m2^(d-k)`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::fields::Field;
use crate::newton::{collinear, newton_points, split_direction, LineFit, NewtonError};
use crate::poly::{Monomial, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("the zero polynomial has no decomposition")]
    ZeroPolynomial,
    #[error("a monomial is handled by the monomial case")]
    IsMonomial,
    #[error("the monomials are not relatively prime")]
    NotRelativelyPrime,
    #[error("both monomials are constant")]
    BothConstant,
    #[error("the decomposition is not maximal")]
    NotMaximal,
    #[error("coefficient list length does not match the degree")]
    BadCoefficients,
}

impl From<NewtonError> for DecompError {
    fn from(e: NewtonError) -> Self {
        match e {
            NewtonError::ZeroPolynomial | NewtonError::EmptySet => DecompError::ZeroPolynomial,
            NewtonError::ZeroDirection => DecompError::BothConstant,
        }
    }
}

/// `P = sum_k coeffs[k] * m1^k * m2^(degree - k)` with `m1`, `m2` coprime.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialPairDecomposition<F: Field> {
    pub m1: Monomial,
    pub m2: Monomial,
    pub degree: u32,
    pub coeffs: Vec<F::Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementTrace {
    pub initial_degree: u32,
    pub final_degree: u32,
    pub gcd_factor: u32,
}

/// gcd of all exponents of `m1` and `m2` together.
pub fn joint_exponent_gcd(m1: &Monomial, m2: &Monomial) -> u32 {
    m1.exponent_gcd().gcd(&m2.exponent_gcd())
}

impl<F: Field> MonomialPairDecomposition<F> {
    pub fn is_maximal(&self) -> bool {
        joint_exponent_gcd(&self.m1, &self.m2) == 1
    }

    pub fn reconstruct(&self, field: &F) -> Poly<F> {
        let n = self.m1.nvars();
        let mut out = Poly::zero(field, n);
        for (k, c) in self.coeffs.iter().enumerate() {
            let k = k as u32;
            out.add_term(self.m1.pow(k).mul(&self.m2.pow(self.degree - k)), c.clone());
        }
        out
    }
}

/// The decomposition read off the Newton line, if `P` is homogeneous in two
/// monomials. The pair is primitive, so the result is always maximal.
pub fn two_monomial_decomposition<F: Field>(
    p: &Poly<F>,
) -> Result<Option<MonomialPairDecomposition<F>>, DecompError> {
    let points = newton_points(p)?;
    let dir = match collinear(points.points())? {
        LineFit::SinglePoint { .. } => return Err(DecompError::IsMonomial),
        LineFit::NotCollinear => return Ok(None),
        LineFit::Line(d) => d,
    };
    let (m1, m2) = split_direction(&dir.delta)?;
    let top = dir.max_step() as u32;
    // base = s*m1 + (top + t)*m2 for some s, t >= 0
    let mut s: Option<u32> = None;
    let mut t: Option<u32> = None;
    for i in 0..m1.nvars() {
        let (a, b) = (m1.exponents()[i], m2.exponents()[i]);
        let base = dir.base[i];
        if a > 0 {
            if base % a != 0 || s.is_some_and(|s| s != base / a) {
                return Ok(None);
            }
            s = Some(base / a);
        } else if b > 0 {
            let Some(r) = base.checked_sub(top * b) else {
                return Ok(None);
            };
            if r % b != 0 || t.is_some_and(|t| t != r / b) {
                return Ok(None);
            }
            t = Some(r / b);
        } else if base != 0 {
            return Ok(None);
        }
    }
    let (s, t) = (s.unwrap_or(0), t.unwrap_or(0));
    let degree = top + s + t;
    let deg_p = p.total_degree().unwrap_or(0);
    if degree < 2 || deg_p <= m1.degree().max(m2.degree()) {
        return Ok(None);
    }
    let field = p.field();
    let mut coeffs = vec![field.zero(); degree as usize + 1];
    for &k in &dir.steps {
        let m = Monomial::new(dir.point(k));
        coeffs[k as usize + s as usize] = p.coeff(&m);
    }
    let dec = MonomialPairDecomposition {
        m1,
        m2,
        degree,
        coeffs,
    };
    debug_assert!(dec.reconstruct(field) == *p);
    Ok(Some(dec))
}

/// Passes to `(m1^(1/g), m2^(1/g))` where `g` is the joint exponent gcd.
pub fn refine_monomial_pair<F: Field>(
    field: &F,
    m1: &Monomial,
    m2: &Monomial,
    d0: u32,
    coeffs: &[F::Elem],
) -> Result<(MonomialPairDecomposition<F>, RefinementTrace), DecompError> {
    if !m1.coprime(m2) {
        return Err(DecompError::NotRelativelyPrime);
    }
    if coeffs.len() != d0 as usize + 1 {
        return Err(DecompError::BadCoefficients);
    }
    let g = joint_exponent_gcd(m1, m2);
    if g == 0 {
        return Err(DecompError::BothConstant);
    }
    let degree = d0 * g;
    let mut out = vec![field.zero(); degree as usize + 1];
    for (k, c) in coeffs.iter().enumerate() {
        out[k * g as usize] = c.clone();
    }
    let dec = MonomialPairDecomposition {
        m1: m1.root(g).expect("g divides every exponent"),
        m2: m2.root(g).expect("g divides every exponent"),
        degree,
        coeffs: out,
    };
    let trace = RefinementTrace {
        initial_degree: d0,
        final_degree: degree,
        gcd_factor: g,
    };
    Ok((dec, trace))
}

/// Whether `m1 + c*m2` is absolutely irreducible for every nonzero `c`.
pub fn binomial_pencil_irreducible(m1: &Monomial, m2: &Monomial) -> Result<bool, DecompError> {
    if m1.is_one() && m2.is_one() {
        return Err(DecompError::BothConstant);
    }
    if !m1.coprime(m2) {
        return Err(DecompError::NotRelativelyPrime);
    }
    Ok(joint_exponent_gcd(m1, m2) == 1)
}

/// `{ m1^k m2^(d-k) : 0 <= k <= d }` restricted to total degree `<= deg_p`.
pub fn homogeneous_site_monomials<F: Field>(
    dec: &MonomialPairDecomposition<F>,
    deg_p: u32,
) -> Result<BTreeSet<Monomial>, DecompError> {
    if !dec.is_maximal() {
        return Err(DecompError::NotMaximal);
    }
    Ok((0..=dec.degree)
        .map(|k| dec.m1.pow(k).mul(&dec.m2.pow(dec.degree - k)))
        .filter(|m| m.degree() <= deg_p)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{build_extension, Fq, Rationals};
    use crate::poly::test_support::poly;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    fn cusp_cube() -> Poly<Rationals> {
        poly(&Rationals, &[(1, &[2, 0]), (-1, &[0, 3])]).pow(3)
    }

    #[test]
    fn cusp_cube_decomposes() {
        let q = Rationals;
        let dec = two_monomial_decomposition(&cusp_cube()).unwrap().unwrap();
        assert_eq!(
            (dec.m1.clone(), dec.m2.clone(), dec.degree),
            (m(&[2, 0]), m(&[0, 3]), 3)
        );
        // (u - v)^3 = -v^3 + 3uv^2 - 3u^2v + u^3
        let expected: Vec<BigRational> = [-1, 3, -3, 1].iter().map(|&c| q.from_i64(c)).collect();
        assert_eq!(dec.coeffs, expected);
        assert!(dec.is_maximal());
        assert_eq!(dec.reconstruct(&q), cusp_cube());
        let site = homogeneous_site_monomials(&dec, 9).unwrap();
        let expected: BTreeSet<Monomial> = [m(&[6, 0]), m(&[4, 3]), m(&[2, 6]), m(&[0, 9])]
            .into_iter()
            .collect();
        assert_eq!(site, expected);
    }

    #[test]
    fn collinear_but_not_homogeneous() {
        let q = Rationals;
        let p = poly(&q, &[(1, &[1, 1]), (1, &[2, 3]), (1, &[3, 5])]);
        assert_eq!(two_monomial_decomposition(&p).unwrap(), None);
        let p = poly(&q, &[(1, &[3, 0]), (1, &[0, 3]), (1, &[1, 1])]);
        assert_eq!(two_monomial_decomposition(&p).unwrap(), None);
        let p = poly(&q, &[(1, &[3, 2])]);
        assert_eq!(two_monomial_decomposition(&p), Err(DecompError::IsMonomial));
    }

    #[test]
    fn offset_absorbed_into_degree() {
        // x^2 y (x + y) = x^3 y + x^2 y^2: pair (x, y), s = 2, t = 1
        let q = Rationals;
        let p = poly(&q, &[(1, &[3, 1]), (1, &[2, 2])]);
        let dec = two_monomial_decomposition(&p).unwrap().unwrap();
        assert_eq!(
            (dec.m1.clone(), dec.m2.clone(), dec.degree),
            (m(&[1, 0]), m(&[0, 1]), 4)
        );
        assert_eq!(dec.reconstruct(&q), p);
    }

    #[test]
    fn single_variable_direction() {
        // x^4 + x^2 + 1 = h(x, 1) with h of degree 4; the pair (x^2, 1) is
        // not maximal since x^2 + c splits
        let q = Rationals;
        let p = poly(&q, &[(1, &[4, 0]), (1, &[2, 0]), (1, &[0, 0])]);
        let dec = two_monomial_decomposition(&p).unwrap().unwrap();
        assert_eq!(
            (dec.m1.clone(), dec.m2.clone(), dec.degree),
            (m(&[1, 0]), m(&[0, 0]), 4)
        );
        assert_eq!(dec.coeffs[1], q.from_i64(0));
        // x + 1 is linear: degree condition fails
        let p = poly(&q, &[(1, &[1, 0]), (1, &[0, 0])]);
        assert_eq!(two_monomial_decomposition(&p).unwrap(), None);
    }

    #[test]
    fn refinement() {
        let q = Rationals;
        let c: Vec<BigRational> = vec![q.from_i64(-1), q.from_i64(0), q.from_i64(1)];
        let (dec, trace) = refine_monomial_pair(&q, &m(&[2, 0]), &m(&[0, 2]), 2, &c).unwrap();
        assert_eq!(
            (dec.m1.clone(), dec.m2.clone(), dec.degree),
            (m(&[1, 0]), m(&[0, 1]), 4)
        );
        assert_eq!(dec.coeffs[0], q.from_i64(-1));
        assert_eq!(dec.coeffs[4], q.from_i64(1));
        assert!(dec.coeffs[1..4].iter().all(|c| q.is_zero(c)));
        assert_eq!(trace.gcd_factor, 2);

        let c: Vec<BigRational> = (1..=4).map(|k| q.from_i64(k)).collect();
        let (dec, trace) = refine_monomial_pair(&q, &m(&[1, 0]), &m(&[0, 1]), 3, &c).unwrap();
        assert_eq!((dec.degree, trace.gcd_factor), (3, 1));
        assert_eq!(dec.coeffs, c);

        let c: Vec<BigRational> = vec![q.from_i64(1), q.from_i64(0), q.from_i64(1)];
        let (dec, _) = refine_monomial_pair(&q, &m(&[3, 0]), &m(&[0, 3]), 2, &c).unwrap();
        assert_eq!(dec.degree, 6);
        let mut expected = vec![q.from_i64(0); 7];
        expected[0] = q.from_i64(1);
        expected[6] = q.from_i64(1);
        assert_eq!(dec.coeffs, expected);

        let c = vec![q.from_i64(1); 3];
        assert_eq!(
            refine_monomial_pair(&q, &m(&[1, 1]), &m(&[1, 0]), 2, &c).unwrap_err(),
            DecompError::NotRelativelyPrime
        );
    }

    #[test]
    fn binomial_criterion() {
        assert!(binomial_pencil_irreducible(&m(&[1, 0]), &m(&[0, 3])).unwrap());
        assert!(!binomial_pencil_irreducible(&m(&[2, 0]), &m(&[0, 2])).unwrap());
        assert!(binomial_pencil_irreducible(&m(&[2, 1]), &m(&[0, 0])).unwrap());
        assert_eq!(
            binomial_pencil_irreducible(&m(&[0, 0]), &m(&[0, 0])),
            Err(DecompError::BothConstant)
        );
    }

    #[test]
    fn site_monomials() {
        let q = Rationals;
        let dec = MonomialPairDecomposition::<Rationals> {
            m1: m(&[1, 0]),
            m2: m(&[0, 1]),
            degree: 2,
            coeffs: vec![q.from_i64(1); 3],
        };
        let site = homogeneous_site_monomials(&dec, 2).unwrap();
        assert_eq!(
            site,
            [m(&[2, 0]), m(&[1, 1]), m(&[0, 2])].into_iter().collect()
        );
        let dec = MonomialPairDecomposition::<Rationals> {
            m1: m(&[3, 0]),
            m2: m(&[0, 0]),
            degree: 2,
            coeffs: vec![q.from_i64(1); 3],
        };
        assert_eq!(
            homogeneous_site_monomials(&dec, 6),
            Err(DecompError::NotMaximal)
        );
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        // disjoint supports over three variables
        (
            prop::collection::vec(0u32..3, 3),
            prop::collection::vec(any::<bool>(), 3),
        )
            .prop_map(|(e, side)| {
                let a = e
                    .iter()
                    .zip(&side)
                    .map(|(&x, &s)| if s { x } else { 0 })
                    .collect();
                let b = e
                    .iter()
                    .zip(&side)
                    .map(|(&x, &s)| if s { 0 } else { x })
                    .collect();
                (a, b)
            })
    }

    proptest! {
        #[test]
        fn constructed_pairs_are_recovered(
            (a, b) in arb_pair(),
            d in 2u32..5,
            coeffs in prop::collection::vec(0u64..5, 5),
            order in any::<u64>(),
        ) {
            let f5 = build_extension(5, 1).unwrap();
            let (m1, m2) = (Monomial::new(a), Monomial::new(b));
            prop_assume!(!(m1.is_one() && m2.is_one()));
            let c: Vec<Fq> = coeffs.iter().take(d as usize + 1).map(|&c| Fq(c)).collect();
            let built = MonomialPairDecomposition::<crate::fields::FiniteField> {
                m1: m1.clone(), m2: m2.clone(), degree: d, coeffs: c,
            };
            let p = built.reconstruct(&f5);
            prop_assume!(p.len() >= 2);
            // insertion order must not matter
            let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), *c)).collect();
            let rot = (order as usize) % terms.len();
            terms.rotate_left(rot);
            let shuffled = Poly::from_terms(&f5, 3, terms);
            let dec = two_monomial_decomposition(&p).unwrap();
            prop_assert_eq!(&dec, &two_monomial_decomposition(&shuffled).unwrap());
            let deg_p = p.total_degree().unwrap();
            if deg_p > m1.degree().max(m2.degree()) {
                let dec = dec.expect("constructed polynomial is homogeneous in two monomials");
                prop_assert!(dec.is_maximal());
                prop_assert_eq!(dec.reconstruct(&f5), p.clone());
                // the primitive pair divides a power of the constructed one
                let g = joint_exponent_gcd(&m1, &m2);
                let (r1, r2) = (m1.root(g).unwrap(), m2.root(g).unwrap());
                prop_assert!(
                    (dec.m1 == r1 && dec.m2 == r2) || (dec.m1 == r2 && dec.m2 == r1)
                        || r1.is_one() || r2.is_one()
                );
            }
        }

        #[test]
        fn refinement_is_maximal((a, b) in arb_pair(), d0 in 1u32..4) {
            let (m1, m2) = (Monomial::new(a), Monomial::new(b));
            prop_assume!(!(m1.is_one() && m2.is_one()));
            let q = Rationals;
            let c: Vec<BigRational> = (0..=d0).map(|k| q.from_i64(k as i64 + 1)).collect();
            let (dec, trace) = refine_monomial_pair(&q, &m1, &m2, d0, &c).unwrap();
            prop_assert!(binomial_pencil_irreducible(&dec.m1, &dec.m2).unwrap());
            prop_assert_eq!(dec.degree, d0 * trace.gcd_factor);
            let original = MonomialPairDecomposition::<Rationals> { m1, m2, degree: d0, coeffs: c };
            prop_assert_eq!(dec.reconstruct(&q), original.reconstruct(&q));
        }
    }
}
