//! Deciding whether a set of monomials is a reducibility monomial site of `P`,
//! i.e. whether `P + l1 Q1 + ... + ll Ql` is reducible over the closure of
//! `K(l1, ..., ll)`.
//!
//! Structural criteria run first. The exhaustive oracle is consulted only for
//! singleton candidates `{m^d}` that structure cannot settle, which requires a
//! finite coefficient field.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::decomp::{
    homogeneous_site_monomials, two_monomial_decomposition, DecompError, MonomialPairDecomposition,
};
use crate::fields::Field;
use crate::newton::{collinear, joint_line_test, LineFit, NewtonError};
use crate::poly::{Monomial, Poly, PolyError, PurePowerWitness};
use crate::spectrum::{
    abs_irreducible, generic_irreducibility, to_finite, GenericTranscript, OracleConfig,
    SpectrumError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("this case is only decided by the oracle, which needs a finite field")]
    NeedsFiniteField,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
}

impl From<NewtonError> for ClassifyError {
    fn from(e: NewtonError) -> Self {
        ClassifyError::Decomp(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SiteCase {
    MonomialCaseCharP,
    MonomialCaseHomogeneous,
    HomogeneousCase,
    /// Not produced: homogeneous sets are reported as `HomogeneousCase`
    /// whether or not `P` is a pure power.
    PurePowerPossibility1,
    PurePowerPossibility2,
    PurePowerPossibility3,
    Case2SingletonPower,
    NotASite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Structural,
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness<F: Field> {
    /// `P` and every `Q_i` lie in `K[x^p]`.
    Frobenius {
        characteristic: u64,
    },
    /// `P` and every `Q_i` have the form `m1^k m2^(d-k)`, including both
    /// `m1^d` and `m2^d`.
    MonomialPair {
        m1: Monomial,
        m2: Monomial,
        degree: u32,
    },
    /// Maximal decomposition of `P`; every `Q_i` is one of its monomials.
    Homogeneous(MonomialPairDecomposition<F>),
    /// `P = scale * (base^(e/degree))^degree` and `Q = m^degree`.
    PurePowerSite {
        power: PurePowerWitness<F>,
        m: Monomial,
        degree: u32,
    },
    Oracle(GenericTranscript),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiteVerdict<F: Field> {
    pub verdict: Verdict,
    pub case: SiteCase,
    pub method: Method,
    pub witness: Option<Witness<F>>,
}

impl<F: Field> SiteVerdict<F> {
    pub fn is_site(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    fn structural(verdict: Verdict, case: SiteCase, witness: Option<Witness<F>>) -> Self {
        SiteVerdict {
            verdict,
            case,
            method: Method::Structural,
            witness,
        }
    }

    fn no() -> Self {
        Self::structural(Verdict::No, SiteCase::NotASite, None)
    }
}

fn check_site<F: Field>(p: &Poly<F>, qs: &[Monomial]) -> Result<u32, ClassifyError> {
    let d = p.total_degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(ClassifyError::Precondition("P must be non-constant".into()));
    }
    if qs.is_empty() {
        return Err(ClassifyError::Precondition(
            "the monomial set is empty".into(),
        ));
    }
    let distinct: BTreeSet<&Monomial> = qs.iter().collect();
    if distinct.len() != qs.len() {
        return Err(ClassifyError::Precondition(
            "monomials must be pairwise distinct".into(),
        ));
    }
    for q in qs {
        if q.nvars() != p.nvars() {
            return Err(ClassifyError::Precondition(
                "monomial arity differs from the ring".into(),
            ));
        }
        if q.degree() > d {
            return Err(ClassifyError::Precondition(format!(
                "deg Q = {} exceeds deg P = {d}",
                q.degree()
            )));
        }
    }
    if !p.set_relatively_prime(qs)? {
        return Err(ClassifyError::Precondition(
            "P and the monomials share a monomial factor".into(),
        ));
    }
    Ok(d)
}

fn all_pth_powers(ms: &[Monomial], p: u64) -> bool {
    p > 0
        && ms
            .iter()
            .all(|m| m.exponents().iter().all(|&e| u64::from(e) % p == 0))
}

/// Whether `m = r^j` for some `j >= 2`; the unit monomial qualifies.
fn is_perfect_power(m: &Monomial) -> bool {
    m.exponent_gcd() != 1
}

/// Relatively prime `m1`, `m2` and `d > 1` such that every monomial is some
/// `m1^k m2^(d-k)` and both `m1^d`, `m2^d` occur.
pub fn monomial_pair_site(
    ms: &[Monomial],
) -> Result<Option<(Monomial, Monomial, u32)>, ClassifyError> {
    let points: Vec<Vec<u32>> = ms.iter().map(|m| m.exponents().to_vec()).collect();
    let dir = match collinear(&points)? {
        LineFit::Line(dir) => dir,
        LineFit::SinglePoint { .. } | LineFit::NotCollinear => return Ok(None),
    };
    let top = dir.max_step();
    let (a, b) = (dir.point(0), dir.point(top));
    let g = a.iter().chain(&b).fold(0u32, |g, &e| g.gcd(&e));
    if g < 2 {
        return Ok(None);
    }
    let m1 = Monomial::new(a.iter().map(|e| e / g).collect());
    let m2 = Monomial::new(b.iter().map(|e| e / g).collect());
    if !m1.coprime(&m2) {
        return Ok(None);
    }
    if dir.steps.iter().any(|k| (k * u64::from(g)) % top != 0) {
        return Ok(None);
    }
    Ok(Some((m1, m2, g)))
}

fn consult_oracle<F: Field>(
    p: &Poly<F>,
    qs: &[Monomial],
    cfg: &OracleConfig,
    yes_case: SiteCase,
) -> Result<SiteVerdict<F>, ClassifyError> {
    let fp = to_finite(p).ok_or(ClassifyError::NeedsFiniteField)?;
    let t = generic_irreducibility(&fp, qs, cfg)?;
    let (verdict, case) = if t.generically_irreducible {
        (Verdict::No, SiteCase::NotASite)
    } else {
        (Verdict::Yes, yes_case)
    };
    Ok(SiteVerdict {
        verdict,
        case,
        method: Method::Oracle,
        witness: Some(Witness::Oracle(t)),
    })
}

/// Decides whether `qs` is a reducibility monomial site of `p`.
pub fn classify_site<F: Field>(
    p: &Poly<F>,
    qs: &[Monomial],
    cfg: &OracleConfig,
) -> Result<SiteVerdict<F>, ClassifyError> {
    let deg_p = check_site(p, qs)?;
    let char_p = p.field().characteristic();

    if p.is_monomial() {
        let (pm, _) = p.leading().expect("non-zero");
        let mut all: Vec<Monomial> = qs.to_vec();
        all.push(pm.clone());
        if let Some((m1, m2, degree)) = monomial_pair_site(&all)? {
            let w = Witness::MonomialPair { m1, m2, degree };
            return Ok(SiteVerdict::structural(
                Verdict::Yes,
                SiteCase::MonomialCaseHomogeneous,
                Some(w),
            ));
        }
        if all_pth_powers(&all, char_p) {
            let w = Witness::Frobenius {
                characteristic: char_p,
            };
            return Ok(SiteVerdict::structural(
                Verdict::Yes,
                SiteCase::MonomialCaseCharP,
                Some(w),
            ));
        }
        return Ok(SiteVerdict::no());
    }

    if let Some(dec) = two_monomial_decomposition(p)? {
        let site = homogeneous_site_monomials(&dec, deg_p)?;
        if qs.iter().all(|q| site.contains(q)) {
            return Ok(SiteVerdict::structural(
                Verdict::Yes,
                SiteCase::HomogeneousCase,
                Some(Witness::Homogeneous(dec)),
            ));
        }
    }
    let singleton_power = qs.len() == 1 && is_perfect_power(&qs[0]);

    let Some(power) = p.pure_power()? else {
        if !singleton_power {
            return Ok(SiteVerdict::no());
        }
        return consult_oracle(p, qs, cfg, SiteCase::Case2SingletonPower);
    };

    if char_p > 0 && all_pth_powers(qs, char_p) && p.in_frobenius_subring()? {
        let w = Witness::Frobenius {
            characteristic: char_p,
        };
        return Ok(SiteVerdict::structural(
            Verdict::Yes,
            SiteCase::PurePowerPossibility3,
            Some(w),
        ));
    }
    if !singleton_power {
        return Ok(SiteVerdict::no());
    }
    // P = S^e is (m, S^(e/j))-homogeneous of degree j for every j | e.
    let q = &qs[0];
    let j = power.exponent.gcd(&q.exponent_gcd());
    if j >= 2 {
        let m = q.root(j).expect("j divides every exponent");
        let w = Witness::PurePowerSite {
            power,
            m,
            degree: j,
        };
        return Ok(SiteVerdict::structural(
            Verdict::Yes,
            SiteCase::PurePowerPossibility2,
            Some(w),
        ));
    }
    consult_oracle(p, qs, cfg, SiteCase::PurePowerPossibility2)
}

impl<F: Field> Witness<F> {
    /// Re-checks the witness against the inputs. Oracle transcripts for
    /// irreducible pencils are re-checked by rerunning the oracle on the
    /// recorded specialization.
    pub fn verify(
        &self,
        p: &Poly<F>,
        qs: &[Monomial],
        cfg: &OracleConfig,
    ) -> Result<bool, ClassifyError> {
        let deg_p = p.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(match self {
            Witness::Frobenius { characteristic } => {
                *characteristic == p.field().characteristic()
                    && all_pth_powers(qs, *characteristic)
                    && p.in_frobenius_subring()?
            }
            Witness::MonomialPair { m1, m2, degree } => {
                let allowed: BTreeSet<Monomial> = (0..=*degree)
                    .map(|k| m1.pow(k).mul(&m2.pow(degree - k)))
                    .collect();
                let mut all: Vec<&Monomial> = qs.iter().collect();
                all.extend(p.support());
                *degree >= 2
                    && m1.coprime(m2)
                    && p.is_monomial()
                    && all.iter().all(|m| allowed.contains(*m))
                    && all.contains(&&m1.pow(*degree))
                    && all.contains(&&m2.pow(*degree))
            }
            Witness::Homogeneous(dec) => {
                dec.reconstruct(p.field()) == *p
                    && dec.is_maximal()
                    && dec.m1.degree().max(dec.m2.degree()) < deg_p
                    && {
                        let site = homogeneous_site_monomials(dec, deg_p)?;
                        qs.iter().all(|q| site.contains(q))
                    }
            }
            Witness::PurePowerSite { power, m, degree } => {
                power.verify(p)
                    && *degree >= 2
                    && power.exponent % degree == 0
                    && qs.len() == 1
                    && qs[0] == m.pow(*degree)
            }
            Witness::Oracle(t) => {
                let Some(fp) = to_finite(p) else {
                    return Ok(false);
                };
                match t.witness_polynomial(&fp, qs) {
                    Some(f) => {
                        let f = f?;
                        let relaxed = OracleConfig {
                            max_field_size: t.field.size(),
                            ..*cfg
                        };
                        f.total_degree() == Some(deg_p) && abs_irreducible(&f, &relaxed)?
                    }
                    None => t.reducible_values.len() as u64 >= t.trials_per_level,
                }
            }
        })
    }
}

/// Hypotheses of the single-monomial and multi-monomial irreducibility
/// results, each recomputable from the inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub degrees_ok: bool,
    pub relatively_prime: bool,
    /// The monomials of `P` and all `Q_i` lie on one line.
    pub collinear_with_p: bool,
    /// Characteristic zero, or some member of `P, Q_1, ..., Q_l` is not a
    /// `p`-th power.
    pub some_not_pth_power: bool,
    /// Some `Q_i` is a pure power.
    #[serde(rename = "Q_pure_power")]
    pub q_pure_power: bool,
}

impl HypothesisReport {
    /// All hypotheses for a single monomial hold.
    pub fn passes_typical(&self) -> bool {
        self.degrees_ok && self.relatively_prime && !self.collinear_with_p && !self.q_pure_power
    }

    /// All hypotheses for two or more monomials hold.
    pub fn passes_typical2(&self) -> bool {
        self.degrees_ok
            && self.relatively_prime
            && !self.collinear_with_p
            && self.some_not_pth_power
    }
}

fn hypotheses<F: Field>(p: &Poly<F>, qs: &[Monomial]) -> Result<HypothesisReport, ClassifyError> {
    let d = p.total_degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(ClassifyError::Precondition("P must be non-constant".into()));
    }
    if qs.iter().any(|q| q.nvars() != p.nvars()) {
        return Err(ClassifyError::Precondition(
            "monomial arity differs from the ring".into(),
        ));
    }
    let char_p = p.field().characteristic();
    let some_not_pth_power =
        char_p == 0 || !all_pth_powers(qs, char_p) || !p.in_frobenius_subring()?;
    Ok(HypothesisReport {
        degrees_ok: qs.iter().all(|q| q.degree() <= d),
        relatively_prime: p.set_relatively_prime(qs)?,
        collinear_with_p: joint_line_test(p, qs)?,
        some_not_pth_power,
        q_pure_power: qs.iter().any(is_perfect_power),
    })
}

/// Hypotheses for `P + l Q` with a single monomial `Q`.
pub fn check_theorem_typical<F: Field>(
    p: &Poly<F>,
    q: &Monomial,
) -> Result<HypothesisReport, ClassifyError> {
    hypotheses(p, std::slice::from_ref(q))
}

/// Hypotheses for `P + l1 Q1 + ... + ll Ql` with `l >= 2`.
pub fn check_theorem_typical2<F: Field>(
    p: &Poly<F>,
    qs: &[Monomial],
) -> Result<HypothesisReport, ClassifyError> {
    if qs.len() < 2 {
        return Err(ClassifyError::Precondition(
            "at least two monomials are needed".into(),
        ));
    }
    hypotheses(p, qs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{build_extension, Rationals};
    use crate::poly::test_support::poly;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    fn cfg() -> OracleConfig {
        OracleConfig {
            max_total_degree: 12,
            max_field_size: 1 << 12,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn monomial_homogeneous_case() {
        let q = Rationals;
        let p = poly(&q, &[(1, &[2, 0])]);
        let v = classify_site(&p, &[m(&[0, 2])], &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);
        assert_eq!(v.case, SiteCase::MonomialCaseHomogeneous);
        let Some(Witness::MonomialPair { m1, m2, degree }) = &v.witness else {
            panic!("{v:?}");
        };
        let pair: BTreeSet<Monomial> = [m1.clone(), m2.clone()].into();
        assert_eq!(pair, [m(&[1, 0]), m(&[0, 1])].into());
        assert_eq!(*degree, 2);
        assert!(v
            .witness
            .unwrap()
            .verify(&p, &[m(&[0, 2])], &cfg())
            .unwrap());

        let v = classify_site(&p, &[m(&[0, 1])], &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        let p = poly(&q, &[(1, &[2, 4])]);
        assert!(classify_site(&p, &[m(&[0, 0])], &cfg()).unwrap().is_site());
    }

    #[test]
    fn monomial_char_p_case() {
        let f2 = build_extension(2, 1).unwrap();
        let p = poly(&f2, &[(1, &[2, 0])]);
        let v = classify_site(&p, &[m(&[0, 2]), m(&[0, 0])], &cfg()).unwrap();
        assert_eq!(v.case, SiteCase::MonomialCaseCharP);
        let q = Rationals;
        let p = poly(&q, &[(1, &[2, 0])]);
        assert!(!classify_site(&p, &[m(&[0, 2]), m(&[0, 0])], &cfg())
            .unwrap()
            .is_site());
    }

    #[test]
    fn cusp_cube_sites() {
        let q = Rationals;
        let p = poly(
            &q,
            &[(1, &[6, 0]), (-3, &[4, 3]), (3, &[2, 6]), (-1, &[0, 9])],
        );
        let qs = [m(&[4, 3]), m(&[0, 9])];
        let v = classify_site(&p, &qs, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);
        assert_eq!(v.case, SiteCase::HomogeneousCase);
        assert!(v.witness.unwrap().verify(&p, &qs, &cfg()).unwrap());
        for mono in [[0, 0], [3, 0], [0, 3], [3, 3], [6, 3]] {
            let v = classify_site(&p, &[m(&mono)], &cfg()).unwrap();
            assert!(v.is_site(), "{mono:?}");
            assert!(v.witness.unwrap().verify(&p, &[m(&mono)], &cfg()).unwrap());
        }
        assert!(!classify_site(&p, &[m(&[3, 0]), m(&[0, 3])], &cfg())
            .unwrap()
            .is_site());
        let f3 = build_extension(3, 1).unwrap();
        let p3 = poly(
            &f3,
            &[(1, &[6, 0]), (-3, &[4, 3]), (3, &[2, 6]), (-1, &[0, 9])],
        );
        let v = classify_site(&p3, &[m(&[3, 0]), m(&[0, 3])], &cfg()).unwrap();
        assert_eq!(v.case, SiteCase::PurePowerPossibility3);
    }

    #[test]
    fn square_times_line_has_extra_site() {
        let f7 = build_extension(7, 1).unwrap();
        let p = poly(&f7, &[(4, &[4, 6]), (-4, &[8, 3]), (1, &[12, 0])]);
        let v = classify_site(&p, &[m(&[0, 9])], &cfg()).unwrap();
        // Also homogeneous in x^4 and y^3, so the structural path settles it.
        assert_eq!(v.verdict, Verdict::Yes);
        assert_eq!(v.case, SiteCase::HomogeneousCase);
        assert!(v
            .witness
            .unwrap()
            .verify(&p, &[m(&[0, 9])], &cfg())
            .unwrap());
        let t = generic_irreducibility(&p, &[m(&[0, 9])], &cfg()).unwrap();
        assert!(!t.generically_irreducible);
    }

    #[test]
    fn typical_polynomial_is_not_a_site() {
        let f7 = build_extension(7, 1).unwrap();
        let p = poly(&f7, &[(1, &[3, 0]), (1, &[0, 3]), (1, &[1, 1])]);
        let v = classify_site(&p, &[m(&[1, 0])], &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.method, Method::Structural);
        let v = classify_site(&p, &[m(&[0, 0])], &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.method, Method::Oracle);
        assert!(v
            .witness
            .unwrap()
            .verify(&p, &[m(&[0, 0])], &cfg())
            .unwrap());
        let q = Rationals;
        let pq = poly(&q, &[(1, &[3, 0]), (1, &[0, 3]), (1, &[1, 1])]);
        assert_eq!(
            classify_site(&pq, &[m(&[0, 0])], &cfg()),
            Err(ClassifyError::NeedsFiniteField)
        );
    }

    #[test]
    fn preconditions() {
        let q = Rationals;
        let p = poly(&q, &[(1, &[2, 1]), (1, &[0, 1])]);
        for qs in [
            vec![],
            vec![m(&[0, 1])],
            vec![m(&[4, 0])],
            vec![m(&[0, 0]), m(&[0, 0])],
        ] {
            assert!(matches!(
                classify_site(&p, &qs, &cfg()),
                Err(ClassifyError::Precondition(_))
            ));
        }
    }

    #[test]
    fn hypothesis_reports() {
        let q = Rationals;
        let p = poly(&q, &[(1, &[3, 0]), (1, &[0, 3]), (1, &[1, 1])]);
        assert!(check_theorem_typical(&p, &m(&[1, 0]))
            .unwrap()
            .passes_typical());
        let r = check_theorem_typical(&p, &m(&[2, 0])).unwrap();
        assert!(r.q_pure_power && !r.passes_typical());
        let h = poly(&q, &[(1, &[2, 0]), (1, &[1, 1]), (1, &[0, 2])]);
        let r = check_theorem_typical(&h, &m(&[1, 1])).unwrap();
        assert!(r.collinear_with_p && !r.passes_typical());

        let r = check_theorem_typical2(&p, &[m(&[1, 0]), m(&[0, 1])]).unwrap();
        assert!(r.passes_typical2());
        let circle = poly(&q, &[(1, &[2, 0]), (1, &[0, 2])]);
        let r = check_theorem_typical2(&circle, &[m(&[2, 0]), m(&[0, 2])]).unwrap();
        assert!(r.collinear_with_p);
        let f2 = build_extension(2, 1).unwrap();
        let c2 = poly(&f2, &[(1, &[2, 0]), (1, &[0, 2])]);
        let r = check_theorem_typical2(&c2, &[m(&[4, 0]), m(&[0, 4])]).unwrap();
        assert!(!r.some_not_pth_power && !r.passes_typical2());
    }

    #[test]
    fn passing_hypotheses_imply_no() {
        let f5 = build_extension(5, 1).unwrap();
        let p = poly(
            &f5,
            &[(1, &[3, 0]), (2, &[0, 2]), (1, &[1, 0]), (3, &[0, 0])],
        );
        for q in [m(&[1, 0]), m(&[0, 1]), m(&[1, 1]), m(&[2, 1])] {
            let r = check_theorem_typical(&p, &q).unwrap();
            assert!(r.passes_typical(), "{q:?}");
            assert!(!classify_site(&p, &[q], &cfg()).unwrap().is_site());
        }
    }
}
