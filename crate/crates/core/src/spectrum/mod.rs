//! Specializations of pencils `P + l1 Q1 + ... + ll Ql` over finite fields.

mod oracle;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{Field, FieldDescriptor, FieldError, FiniteField, Fq};
use crate::poly::{Monomial, Poly, PolyError};

pub use oracle::OracleStats;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("operation needs a finite field")]
    NotFinite,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Limits checked before any oracle work starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub max_total_degree: u32,
    pub max_variables: usize,
    /// Largest coefficient or sweep field accepted.
    pub max_field_size: u64,
    /// Largest prime extension degree searched for conjugate factors;
    /// `None` means the degree of the polynomial.
    pub extension_sweep_cap: Option<u32>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_total_degree: 6,
            max_variables: 3,
            max_field_size: 81,
            extension_sweep_cap: None,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), SpectrumError> {
        if self.max_total_degree == 0
            || self.max_variables == 0
            || self.max_field_size == 0
            || self.extension_sweep_cap == Some(0)
        {
            return Err(SpectrumError::Precondition(
                "oracle limits must be positive".into(),
            ));
        }
        Ok(())
    }

    fn cap(&self, d: u32) -> u32 {
        self.extension_sweep_cap.unwrap_or(d)
    }

    fn check_shape<F: Field>(&self, p: &Poly<F>) -> Result<u32, SpectrumError> {
        self.validate()?;
        let d = p.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        if d > self.max_total_degree {
            return Err(SpectrumError::InstanceTooLarge(format!(
                "degree {d} exceeds the limit {}",
                self.max_total_degree
            )));
        }
        if p.nvars() > self.max_variables {
            return Err(SpectrumError::InstanceTooLarge(format!(
                "{} variables exceed the limit {}",
                p.nvars(),
                self.max_variables
            )));
        }
        Ok(d)
    }

    fn check_field(&self, size: u64) -> Result<(), SpectrumError> {
        if size > self.max_field_size {
            return Err(SpectrumError::InstanceTooLarge(format!(
                "field of size {size} exceeds the limit {}",
                self.max_field_size
            )));
        }
        Ok(())
    }
}

/// Coefficients moved into the finite-field representation, when the
/// polynomial lives over a finite field.
pub fn to_finite<F: Field>(p: &Poly<F>) -> Option<Poly<FiniteField>> {
    let ff = p.field().as_finite()?;
    Some(p.map_field(ff, |c| p.field().to_fq(c).expect("finite field element")))
}

/// Whether `f` is irreducible over the algebraic closure of its field.
pub fn abs_irreducible(f: &Poly<FiniteField>, cfg: &OracleConfig) -> Result<bool, SpectrumError> {
    let mut stats = OracleStats::default();
    abs_irreducible_with_stats(f, cfg, &mut stats)
}

pub fn abs_irreducible_with_stats(
    f: &Poly<FiniteField>,
    cfg: &OracleConfig,
    stats: &mut OracleStats,
) -> Result<bool, SpectrumError> {
    let d = cfg.check_shape(f)?;
    cfg.check_field(f.field().size())?;
    oracle::absolutely_irreducible(f, cfg.cap(d), stats)
}

fn check_pencil(p: &Poly<FiniteField>, qs: &[Monomial]) -> Result<u32, SpectrumError> {
    let d = p.total_degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(SpectrumError::Precondition("P must be non-constant".into()));
    }
    for q in qs {
        if q.nvars() != p.nvars() {
            return Err(SpectrumError::Precondition(
                "monomial arity differs from the ring".into(),
            ));
        }
        if q.degree() > d {
            return Err(SpectrumError::Precondition(format!(
                "deg Q = {} exceeds deg P = {d}",
                q.degree()
            )));
        }
    }
    if !qs.is_empty() && !p.set_relatively_prime(qs)? {
        return Err(SpectrumError::Precondition(
            "P and the monomials share a monomial factor".into(),
        ));
    }
    Ok(d)
}

fn with_term(p: &Poly<FiniteField>, q: &Monomial, c: Fq) -> Poly<FiniteField> {
    let mut out = p.clone();
    out.add_term(q.clone(), c);
    out
}

/// Reducible specializations `P + c*Q` over a finite field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub field: FiniteField,
    pub degree: u32,
    /// Values `c` with `P + c*Q` reducible over the closure, ascending.
    pub values: Vec<Fq>,
    /// Values where the degree drops; not classified.
    pub degree_drop_exclusions: Vec<Fq>,
    /// `deg(P)^2`.
    pub bound: u64,
    pub bound_satisfied: bool,
    pub stats: OracleStats,
}

impl SpectrumReport {
    pub fn descriptor(&self) -> FieldDescriptor {
        self.field.descriptor()
    }
}

enum Sweep {
    Dropped,
    Reducible,
    Irreducible,
}

/// Classifies every `c` in `sweep` by the absolute irreducibility of `P + c*Q`.
pub fn compute_spectrum(
    p: &Poly<FiniteField>,
    q: &Monomial,
    sweep: &FiniteField,
    cfg: &OracleConfig,
) -> Result<SpectrumReport, SpectrumError> {
    let d = cfg.check_shape(p)?;
    check_pencil(p, std::slice::from_ref(q))?;
    cfg.check_field(sweep.size())?;
    let emb = p.field().embedding_into(sweep)?;
    let p = p.map_field(sweep, |c| emb.apply(*c));
    let cap = cfg.cap(d);
    let values: Vec<Fq> = sweep.elements().collect();
    let outcomes: Vec<Result<(Sweep, OracleStats), SpectrumError>> = values
        .par_iter()
        .map(|&c| {
            let f = with_term(&p, q, c);
            if f.total_degree() != Some(d) {
                return Ok((Sweep::Dropped, OracleStats::default()));
            }
            let mut stats = OracleStats::default();
            let irreducible = oracle::absolutely_irreducible(&f, cap, &mut stats)?;
            let kind = if irreducible {
                Sweep::Irreducible
            } else {
                Sweep::Reducible
            };
            Ok((kind, stats))
        })
        .collect();

    let mut report = SpectrumReport {
        field: sweep.clone(),
        degree: d,
        values: Vec::new(),
        degree_drop_exclusions: Vec::new(),
        bound: u64::from(d) * u64::from(d),
        bound_satisfied: false,
        stats: OracleStats::default(),
    };
    for (c, outcome) in values.into_iter().zip(outcomes) {
        let (kind, stats) = outcome?;
        report.stats += stats;
        match kind {
            Sweep::Dropped => report.degree_drop_exclusions.push(c),
            Sweep::Reducible => report.values.push(c),
            Sweep::Irreducible => {}
        }
    }
    report.bound_satisfied = (report.values.len() as u64) < report.bound;
    Ok(report)
}

/// `|values| < deg(P)^2`, or `|values| < deg(P)` when `Q = 1` and `P` is not
/// composed.
pub fn verify_bound(report: &SpectrumReport, constant_q: bool) -> bool {
    let n = report.values.len() as u64;
    if constant_q {
        n < u64::from(report.degree)
    } else {
        n < report.bound
    }
}

/// Record of a generic irreducibility decision.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericTranscript {
    pub generically_irreducible: bool,
    /// Field the trial values were drawn from.
    pub field: FiniteField,
    /// Values tried per level: `deg(P)^2`.
    pub trials_per_level: u64,
    /// `(c_l, ..., c_1)` with `P + sum c_i Q_i` absolutely irreducible and of
    /// full degree, when one was found.
    pub witness: Option<Vec<Fq>>,
    /// Values of the last parameter that led to reducible pencils, in the
    /// order they were tried.
    pub reducible_values: Vec<Fq>,
    /// Degree-dropping values of the last parameter that were skipped.
    pub excluded_values: Vec<Fq>,
    pub stats: OracleStats,
}

impl GenericTranscript {
    /// `P + sum c_i Q_i` for the witness values, over the trial field.
    pub fn witness_polynomial(
        &self,
        p: &Poly<FiniteField>,
        qs: &[Monomial],
    ) -> Option<Result<Poly<FiniteField>, SpectrumError>> {
        let path = self.witness.as_ref()?;
        Some((|| {
            let emb = p.field().embedding_into(&self.field)?;
            let mut f = p.map_field(&self.field, |c| emb.apply(*c));
            for (q, c) in qs.iter().rev().zip(path) {
                f.add_term(q.clone(), *c);
            }
            Ok(f)
        })())
    }
}

/// Decides whether `P + l1 Q1 + ... + ll Ql` is irreducible over the closure
/// of the rational function field, by trying `deg(P)^2` degree-preserving
/// values for the last parameter and recursing.
pub fn generic_irreducibility(
    p: &Poly<FiniteField>,
    qs: &[Monomial],
    cfg: &OracleConfig,
) -> Result<GenericTranscript, SpectrumError> {
    let d = cfg.check_shape(p)?;
    check_pencil(p, qs)?;
    let base = p.field();
    cfg.check_field(base.size())?;
    let need = u64::from(d) * u64::from(d) + 1;
    let mut k = 1u32;
    while base.size().saturating_pow(k) <= need {
        k += 1;
    }
    let (field, emb) = base.extension(k)?;
    let p = p.map_field(&field, |c| emb.apply(*c));
    let trials = u64::from(d) * u64::from(d);
    let mut run = Run {
        field: &field,
        trials,
        cap: cfg.cap(d),
        stats: OracleStats::default(),
    };
    let mut reducible = Vec::new();
    let mut excluded = Vec::new();
    let witness = run.search(&p, qs, Some((&mut reducible, &mut excluded)))?;
    Ok(GenericTranscript {
        generically_irreducible: witness.is_some(),
        field: field.clone(),
        trials_per_level: trials,
        witness,
        reducible_values: reducible,
        excluded_values: excluded,
        stats: run.stats,
    })
}

struct Run<'a> {
    field: &'a FiniteField,
    trials: u64,
    cap: u32,
    stats: OracleStats,
}

impl Run<'_> {
    fn search(
        &mut self,
        p: &Poly<FiniteField>,
        qs: &[Monomial],
        mut record: Option<(&mut Vec<Fq>, &mut Vec<Fq>)>,
    ) -> Result<Option<Vec<Fq>>, SpectrumError> {
        let Some((q, rest)) = qs.split_last() else {
            let irreducible = oracle::absolutely_irreducible(p, self.cap, &mut self.stats)?;
            return Ok(irreducible.then(Vec::new));
        };
        let d = p.total_degree();
        let mut tried = 0u64;
        for c in self.field.elements() {
            if tried == self.trials {
                return Ok(None);
            }
            let f = with_term(p, q, c);
            if f.total_degree() != d {
                if let Some((_, excluded)) = record.as_mut() {
                    excluded.push(c);
                }
                continue;
            }
            tried += 1;
            if let Some(mut path) = self.search(&f, rest, None)? {
                path.insert(0, c);
                return Ok(Some(path));
            }
            if let Some((reducible, _)) = record.as_mut() {
                reducible.push(c);
            }
        }
        if tried < self.trials {
            return Err(SpectrumError::FieldTooSmall(format!(
                "only {tried} degree-preserving values in {}",
                self.field.descriptor()
            )));
        }
        Ok(None)
    }
}
