//! Exact coefficient fields: prime fields, their extensions, and the rationals.
//!
//! Everything above this module is written against the [`Field`] trait. Field
//! values are cheap handles; the element type carries no reference to its
//! field, so every operation goes through the field object.

pub(crate) mod dense;
mod finite;
mod rational;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use finite::{build_extension, Embedding, FiniteField, Fq, MAX_PUBLIC_EXTENSION_DEGREE};
pub use rational::Rationals;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} exceeds the supported maximum")]
    DegreeTooLarge(u32),
    #[error("operation needs a finite field")]
    NotFinite,
    #[error("root extraction in a field of size {size} is out of reach for exponent {exponent}")]
    InstanceTooLarge { size: u64, exponent: u64 },
    #[error("field parameters out of range: {0}")]
    Unsupported(String),
    #[error("{sub} does not embed into {sup}")]
    NoEmbedding { sub: String, sup: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Prime,
    Extension,
    Rational,
}

/// Serializable identity of a coefficient field.
///
/// The modulus is little-endian (constant term first) and monic. Prime fields
/// carry the degree-one modulus `t`, the rationals carry an empty list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

impl FieldDescriptor {
    pub fn rational() -> Self {
        FieldDescriptor {
            kind: FieldKind::Rational,
            p: 0,
            m: 1,
            modulus: Vec::new(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// `p^m` for finite fields, `None` for the rationals.
    pub fn cardinality(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rational => None,
            _ => Some(self.p.pow(self.m)),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime => write!(f, "F_{}", self.p),
            FieldKind::Extension => write!(f, "F_{}^{}", self.p, self.m),
        }
    }
}

/// An exact field with a runtime descriptor.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn descriptor(&self) -> FieldDescriptor;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn cardinality(&self) -> Option<u64>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// `num/den`, or `None` when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;

    /// The canonical `e`-th root of `a`, if `a` has one in the field.
    ///
    /// Finite fields return the root with the least encoding; the rationals
    /// return the positive root for even `e`.
    fn nth_root(&self, a: &Self::Elem, e: u64) -> Result<Option<Self::Elem>, FieldError>;
    /// The unique `r` with `r^p = a` (Frobenius is bijective on finite fields).
    fn pth_root(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Canonical textual form, parseable back by the polynomial grammar.
    fn format_elem(&self, a: &Self::Elem) -> String;
    /// Whether the canonical text begins with a minus sign.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    /// Access to the finite-field view used by the specialization oracle.
    fn as_finite(&self) -> Option<&FiniteField> {
        None
    }
    fn to_fq(&self, _a: &Self::Elem) -> Option<Fq> {
        None
    }
    /// The element written `t` in polynomial text, for proper extensions.
    fn adjoined_generator(&self) -> Option<Self::Elem> {
        None
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_helpers() {
        assert!(is_prime(2) && is_prime(7) && is_prime(31));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(25));
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(624), vec![2, 3, 13]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }

    #[test]
    fn descriptor_json_shape() {
        let fd = FieldDescriptor {
            kind: FieldKind::Extension,
            p: 5,
            m: 2,
            modulus: vec![2, 1, 1],
        };
        let s = serde_json::to_string(&fd).unwrap();
        assert_eq!(s, r#"{"kind":"extension","p":5,"m":2,"modulus":[2,1,1]}"#);
        let back: FieldDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fd);
        assert_eq!(fd.to_string(), "F_5^2");
        assert_eq!(fd.cardinality(), Some(25));
    }
}
