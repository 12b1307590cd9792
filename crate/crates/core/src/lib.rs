//! Reducibility monomial sites: for a polynomial `P` and monomials
//! `Q_1, ..., Q_l`, decide whether `P + l1 Q1 + ... + ll Ql` stays reducible
//! for generic values of the parameters, and count the exceptional values.

pub mod classify;
pub mod decomp;
pub mod fields;
pub mod newton;
pub mod poly;
pub mod spectrum;
pub mod textio;

use serde::Serialize;
use thiserror::Error;

pub use classify::{classify_site, ClassifyError, SiteVerdict};
pub use fields::{Field, FieldError, FiniteField, Fq, Rationals};
pub use poly::{Monomial, Poly, PolyError};
pub use spectrum::{OracleConfig, SpectrumError};
pub use textio::{format_poly, parse_poly, Ring, TextError};

/// Coarse classification of failures, for exit codes and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    Precondition,
    InstanceTooLarge,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Decomp(#[from] decomp::DecompError),
    #[error(transparent)]
    Newton(#[from] newton::NewtonError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Text(_) => ErrorKind::Input,
            Error::Field(e) => field_kind(e),
            Error::Poly(e) => poly_kind(e),
            Error::Decomp(_) | Error::Newton(_) => ErrorKind::Precondition,
            Error::Spectrum(e) => spectrum_kind(e),
            Error::Classify(e) => match e {
                ClassifyError::Precondition(_) | ClassifyError::NeedsFiniteField => {
                    ErrorKind::Precondition
                }
                ClassifyError::Spectrum(e) => spectrum_kind(e),
                ClassifyError::Poly(e) => poly_kind(e),
                ClassifyError::Decomp(_) => ErrorKind::Precondition,
            },
        }
    }
}

fn field_kind(e: &FieldError) -> ErrorKind {
    match e {
        FieldError::InstanceTooLarge { .. } | FieldError::DegreeTooLarge(_) => {
            ErrorKind::InstanceTooLarge
        }
        FieldError::NonPrime(_) | FieldError::Unsupported(_) | FieldError::NoEmbedding { .. } => {
            ErrorKind::Input
        }
        FieldError::NotFinite => ErrorKind::Precondition,
    }
}

fn poly_kind(e: &PolyError) -> ErrorKind {
    match e {
        PolyError::Field(e) => field_kind(e),
        PolyError::InternalBound(_) => ErrorKind::Internal,
        _ => ErrorKind::Precondition,
    }
}

fn spectrum_kind(e: &SpectrumError) -> ErrorKind {
    match e {
        SpectrumError::InstanceTooLarge(_) | SpectrumError::FieldTooSmall(_) => {
            ErrorKind::InstanceTooLarge
        }
        SpectrumError::NotFinite | SpectrumError::Precondition(_) => ErrorKind::Precondition,
        SpectrumError::Poly(e) => poly_kind(e),
        SpectrumError::Field(e) => field_kind(e),
    }
}
