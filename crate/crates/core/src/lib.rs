//! Exact computations for generalized moonshine: cyclotomic arithmetic, abelian
//! 3-cocycles on finite abelian groups, q-series of McKay–Thompson functions,
//! twisted characters and the root multiplicities of the associated Lie algebras.

pub mod abgrp;
pub mod bkm;
pub mod chars;
pub mod emcoh;
pub mod exact;
pub mod fps;
pub mod lattice;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("out of range: {0}")]
    Range(String),
}

pub use abgrp::{FiniteAbelianGroup, GroupElement, QuadraticFunction};
pub use exact::{Cyclotomic, UnityExponent};
