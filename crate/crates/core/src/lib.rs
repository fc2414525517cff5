//! Finite non-commutative n-ary Γ-semirings.
//!
//! A structure is a finite carrier `{0, .., m-1}` with a commutative addition
//! (identity `0`) and an n-ary operation `μ(x1, γ1, x2, …, γ(n-1), xn)`
//! parameterised by Γ-tuples. This crate enumerates such structures,
//! validates their axioms, computes ideal lattices, prime and Jacobson
//! radicals, Zariski-type spectra, slot modules and decompositions, and
//! audits the classical structure theorems on every instance it sees.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod classify;
pub mod decompose;
pub mod enumerate;
mod error;
pub mod hom;
pub mod ideals;
pub mod instances;
pub mod modreps;
pub mod quotient;
pub mod radicals;
pub mod spectra;
mod structure;
mod subset;
pub mod tuples;
mod validate;

pub use audit::{AuditEntry, Status};
pub use error::{Error, Result};
pub use hom::Homomorphism;
pub use quotient::{bourne_quotient, QuotientStructure};
pub use structure::{
    AdditionTable, AssocMode, Element, Gamma, GammaSemiring, MAX_ARITY, MAX_CARRIER,
};
pub use subset::{Elements, Subset};
pub use validate::{
    symmetry_profile, validate, validate_with, Axiom, Law, ValidationReport, Violation,
};
