//! Second-harmonic hyperpolarizabilities by time-ordered sum over states.
//!
//! Molecular level data ([`model`]) is expanded into state-sequence terms
//! ([`diagrams`]) and summed into the rank-3 tensor ([`beta`]) either with
//! full dipole moments or with fluctuation dipoles, where the ground-state
//! permanent moment is removed. [`radiation`] turns the tensor into a
//! photon-level amplitude and [`environment`] evaluates the static
//! corrections produced by neighbouring polar molecules.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod cli;
pub mod diagrams;
pub mod environment;
pub mod error;
pub mod model;
pub mod radiation;
pub mod summation;

pub use beta::{equivalence_report, evaluate_beta, symmetrize, BetaTensor, DampingConvention, EquivalenceReport};
pub use diagrams::{enumerate_orderings, enumerate_terms, term_count, Term, TimeOrdering};
pub use error::{Error, Result};
pub use model::{load_model, rotate_model, to_fluctuation, Constants, DipoleMatrix, MolecularModel, Representation};
