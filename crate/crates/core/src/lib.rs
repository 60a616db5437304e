//! A workbench for finite simplicial sets: horn lifting, fibration
//! classification, slice/join/twisted-arrow constructions, flatness via a
//! contractibility kernel, and marked simplicial sets with categorical
//! patterns.

pub mod category;
pub mod complex;
pub mod constructions;
pub mod corpus;
pub mod fibration;
pub mod flatness;
pub mod hom;
pub mod homology;
pub mod io;
pub mod patterns;
pub mod product;
pub mod realize;
pub mod simplex;

mod collapse;
mod map;
mod pi1;

pub use complex::{SimplicialSet, ValidationReport};
pub use map::{map_as_simplex, opposite_map, simplex_as_map, SimplicialMap};
pub use simplex::{SimplexForm, SimplexKey};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}
