//! Exact computer algebra for Lie pairs: Bernoulli-twisted homogeneous-space actions,
//! the Jacobi–Bernoulli codifferential and its mapping-cone L∞ brackets, and the
//! differentials and morphisms of the two-coloured operads `HS∞`, `LP∞` and `LP½∞`.

pub mod error;
pub mod report;
pub mod scalars;
pub mod vector;

pub use error::{CoreError, Result};
pub use report::{ValidationReport, Violation};
pub use scalars::Scalar;
pub use vector::Vector;
pub mod conecomplex;
pub mod corpus;
pub mod formalfields;
pub mod jbtwist;
pub mod liecore;
pub mod operadengine;
