//! Exact computation of reduced trace maps for polynomial algebras.
//!
//! The trace sends polynomial differential forms into the abelianisation of
//! the minimal resolution R of k[x_1..x_N]. Several independent routes are
//! implemented here and cross-checked against one another: a Chern–Simons
//! slot sum, a closed combinatorial formula, differential operators in low
//! degree, an A-infinity (Merkulov) construction with planar trees, and a
//! cyclic-chain lift.

pub mod error;
pub mod gcalg;
pub mod linalg;
pub mod derham;
pub mod resolution;
pub mod trace;
pub mod cyclic;
pub mod ainfty;
pub mod cartan;
pub mod verify;

pub use error::{Error, Result};
pub use gcalg::{AlgebraElement, Gen, Monomial, Rational};
pub use derham::Form;
