//! Exact computational toolkit for twisted multiloop algebras
//! `(C[t1^±1, ..., tn^±1] ⊗ g)^Δ`, the universal central extension cocycle
//! `ξ ∧ η ↦ [κ(ξ, dη)]` with values in Kähler differentials modulo exact
//! forms, brute-force weight-graded second cohomology, and floating-point
//! density demonstrations for trigonometric and Bernstein approximation.

pub mod cli;
pub mod cocycle;
pub mod cohomology;
pub mod density;
pub mod eqmap;
pub mod error;
pub mod exactnum;
pub mod laurent;
pub mod liealg;

pub use error::{Error, Result};
