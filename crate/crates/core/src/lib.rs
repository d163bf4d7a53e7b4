//! Exact root-system combinatorics for the low-degree cohomology vanishing
//! invariants of simple real Lie algebras.
//!
//! Every quantity here is a count over classified roots, so the library works
//! purely with integer root coordinates and exact rationals:
//!
//! * [`rootsys`] builds complex root systems, coroots and parabolic splits.
//! * [`realform`] loads the catalog of real forms (Vogan and Satake data).
//! * [`cartans`] models θ-stable Cartan subalgebras and Cayley transforms.
//! * [`invariants`] computes `r'_g`, `r_g`, `r_{g,μ}` and Kostant degrees.
//! * [`langlands`] decides cone membership and the Langlands decomposition.
//! * [`verify`] runs the table and lemma checks and emits reports.
//!
//! No floating point is used anywhere.

// matrix code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod cartans;
pub mod error;
pub mod fm;
pub mod invariants;
pub mod langlands;
pub mod linalg;
pub mod realform;
pub mod rootsys;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Q = num_rational::Ratio<i64>;

/// Shorthand for an integer rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}
