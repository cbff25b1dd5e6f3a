//! Exact-arithmetic equilibrium enumeration for bimatrix games of rank one.
//!
//! The crate is `no_std` (it needs `alloc`). Every quantity is an exact
//! [`Rational`]; there is no floating point anywhere.
//!
//! The main entry point is [`parametric::enumerate_all`], which sweeps the
//! parameter `ξ = cᵀy` of a rank-one game `A + B = b·cᵀ` and reports every
//! equilibrium of a non-degenerate game. Two independent routes are provided
//! for cross-checking: [`oracle::support_enumeration`] and
//! [`polytope::equilibria_by_labels`]. The [`lemke_howson`] module follows
//! Lemke–Howson paths on the labelled vertex graphs.

#![no_std]

extern crate alloc;

mod error;
pub mod game;
pub mod lemke_howson;
pub mod linalg;
pub mod oracle;
pub mod parametric;
pub mod polytope;

pub use error::{Degeneracy, Error, Result};
pub use game::{
    generate_kt, BimatrixGame, EquilibriumPoint, GameClass, MixedStrategyPair,
    RankOneFactorization, Transform,
};
pub use linalg::{frac, int, parse_rational, AffineRVector, QuadraticR, RMatrix, Rational};
