//! Exact Weyl group combinatorics for decomposing quotients of parabolic
//! Deligne–Lusztig varieties `X(I, wF)` by the unipotent radical of a
//! rational parabolic subgroup.
//!
//! The crate is layered bottom-up:
//!
//! - [`rootsys`]: finite crystallographic root systems built from Cartan data.
//! - [`weyl`]: Weyl group elements as root permutations, Bruhat order,
//!   parabolic reducedness and the diagram twist induced by Frobenius.
//! - [`cosets`]: minimal double-coset representatives and the subset `K_x`.
//! - [`deodhar`]: distinguished subexpressions, cell data, the piece
//!   emptiness test and an independent R-polynomial oracle.
//! - [`decomp`]: enumeration and classification of the pieces `X_x`.
//! - [`cohom`]: formal graded-cohomology bookkeeping for unipotent
//!   characters of type `B_n`.
//!
//! Simple indices are 0-based throughout the library. Front ends (the `dlq`
//! binary and the Python module) translate to the 1-based `t_1, …, t_n`.

pub mod cohom;
pub mod cosets;
pub mod decomp;
pub mod deodhar;
mod error;
pub mod poly;
pub mod rootsys;
pub mod weyl;

pub use error::{Error, Result};
pub use poly::Poly;
pub use rootsys::{CartanDatum, RootSystem};
pub use weyl::{Side, SimpleSubset, WeylElt, WeylGroup};
