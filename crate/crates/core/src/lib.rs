//! Combinatorial toolkit for right-angled Coxeter groups and their
//! skew-field L²-Betti numbers.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`] finite abstract simplicial complexes, links, joins and the
//!   catalog of named complexes,
//! * [`subdivision`] edge subdivisions, relative barycentric subdivisions
//!   and replayable subdivision scripts,
//! * [`davis`] chambers, basic constructions over finite quotients and
//!   abelian p-covers,
//! * [`homology`] exact cellular homology over ℚ, 𝔽_p and ℤ,
//! * [`calculus`] the rule engine producing checkable vanishing certificates.

pub mod calculus;
pub mod chain;
pub mod complex;
pub mod davis;
pub mod error;
pub mod homology;
pub mod label;
pub mod rational;
pub mod subdivision;

pub use complex::{Simplex, SimplicialComplex};
pub use error::{Error, Result};
pub use label::VertexId;
