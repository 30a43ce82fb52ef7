//! Exact engine for stable graphs and the field theories built on them.
//!
//! The crate provides, entirely over exact rational arithmetic:
//!
//! * enumeration and canonicalization of stable graphs (genus-marked
//!   multigraphs with external legs), unlabelled and labelled;
//! * the linear edge-cutting/edge-adding operators `K`, `∂`, `γ`, `D`
//!   together with free-energy graph sums and their quadratic recursions;
//! * Fourier-like transforms `Φ_ε` of graphs, the duality involution and
//!   dual free energies;
//! * Feynman-rule realizations as sparse polynomials, propagator-shift
//!   transformations `S_κ` on the space of field theories, and a Wick
//!   pairing oracle for the formal Gaussian integral representation;
//! * the holomorphic-anomaly realization: a graded differential ring with
//!   a covariant derivation, non-holomorphic amplitudes and their
//!   holomorphic limits.
//!
//! Graph sums are generic over the coefficient scalar through the
//! [`Coeff`] trait (built on `num-traits`); the concrete scalars used in
//! practice are exact rationals and sparse polynomials over them, named by
//! the type aliases below. Floating point is deliberately not supported.

pub mod canon;
pub mod coeff;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod hae;
pub mod ops;
pub mod poly;
pub mod rational;
pub mod realize;
pub mod sum;
pub mod sym;
pub mod transform;
pub mod verify;
pub mod wick;

pub use coeff::Coeff;
pub use error::Error;
pub use graph::{GraphBuilder, HalfEdge, StableGraph};
pub use sum::GraphSum;

/// Exact rational scalar used everywhere.
pub type Rat = num_rational::BigRational;

/// Sparse polynomial in realization symbols (`F[g,n]`, `kappa`, scalars).
pub type Poly = poly::MPoly<sym::Sym>;

/// Element of the graded differential ring of the anomaly-equation module.
pub type DiffPoly = poly::MPoly<hae::HSym>;

/// Graph sum with rational coefficients.
pub type QSum = GraphSum<Rat>;

/// Graph sum with polynomial coefficients (formal `ε`, `κ` parameters).
pub type PolySum = GraphSum<Poly>;
