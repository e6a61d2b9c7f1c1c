//! Exact and numerical tools for power-sum counting problems, Weyl-type
//! exponential sums, and the discrete fractional integration operators
//! built from them.
//!
//! Module map:
//!
//! - [`arith`]: exact representation counts `r_{s,k}(l)` (schoolbook and
//!   NTT convolution), lattice mean values, diagonal counts.
//! - [`count`]: overflow-proof exact counters with a canonical byte
//!   encoding.
//! - [`expsums`]: complete and partial Weyl sums, classical bound
//!   audits, mean-value quadrature, minor-arc saving exponents.
//! - [`arcs`]: Dirichlet rational witnesses and the major/minor arc
//!   decomposition, with an exact disjointness audit.
//! - [`multiplier`]: the symbol of discrete fractional integration,
//!   its dyadic blocks, major-arc approximation, oscillatory-integral
//!   profile, theta-kernel Parseval checks, norm profiles.
//! - [`signal`]: the operator itself on finitely supported signals,
//!   norms, and the divergence witnesses that bound its mapping range.
//! - [`regions`]: the `(1/p, 1/q)` region predicates and the lambda
//!   threshold catalogue for every proof route.
//! - [`quad`], [`phase`], [`fit`], [`util`]: quadrature (Gauss-Legendre
//!   and Filon), exact phase reduction, log-log slope fits, pairwise
//!   summation.
//! - [`table_io`]: canonical binary and CSV serialization of count
//!   tables.

pub mod arcs;
pub mod arith;
pub mod count;
pub mod error;
pub mod expsums;
pub mod fit;
pub mod multiplier;
pub mod phase;
pub mod quad;
pub mod regions;
pub mod signal;
pub mod table_io;
pub mod util;

pub use count::Count;
pub use error::{Error, Result};
