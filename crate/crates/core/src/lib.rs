//! Exact classification of links of weighted homogeneous hypersurface
//! singularities in four variables.
//!
//! Given a weighted homogeneous polynomial (or just its weights and degree),
//! the pipeline checks quasismoothness and well-formedness, extracts the branch
//! divisor and its genera, computes b₂ of the link with the Milnor–Orlik
//! divisor calculus, assembles H₂ and reports the sign of d − Σwᵢ together
//! with the resulting diffeomorphism type.

pub mod ambient;
pub mod classify;
pub mod error;
pub mod families;
pub mod orlik;
pub mod polyspec;
pub mod quasismooth;
pub mod search;
pub mod topology;

pub use error::{ErrorClass, LinkError, Result};
pub use polyspec::{parse_polynomial, Monomial, WeightSystem, WeightedPolynomial};
