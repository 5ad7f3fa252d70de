//! Exact and numerical verification of the perturbed-bubble energy expansion
//! for the boundary Yamabe problem in dimensions 6, 7 and 8.

pub mod bubble_functions;
pub mod curvature_model;
pub mod discrete_quotient;
pub mod energy_expansion;
pub mod error;
pub mod exact_integrals;
pub mod numeric;
pub mod quadrature_oracle;
pub mod sphere_moments;

pub use error::{Divergence, Error, Result};
