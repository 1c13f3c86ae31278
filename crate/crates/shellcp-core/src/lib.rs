//! Core numerics for the thermal Casimir-Polder interaction of an atom with
//! an infinitely thin plasma spherical shell: exact Matsubara mode sums, the
//! equivalent zero-temperature + thermal decomposition, asymptotic regime
//! laws, and the entropy with its sign analysis.

pub mod abel_plana;
pub mod asymptotics;
pub mod constants;
pub mod entropy;
pub mod error;
pub mod matsubara;
pub mod model;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
