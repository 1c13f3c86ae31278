//! Physical constants (CODATA 2018 exact values where defined).
//!
//! All formulas in this crate are evaluated in dimensionless form; these
//! constants appear only at the SI boundary, so they are collected here in
//! one table.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054571817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299792458.0;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380649e-23;
/// Electron volt, J (exact).
pub const EV: f64 = 1.602176634e-19;

/// hbar*c, J m — the combination most SI prefactors use.
pub const HBAR_C: f64 = HBAR * C;
