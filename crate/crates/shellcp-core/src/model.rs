//! Physical parameter intake, reduction to the dimensionless variables the
//! formulas consume, effective temperature scales, and the atom
//! polarizability model.
//!
//! All internal numerics run on the dimensionless set {r, chi, Q, q_a, a,
//! tau, T/T_R}; SI conversion happens only at this boundary.

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Input description of one atom-near-shell configuration, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSystem {
    /// Shell radius R (m).
    pub radius_r: f64,
    /// Plasma wavenumber Omega (1/m); 0 means "no shell" reference.
    pub plasma_omega: f64,
    /// Atom transition angular frequency omega_a (rad/s).
    pub atom_omega_a: f64,
    /// Static polarizability alpha(0) (m^3).
    pub alpha0: f64,
    /// Atom-to-surface separation d (m).
    pub separation_d: f64,
    /// Temperature (K).
    pub temperature_t: f64,
}

impl PhysicalSystem {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            (self.radius_r, "radius_r"),
            (self.atom_omega_a, "atom_omega_a"),
            (self.alpha0, "alpha0"),
            (self.separation_d, "separation_d"),
        ];
        for (v, name) in pos {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain("PhysicalSystem", format!("{name} must be > 0")));
            }
        }
        if !(self.plasma_omega.is_finite() && self.plasma_omega >= 0.0) {
            return Err(Error::domain("PhysicalSystem", "plasma_omega must be >= 0"));
        }
        if !(self.temperature_t.is_finite() && self.temperature_t >= 0.0) {
            return Err(Error::domain("PhysicalSystem", "temperature_t must be >= 0"));
        }
        Ok(())
    }

    /// Same configuration at a different temperature.
    pub fn with_temperature(mut self, t: f64) -> Self {
        self.temperature_t = t;
        self
    }

    /// Same configuration at a different separation.
    pub fn with_separation(mut self, d: f64) -> Self {
        self.separation_d = d;
        self
    }
}

/// The reduced parameters every formula consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    /// r = d/R.
    pub r: f64,
    /// chi = 1 + r.
    pub chi: f64,
    /// Q = Omega * R.
    pub q: f64,
    /// q_a = omega_a R / c.
    pub q_a: f64,
    /// a = T_omega / T (infinite at T = 0).
    pub a: f64,
    /// tau = 4 pi k_B d T / (hbar c) = 2 r T/T_R.
    pub tau: f64,
    /// T / T_R.
    pub t_ratio_r: f64,
}

/// Effective temperature scales of the three lengths in the problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveTemperatures {
    /// T_omega = hbar omega_a / (2 pi k_B) (K).
    pub t_omega: f64,
    /// T_R = hbar c / (2 pi k_B R) (K).
    pub t_r: f64,
    /// T_d = hbar c / (2 pi k_B d) (K).
    pub t_d: f64,
}

/// Atom polarizability model on the imaginary frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarizability {
    /// Static value alpha(0) (m^3).
    pub alpha0: f64,
    /// Oscillator frequency omega_a (rad/s); unused in `Static` mode.
    pub omega_a: f64,
    pub mode: PolarizabilityMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizabilityMode {
    /// alpha(i xi) = alpha(0) / (1 + xi^2/omega_a^2).
    SingleOscillator,
    /// alpha(i xi) = alpha(0).
    Static,
}

impl Polarizability {
    pub fn single_oscillator(alpha0: f64, omega_a: f64) -> Self {
        Polarizability { alpha0, omega_a, mode: PolarizabilityMode::SingleOscillator }
    }

    pub fn static_mode(alpha0: f64) -> Self {
        Polarizability { alpha0, omega_a: 0.0, mode: PolarizabilityMode::Static }
    }

    /// Dimensionless ratio alpha(i xi_n)/alpha(0) at Matsubara index n.
    ///
    /// `n_over_a = n T / T_omega = xi_n / omega_a`.
    #[inline]
    pub fn ratio_at(&self, n_over_a: f64) -> f64 {
        match self.mode {
            PolarizabilityMode::SingleOscillator => 1.0 / (1.0 + n_over_a * n_over_a),
            PolarizabilityMode::Static => 1.0,
        }
    }
}

/// alpha(i xi_n) in m^3 at Matsubara index n and temperature T.
pub fn alpha_at_matsubara(pol: &Polarizability, n: u64, temperature: f64) -> Result<f64> {
    if n > 0 && temperature <= 0.0 {
        return Err(Error::domain(
            "alpha_at_matsubara",
            "positive Matsubara index requires T > 0",
        ));
    }
    let ratio = match pol.mode {
        PolarizabilityMode::Static => 1.0,
        PolarizabilityMode::SingleOscillator => {
            if n == 0 {
                1.0
            } else {
                let t_omega = HBAR * pol.omega_a / (2.0 * std::f64::consts::PI * K_B);
                pol.ratio_at(n as f64 * temperature / t_omega)
            }
        }
    };
    Ok(pol.alpha0 * ratio)
}

/// Reduce an SI configuration to the dimensionless point.
pub fn reduce(sys: &PhysicalSystem) -> Result<DimensionlessPoint> {
    sys.validate()?;
    let temps = effective_temperatures(sys)?;
    let r = sys.separation_d / sys.radius_r;
    let t = sys.temperature_t;
    Ok(DimensionlessPoint {
        r,
        chi: 1.0 + r,
        q: sys.plasma_omega * sys.radius_r,
        q_a: sys.atom_omega_a * sys.radius_r / C,
        a: if t > 0.0 { temps.t_omega / t } else { f64::INFINITY },
        tau: 4.0 * std::f64::consts::PI * K_B * sys.separation_d * t / (HBAR * C),
        t_ratio_r: t / temps.t_r,
    })
}

/// The three effective temperatures T_omega, T_R, T_d.
pub fn effective_temperatures(sys: &PhysicalSystem) -> Result<EffectiveTemperatures> {
    sys.validate()?;
    let two_pi_kb = 2.0 * std::f64::consts::PI * K_B;
    Ok(EffectiveTemperatures {
        t_omega: HBAR * sys.atom_omega_a / two_pi_kb,
        t_r: HBAR * C / (two_pi_kb * sys.radius_r),
        t_d: HBAR * C / (two_pi_kb * sys.separation_d),
    })
}
