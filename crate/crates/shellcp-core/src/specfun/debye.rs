//! Uniform large-order (Debye) asymptotics for the mode-term tail.
//!
//! For nu = l + 1/2 >> max(1, x, z) the leading uniform expansions
//!
//!   I_nu(nu w) ~ e^{nu eta(w)} / (sqrt(2 pi nu) (1+w^2)^{1/4})
//!   K_nu(nu w) ~ sqrt(pi / 2 nu) e^{-nu eta(w)} / (1+w^2)^{1/4}
//!
//! with eta(w) = sqrt(1+w^2) + ln[w / (1 + sqrt(1+w^2))] give the bare
//! (unit-Jost) mode term
//!
//!   nu g_l ~ (x z / 4 nu) e^{-2 nu [eta(z/nu) - eta(x/nu)]}
//!            * [ t_x t_z  +  (t_z + 1/t_z) / (t_x w_x^2 w_z^2) ]
//!
//! where w_x = x/nu, t_x = 1/sqrt(1+w_x^2). Since the true Jost functions
//! satisfy f >= 1, this is an upper bound on the true nu g_l for any Q >= 0,
//! which is exactly what a truncation bound needs. Accuracy of the leading
//! order is ~1% at nu ~ 100 (validated against exact evaluation in tests).

use crate::error::{Error, Result};

/// eta(w) = sqrt(1+w^2) + ln(w / (1 + sqrt(1+w^2))), the Debye phase.
#[inline]
pub fn debye_eta(w: f64) -> f64 {
    let s = (1.0 + w * w).sqrt();
    s + (w / (1.0 + s)).ln()
}

/// Natural log of the tail estimate for nu g_l at order nu, arguments (x, z).
///
/// Usable far beyond f64 range; `debye_tail_value` is its exp.
pub fn debye_tail_ln(nu: f64, x: f64, z: f64) -> Result<f64> {
    if !(x.is_finite() && z.is_finite() && x > 0.0 && z >= x) {
        return Err(Error::domain(
            "debye_tail_estimate",
            "requires finite 0 < x <= z",
        ));
    }
    if nu < 10.0 * x.max(z).max(1.0) {
        return Err(Error::capability(
            "debye_tail_estimate",
            format!("order nu={nu} below asymptotic validity 10*max(1,x,z)"),
        ));
    }
    let (wx, wz) = (x / nu, z / nu);
    let (tx, tz) = (
        1.0 / (1.0 + wx * wx).sqrt(),
        1.0 / (1.0 + wz * wz).sqrt(),
    );
    let expo = -2.0 * nu * (debye_eta(wz) - debye_eta(wx));
    let te = tx * tz;
    let tm = (tz + 1.0 / tz) / (tx * wx * wx * wz * wz);
    Ok((x * z / (4.0 * nu)).ln() + expo + (te + tm).ln())
}
