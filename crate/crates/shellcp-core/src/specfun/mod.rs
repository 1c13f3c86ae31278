//! Stable evaluation of the Riccati-Bessel function families used by the
//! mode sums: the modified pair (s_l, e_l) on the real axis, the oscillatory
//! pair (J_l, Y_l) for the analytic continuation, and Debye uniform
//! asymptotics for large-order truncation bounds.

mod debye;
mod ik;
mod jy;
mod scaled;

pub use debye::{debye_eta, debye_tail_ln};
pub use ik::{ln_sinh, ModRiccatiTable, L_MAX_SUPPORTED};
pub use jy::{OscRiccatiTable, L_MAX_OSC};
pub use scaled::Scaled;

use crate::error::Result;

/// Multipole index l >= 1 with its half-integer order nu = l + 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder {
    l: u32,
    nu: f64,
}

impl BesselOrder {
    pub fn new(l: u32) -> Result<Self> {
        if l < 1 {
            return Err(crate::error::Error::domain(
                "BesselOrder",
                "multipole index must satisfy l >= 1",
            ));
        }
        Ok(BesselOrder { l, nu: l as f64 + 0.5 })
    }

    #[inline]
    pub fn l(&self) -> u32 {
        self.l
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Values of the modified Riccati-Bessel pair at one (l, x).
///
/// True values are `s * exp(s_scale)`, `s_prime * exp(s_scale)`,
/// `e * exp(e_scale)`, `e_prime * exp(e_scale)`. Whenever the plain values
/// fit comfortably in f64 the scales are exactly 0. Products such as
/// s_l(x) e_l(z) are reconstructed via the sum of scales, which stays
/// moderate for the mode terms.
#[derive(Debug, Clone, Copy)]
pub struct RiccatiPair {
    pub s: f64,
    pub s_prime: f64,
    pub s_scale: f64,
    pub e: f64,
    pub e_prime: f64,
    pub e_scale: f64,
}

/// Values of the oscillatory Riccati-Bessel pair at one (l, x), with the
/// same per-family exponent-scaling convention as `RiccatiPair`
/// (J-family and Y-family scaled separately: at large order J underflows
/// while Y overflows).
#[derive(Debug, Clone, Copy)]
pub struct OscillatoryRiccatiPair {
    pub j: f64,
    pub j_prime: f64,
    pub j_scale: f64,
    pub y: f64,
    pub y_prime: f64,
    pub y_scale: f64,
}

/// Split a (value, derivative) pair of one family into plain-or-scaled form.
fn split_family(v: Scaled, d: Scaled) -> (f64, f64, f64) {
    let (lv, ld) = (v.ln_abs(), d.ln_abs());
    if lv.abs() < 600.0 && ld.abs() < 600.0 {
        (v.to_f64(), d.to_f64(), 0.0)
    } else {
        let sign_v = if v.m < 0.0 { -1.0 } else { 1.0 };
        let sign_d = if d.m < 0.0 { -1.0 } else { 1.0 };
        (sign_v, sign_d * (ld - lv).exp(), lv)
    }
}

/// s_l(x) = sqrt(pi x/2) I_{l+1/2}(x) and e_l(x) = sqrt(2x/pi) K_{l+1/2}(x)
/// with derivatives, exponent-scaled per family.
pub fn riccati_ik(order: BesselOrder, x: f64) -> Result<RiccatiPair> {
    let t = ModRiccatiTable::build(x, order.l())?;
    let l = order.l();
    let (s, s_prime, s_scale) = split_family(t.s(l), t.sp(l));
    let (e, e_neg_prime, e_scale) = split_family(t.e(l), t.ep_abs(l));
    Ok(RiccatiPair { s, s_prime, s_scale, e, e_prime: -e_neg_prime, e_scale })
}

/// J_l(x) = x j_l(x) and Y_l(x) = x y_l(x) with derivatives, exponent-scaled
/// per family.
pub fn riccati_jy(order: BesselOrder, x: f64) -> Result<OscillatoryRiccatiPair> {
    let t = OscRiccatiTable::build(x, order.l())?;
    let l = order.l();
    let (j, j_prime, j_scale) = split_family(t.j(l), t.jp(l));
    let (y, y_prime, y_scale) = split_family(t.y(l), t.yp(l));
    Ok(OscillatoryRiccatiPair { j, j_prime, j_scale, y, y_prime, y_scale })
}

/// Leading uniform-asymptotic (Debye) estimate of the bare mode term
/// nu g_l at arguments (x, z), z >= x; an upper bound for any shell
/// strength because the Jost denominators satisfy f >= 1. Valid for
/// nu >= 10 max(1, x, z); used for l-sum truncation bounds only.
pub fn debye_tail_estimate(order: BesselOrder, x: f64, z: f64) -> Result<f64> {
    Ok(debye_tail_ln(order.nu(), x, z)?.exp())
}
