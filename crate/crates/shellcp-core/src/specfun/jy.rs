//! Oscillatory Riccati-Bessel functions on the real axis:
//!
//! J_l(x) = x j_l(x),  Y_l(x) = x y_l(x)
//!
//! with J_0 = sin x, Y_0 = -cos x, shared recurrence
//!
//!   f_{l+1} = ((2l+1)/x) f_l - f_{l-1}
//!
//! and derivative ladder f_l' = f_{l-1} - (l/x) f_l. The Wronskian is
//! J_l Y_l' - J_l' Y_l = 1 for every l.
//!
//! Y is generated upward (dominant direction above the turning point l ~ x).
//! J is generated by Miller's backward recurrence and normalized through the
//! Wronskian at l = 1, where both products J_1 Y_1' and J_1' Y_1 are O(1)
//! for every argument, so the normalization never suffers cancellation
//! (unlike anchoring on J_0 = sin x, which vanishes at x = k pi).

use super::ik::miller_start;
use super::scaled::Scaled;
use crate::error::{Error, Result};

/// Largest supported order for oscillatory tables.
pub const L_MAX_OSC: u32 = 5100;

#[derive(Debug, Clone)]
pub struct OscRiccatiTable {
    pub x: f64,
    j: Vec<Scaled>,
    y: Vec<Scaled>,
}

impl OscRiccatiTable {
    pub fn build(x: f64, l_top: u32) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain("riccati_jy", "argument must be finite and > 0"));
        }
        if l_top > L_MAX_OSC {
            return Err(Error::capability(
                "riccati_jy",
                format!("order {l_top} exceeds supported maximum {L_MAX_OSC}"),
            ));
        }
        let n = l_top as usize + 1;
        let (sin_x, cos_x) = (x.sin(), x.cos());

        // --- Y family, upward.
        let mut y = Vec::with_capacity(n);
        let mut ym1 = Scaled::from_f64(-cos_x);
        let mut y0 = Scaled::from_f64(-cos_x / x - sin_x);
        y.push(ym1);
        if n > 1 {
            y.push(y0);
        }
        for l in 1..(n - 1) as u32 {
            let nxt = y0.mul_f64((2 * l + 1) as f64 / x).sub(ym1);
            ym1 = y0;
            y0 = nxt;
            y.push(y0);
        }

        // --- J family, backward Miller pass.
        let start = miller_start(x, l_top.max(2) + 1);
        let mut p_hi = Scaled::ZERO;
        let mut p_lo = Scaled::new(1.0, -400);
        let mut raw = vec![Scaled::ZERO; n.max(2)];
        for l in (0..=start).rev() {
            let nxt = p_lo.mul_f64((2 * l + 3) as f64 / x).sub(p_hi);
            p_hi = p_lo;
            p_lo = nxt;
            if (l as usize) < raw.len() {
                raw[l as usize] = p_lo;
            }
        }
        // Wronskian normalization at l = 1:
        //   C * (p_1 Y_1' - p_1' Y_1) = 1,
        // with Y_1' = Y_0 - (1/x) Y_1 and p_1' = p_0 - (1/x) p_1.
        let y1 = if n > 1 { y[1] } else { Scaled::from_f64(-cos_x / x - sin_x) };
        let yp1 = y[0].sub(y1.mul_f64(1.0 / x));
        let pp1 = raw[0].sub(raw[1].mul_f64(1.0 / x));
        let w = raw[1].mul(yp1).sub(pp1.mul(y1));
        if w.is_zero() {
            return Err(Error::precision(
                "riccati_jy",
                "backward-recurrence normalization degenerated",
            ));
        }
        let c = Scaled::ONE.div(w);
        let j: Vec<Scaled> = raw.into_iter().take(n).map(|p| p.mul(c)).collect();

        Ok(OscRiccatiTable { x, j, y })
    }

    #[inline]
    pub fn l_top(&self) -> u32 {
        (self.j.len() - 1) as u32
    }

    #[inline]
    pub fn j(&self, l: u32) -> Scaled {
        self.j[l as usize]
    }

    #[inline]
    pub fn y(&self, l: u32) -> Scaled {
        self.y[l as usize]
    }

    /// J_l'(x) = J_{l-1} - (l/x) J_l; requires l >= 1.
    #[inline]
    pub fn jp(&self, l: u32) -> Scaled {
        debug_assert!(l >= 1);
        self.j[l as usize - 1].sub(self.j[l as usize].mul_f64(l as f64 / self.x))
    }

    /// Y_l'(x) = Y_{l-1} - (l/x) Y_l; requires l >= 1.
    #[inline]
    pub fn yp(&self, l: u32) -> Scaled {
        debug_assert!(l >= 1);
        self.y[l as usize - 1].sub(self.y[l as usize].mul_f64(l as f64 / self.x))
    }
}
