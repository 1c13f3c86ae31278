//! Modified Riccati-Bessel functions on the imaginary axis:
//!
//! s_l(x) = sqrt(pi x / 2) I_{l+1/2}(x),  e_l(x) = sqrt(2 x / pi) K_{l+1/2}(x)
//!
//! with s_0 = sinh x, e_0 = exp(-x). Both families satisfy
//!
//!   f_{l+1} = f_{l-1} - ((2l+1)/x) f_l   (s: stable downward; e: upward)
//!
//! and the cancellation-free derivative ladders
//!
//!   s_l' = s_{l+1} + ((l+1)/x) s_l,   e_l' = -( e_{l-1} + (l/x) e_l ).
//!
//! Everything is positive (|.| for e'), so sums in the recurrences never
//! cancel. Values are held as `Scaled` (mantissa + power-of-two exponent)
//! because s grows like (x/2)^... e^x and e decays like e^-x x^-l far beyond
//! the f64 range at order ~5000.
//!
//! The s family is generated by Miller's backward algorithm: start a trial
//! minimal solution at an order high enough that contamination by the
//! dominant solution has decayed below 1e-18 (start order estimated from the
//! magnitude envelope), recurse down, then normalize against s_0 = sinh x.

use super::scaled::Scaled;
use crate::error::{Error, Result};

/// Largest supported order for table construction.
pub const L_MAX_SUPPORTED: u32 = 5100;

/// Table of s, s', e, |e'| for l = 0..=l_top at fixed argument x.
#[derive(Debug, Clone)]
pub struct ModRiccatiTable {
    pub x: f64,
    s: Vec<Scaled>,
    sp: Vec<Scaled>,
    e: Vec<Scaled>,
    ep: Vec<Scaled>, // |e_l'| = e_{l-1} + (l/x) e_l
}

impl ModRiccatiTable {
    /// Build the table up to order `l_top` inclusive.
    pub fn build(x: f64, l_top: u32) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::domain("riccati_ik", "argument must be finite and > 0"));
        }
        if l_top > L_MAX_SUPPORTED {
            return Err(Error::capability(
                "riccati_ik",
                format!("order {l_top} exceeds supported maximum {L_MAX_SUPPORTED}"),
            ));
        }
        let n = l_top as usize + 2; // one spare order for the s' ladder

        // --- e family: upward recurrence, dominant direction, stable.
        let mut e = Vec::with_capacity(n);
        // e_0 = exp(-x), e_1 = (1 + 1/x) exp(-x); carry exp(-x) as a Scaled
        // prefactor so large x never underflows.
        let pref = Scaled::from_ln(-x, false);
        let mut em1 = Scaled::ONE; // e_0 / pref
        let mut e0 = Scaled::from_f64(1.0 + 1.0 / x);
        e.push(em1.mul(pref));
        e.push(e0.mul(pref));
        for l in 1..(n - 1) as u32 {
            let nxt = em1.add(e0.mul_f64((2 * l + 1) as f64 / x));
            em1 = e0;
            e0 = nxt;
            e.push(e0.mul(pref));
        }

        // --- s family: Miller backward from a safely contaminated-free start.
        let start = miller_start(x, l_top + 1);
        let mut p_hi = Scaled::ZERO;
        let mut p_lo = Scaled::new(1.0, -400); // arbitrary tiny seed
        let mut raw = vec![Scaled::ZERO; n];
        for l in (0..=start).rev() {
            // p_{l} = p_{l+2} + ((2l+3)/x) p_{l+1}
            let nxt = p_hi.add(p_lo.mul_f64((2 * l + 3) as f64 / x));
            p_hi = p_lo;
            p_lo = nxt;
            if (l as usize) < n {
                raw[l as usize] = p_lo;
            }
        }
        // Normalize with s_0 = sinh x (log form immune to overflow).
        let norm = Scaled::from_ln(ln_sinh(x), false).div(raw[0]);
        let s: Vec<Scaled> = raw.into_iter().map(|p| p.mul(norm)).collect();

        // --- derivative ladders (all-positive sums).
        let l_keep = l_top as usize + 1;
        let mut sp = Vec::with_capacity(l_keep);
        let mut ep = Vec::with_capacity(l_keep);
        for l in 0..l_keep {
            sp.push(s[l + 1].add(s[l].mul_f64((l + 1) as f64 / x)));
            if l == 0 {
                // e_0' = -e_0
                ep.push(e[0]);
            } else {
                ep.push(e[l - 1].add(e[l].mul_f64(l as f64 / x)));
            }
        }

        Ok(ModRiccatiTable { x, s, sp, e, ep })
    }

    #[inline]
    pub fn l_top(&self) -> u32 {
        (self.sp.len() - 1) as u32
    }

    #[inline]
    pub fn s(&self, l: u32) -> Scaled {
        self.s[l as usize]
    }

    /// s_l'(x) (positive).
    #[inline]
    pub fn sp(&self, l: u32) -> Scaled {
        self.sp[l as usize]
    }

    #[inline]
    pub fn e(&self, l: u32) -> Scaled {
        self.e[l as usize]
    }

    /// |e_l'(x)|; the true derivative is negative.
    #[inline]
    pub fn ep_abs(&self, l: u32) -> Scaled {
        self.ep[l as usize]
    }
}

/// ln(sinh x) without overflow or small-x cancellation.
pub fn ln_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// Start order for Miller's backward recurrence: high enough above `l_need`
/// that the admixture of the dominant solution decays by >= 10^-18 before
/// reaching `l_need`. Uses the standard magnitude-envelope estimate.
pub(crate) fn miller_start(x: f64, l_need: u32) -> u32 {
    let target = l_need as f64;
    // Digits carried by the envelope gap between start order and l_need.
    let gap = |m: f64| envj(m, x) - envj(target.max(1.1 * x + 10.0), x);
    // Secant solve gap(m) = 19 for m > l_need.
    let mut m0 = target.max(1.1 * x + 10.0) + 5.0;
    let mut m1 = m0 + 10.0;
    let mut f0 = gap(m0) - 19.0;
    let mut f1 = gap(m1) - 19.0;
    for _ in 0..30 {
        if (f1 - f0).abs() < 1e-300 {
            break;
        }
        let m2 = m1 - f1 * (m1 - m0) / (f1 - f0);
        let m2 = m2.max(target + 1.0);
        let f2 = gap(m2) - 19.0;
        m0 = m1;
        f0 = f1;
        m1 = m2;
        f1 = f2;
        if (m1 - m0).abs() < 1.0 {
            break;
        }
    }
    (m1.ceil() as u32).max(l_need + 12)
}

/// log10 envelope of the dominant-solution magnitude at order n, argument x.
fn envj(n: f64, x: f64) -> f64 {
    let n = n.max(1.0);
    0.5 * (6.28 * n).log10() - n * (1.36 * x / n).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_orders_match_closed_forms() {
        for &x in &[1e-4f64, 0.1, 1.0, 7.5, 40.0, 600.0] {
            let t = ModRiccatiTable::build(x, 4).unwrap();
            // s_0 = sinh x, s_1 = cosh x - sinh x / x
            assert_relative_eq!(t.s(0).ln_abs(), ln_sinh(x), max_relative = 1e-12);
            let s1 = if x < 0.5 {
                // series s_1 = x^2/3 + x^4/30 + x^6/840 + x^8/45360 + ...
                let x2 = x * x;
                x2 / 3.0 * (1.0 + x2 / 10.0 * (1.0 + x2 / 28.0 * (1.0 + x2 / 54.0)))
            } else {
                x.cosh() - x.sinh() / x
            };
            if x < 500.0 {
                assert_relative_eq!(t.s(1).to_f64(), s1, max_relative = 1e-10);
            }
            // e_0 = e^-x, e_1 = e^-x (1 + 1/x)
            assert_relative_eq!(t.e(0).ln_abs(), -x, epsilon = 1e-12 * (1.0 + x));
            assert_relative_eq!(
                t.e(1).ln_abs(),
                -x + (1.0 + 1.0 / x).ln(),
                epsilon = 1e-11 * (1.0 + x)
            );
        }
    }

    #[test]
    fn wronskian_identity_across_orders() {
        // s_l e_l' - s_l' e_l = -1, i.e. s_l*|e_l'| + s_l' e_l = 1.
        for &x in &[1e-6, 1e-3, 0.3, 2.0, 25.0, 300.0, 1e4] {
            let t = ModRiccatiTable::build(x, 120).unwrap();
            for l in [0u32, 1, 2, 5, 17, 60, 120] {
                let w = t.s(l).mul(t.ep_abs(l)).add(t.sp(l).mul(t.e(l)));
                assert_relative_eq!(w.to_f64(), 1.0, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn extreme_orders_stay_finite_in_log() {
        let t = ModRiccatiTable::build(1e-6, 5000).unwrap();
        let (ls, le) = (t.s(5000).ln_abs(), t.e(5000).ln_abs());
        assert!(ls.is_finite() && le.is_finite());
        // Product s_l(x) e_l(x) ~ x / (2l+1) for x -> 0.
        let prod = ls + le;
        let expect = (1e-6f64 / 10001.0).ln();
        assert_relative_eq!(prod, expect, max_relative = 1e-6);
    }
}
