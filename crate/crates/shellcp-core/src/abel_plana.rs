//! Equivalent representation of the free energy via the Abel-Plana formula:
//!
//!   F = E0 + F1 + F2,
//!
//!   E0 = -(hbar c alpha0 / (pi R^4 chi^2)) Int_0^inf du  e0(u) / (1 + (u/q_a)^2),
//!   F1 = -(alpha0 e1(q_a) hbar omega_a / (R^3 chi^2)) / (e^{2 pi a} - 1),
//!   F2 = -(alpha0 hbar omega_a / (pi R^3 chi^2))
//!          Int_0^inf dt  d/dt[ psi(t)/(e^{2 pi a t} - 1) ] ln|(1+t)/(1-t)|,
//!
//! where a = T_omega/T, q_a = omega_a R/c, and the spectral functions are
//!
//!   e0(u)  = Q sum_l nu g_l(u)          (imaginary axis, real, positive),
//!   e_c(w) = Q sum_l nu g_l(iw)         (analytic continuation, complex),
//!   e1 = Re e_c,  e2 = Im e_c,  psi(t) = e2(t q_a).
//!
//! E0 is exactly temperature-independent; F1 and F2 carry the whole thermal
//! dependence through the single parameter a. The continuation evaluates
//! g_l at real frequency w through oscillatory Riccati-Bessel functions with
//! the outgoing combination H(b) = J(b) - iY(b) at b = w chi; only mixed
//! products J(w)-times-H(b) are ever formed, never a lone power of Y, so the
//! assembly stays representable at all orders.

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::matsubara::{g_sum, zero_mode_l_sum, SeriesControl};
use crate::model::{reduce, DimensionlessPoint, PhysicalSystem, Polarizability, PolarizabilityMode};
use crate::quad::{adaptive_gk, central_derivative, tanh_sinh};
use crate::specfun::{OscRiccatiTable, L_MAX_OSC};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

/// The three pieces of the Abel-Plana split (J).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AbelPlanaBreakdown {
    /// Zero-temperature integral; independent of T.
    pub e0: f64,
    /// Pole-type thermal correction; vanishes as exp(-2 pi T_omega/T).
    pub f1: f64,
    /// Branch-cut thermal correction.
    pub f2: f64,
    /// e0 + f1 + f2.
    pub total: f64,
}

/// Spectral sums over multipoles at a fixed geometry: e0 on the imaginary
/// axis and the real/imaginary parts of its analytic continuation.
///
/// All methods take the *reduced* frequency w = omega R / c, which for a
/// Matsubara-index argument t corresponds to w = t T/T_R; in particular the
/// pole term's e1(a) is evaluated at w = a T/T_R = q_a, independent of T.
#[derive(Debug, Clone, Copy)]
pub struct SpectralFunctions {
    chi: f64,
    q: f64,
    rel_tol: f64,
    l_max_cap: u32,
}

impl SpectralFunctions {
    pub fn new(chi: f64, q: f64) -> Result<Self> {
        if !(chi.is_finite() && chi > 1.0) {
            return Err(Error::domain("SpectralFunctions", "chi = 1 + d/R must exceed 1"));
        }
        if !(q.is_finite() && q >= 0.0) {
            return Err(Error::domain("SpectralFunctions", "Q must be >= 0"));
        }
        Ok(SpectralFunctions { chi, q, rel_tol: 1e-12, l_max_cap: L_MAX_OSC })
    }

    pub fn from_point(point: &DimensionlessPoint) -> Result<Self> {
        Self::new(point.chi, point.q)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol.clamp(1e-14, 1e-6);
        self
    }

    /// e0(k) = Q sum_l nu g_l(k) on the imaginary axis; k >= 0.
    /// At k = 0 the closed small-argument limit chi^2 P(r) is returned.
    pub fn e0_at(&self, k: f64) -> Result<f64> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::domain("e0_at", "argument must be >= 0"));
        }
        if self.q == 0.0 {
            return Ok(0.0);
        }
        if k == 0.0 {
            return Ok(zero_mode_l_sum(self.chi, 1e-15));
        }
        let g = g_sum(k, self.chi, self.q, self.rel_tol, self.l_max_cap)?;
        Ok(self.q * (g.te + g.tm))
    }

    /// e1 = Re e_c(w); even in w.
    pub fn e1_at(&self, w: f64) -> Result<f64> {
        if w == 0.0 {
            return self.e0_at(0.0);
        }
        Ok(self.continued_at(w.abs())?.re)
    }

    /// e2 = Im e_c(w); odd in w (conjugate branch for w < 0).
    pub fn e2_at(&self, w: f64) -> Result<f64> {
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w.signum() * self.continued_at(w.abs())?.im)
    }

    /// Full continued sum e_c(w) = Q sum_l nu g_l(iw) for w > 0.
    pub fn continued_at(&self, w: f64) -> Result<Complex64> {
        let (te, tm) = self.continued_shares_at(w)?;
        Ok(te + tm)
    }

    /// TE and TM shares of e_c(w) (each already Q-weighted and nu-summed).
    pub fn continued_shares_at(&self, w: f64) -> Result<(Complex64, Complex64)> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::domain("continued_at", "w must be a positive real frequency"));
        }
        if self.q == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
        }
        let b = w * self.chi;
        let mut l_top = initial_osc_top(w, self.chi, self.rel_tol).min(self.l_max_cap);
        loop {
            let tw = OscRiccatiTable::build(w, l_top)?;
            let tb = OscRiccatiTable::build(b, l_top)?;
            let mut te_sum = Complex64::new(0.0, 0.0);
            let mut tm_sum = Complex64::new(0.0, 0.0);
            let mut streak = 0u32;
            for l in 1..=l_top {
                let (te, tm) = continued_g_shares(&tw, &tb, l, w, self.chi, self.q)?;
                let nu = l as f64 + 0.5;
                te_sum += nu * te;
                tm_sum += nu * tm;
                let tot = te_sum + tm_sum;
                let term_mag = nu * (te.norm() + tm.norm());
                if term_mag <= self.rel_tol * tot.norm() && (l as f64) > w {
                    streak += 1;
                    if streak >= 3 {
                        return Ok((self.q * te_sum, self.q * tm_sum));
                    }
                } else {
                    streak = 0;
                }
            }
            if l_top >= self.l_max_cap {
                let tot = self.q * (te_sum + tm_sum);
                return Err(Error::Convergence {
                    context: "continued multipole sum hit l_max_cap",
                    partial: tot.re,
                    bound: tot.norm() * 1e-3,
                });
            }
            l_top = (l_top * 2).min(self.l_max_cap);
        }
    }
}

fn initial_osc_top(w: f64, chi: f64, rel_tol: f64) -> u32 {
    let decades = -(rel_tol.min(1e-8)).ln();
    let from_chi = decades / (2.0 * chi.ln());
    (from_chi.max(1.3 * w * chi) as u32).max(24) + 8
}

/// One continued mode term g_l(iw) split into TE and TM shares (no Q, no nu).
///
/// Assembly uses only mixed products of the small function J at one argument
/// against J, Y at the other, so no intermediate overflows even when Y alone
/// is astronomically large at small w and moderate l.
fn continued_g_shares(
    tw: &OscRiccatiTable,
    tb: &OscRiccatiTable,
    l: u32,
    w: f64,
    chi: f64,
    q: f64,
) -> Result<(Complex64, Complex64)> {
    let nu = l as f64 + 0.5;
    let b = w * chi;
    let qw = q / w;

    let j = tw.j(l);
    let jp = tw.jp(l);
    let y = tw.y(l);
    let yp = tw.yp(l);
    let jb = tb.j(l);
    let jbp = tb.jp(l);
    let yb = tb.y(l);
    let ybp = tb.yp(l);

    // J(w) H(b) and friends, H = J - iY: formed as scaled products.
    let jh = Complex64::new(j.mul(jb).to_f64(), -j.mul(yb).to_f64());
    let jphp = Complex64::new(jp.mul(jbp).to_f64(), -jp.mul(ybp).to_f64());
    let jph = Complex64::new(jp.mul(jb).to_f64(), -jp.mul(yb).to_f64());

    // Continued Jost functions: f_TE = 1 - (Q/w)(J Y + i J^2) and the TM
    // analogue with derivatives.
    let f_te = Complex64::new(1.0 - qw * j.mul(y).to_f64(), -qw * j.square().to_f64());
    let f_tm = Complex64::new(1.0 - qw * jp.mul(yp).to_f64(), -qw * jp.square().to_f64());

    let scale_te = 1.0 + qw.abs() * (j.mul(y).to_f64().abs() + j.square().to_f64());
    let scale_tm = 1.0 + qw.abs() * (jp.mul(yp).to_f64().abs() + jp.square().to_f64());
    if !(f_te.norm() > 1e-12 * scale_te) {
        return Err(Error::JostZero { l, t: w });
    }
    if !(f_tm.norm() > 1e-12 * scale_tm) {
        return Err(Error::JostZero { l, t: w });
    }

    let rho = (nu * nu - 0.25) / (b * b);
    let te = jh * jh / f_te;
    let tm = (jphp * jphp + jph * jph * rho) / f_tm;
    if !(te.re.is_finite() && te.im.is_finite() && tm.re.is_finite() && tm.im.is_finite()) {
        return Err(Error::precision(
            "continued_g_shares",
            "non-finite continued mode term",
        ));
    }
    Ok((te, tm))
}

/// Analytic continuation g_l(it) of one mode term, with the Matsubara-index
/// argument t mapped to the reduced frequency w = t T/T_R carried by `point`.
/// Negative t is accepted through the conjugate branch g_l(-it) = conj g_l(it).
pub fn g_continued(l: u32, t: f64, point: &DimensionlessPoint) -> Result<Complex64> {
    if l < 1 {
        return Err(Error::domain("g_continued", "multipole order starts at l = 1"));
    }
    if !(t.is_finite() && t != 0.0) {
        return Err(Error::domain("g_continued", "t must be nonzero and finite"));
    }
    if !(point.t_ratio_r > 0.0) {
        return Err(Error::domain("g_continued", "point must carry T > 0 so t maps to a frequency"));
    }
    let w = t.abs() * point.t_ratio_r;
    let l_top = l.max(2);
    let tw = OscRiccatiTable::build(w, l_top)?;
    let tb = OscRiccatiTable::build(w * point.chi, l_top)?;
    let (te, tm) = continued_g_shares(&tw, &tb, l, w, point.chi, point.q)?;
    let g = te + tm;
    Ok(if t > 0.0 { g } else { g.conj() })
}

/// Polarizability-pole position as a reduced frequency: q_a = omega_a R / c.
fn pole_frequency(pol: &Polarizability, radius: f64) -> f64 {
    pol.omega_a * radius / C
}

fn require_single_oscillator(pol: &Polarizability, context: &'static str) -> Result<()> {
    if pol.mode != PolarizabilityMode::SingleOscillator || !(pol.omega_a > 0.0) {
        return Err(Error::domain(
            context,
            "the pole/branch-cut split requires the single-oscillator polarizability",
        ));
    }
    Ok(())
}

/// E0: the zero-temperature energy integral (J). Valid for both
/// polarizability modes; exactly independent of sys.temperature_t.
pub fn zero_temperature_energy(
    sys: &PhysicalSystem,
    pol: &Polarizability,
    ctrl: &SeriesControl,
) -> Result<f64> {
    ctrl.validate()?;
    let point = reduce(sys)?;
    if point.q == 0.0 || pol.alpha0 == 0.0 {
        return Ok(0.0);
    }
    let sf = SpectralFunctions::from_point(&point)?
        .with_rel_tol((ctrl.rel_tol * 1e-2).clamp(1e-13, 1e-8));
    let q_a = pole_frequency(pol, sys.radius_r);
    let lorentzian = pol.mode == PolarizabilityMode::SingleOscillator;
    if lorentzian && !(q_a > 0.0) {
        return Err(Error::domain("zero_temperature_energy", "omega_a must be > 0"));
    }

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |u: f64| -> f64 {
        match sf.e0_at(u) {
            Ok(e0) => {
                let ratio = if lorentzian {
                    let s = u / q_a;
                    1.0 / (1.0 + s * s)
                } else {
                    1.0
                };
                e0 * ratio
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };

    // Range: the spectral sum decays as exp(-2 u r); with the Lorentzian
    // weight the tail is negligible much earlier, which also keeps the
    // required multipole order (~ u) within the supported caps.
    let mut upper = (45.0 / (2.0 * point.r)).max(60.0).min(3500.0);
    if lorentzian {
        let mut u = 60.0f64.max(20.0 * q_a);
        while u < upper && (-2.0 * u * point.r).exp() * (q_a / u).powi(2) > 1e-18 {
            u *= 1.3;
        }
        upper = upper.min(u);
    }
    let mut pts: Vec<f64> = [q_a, 10.0 * q_a, 1.0, 0.25 / point.r]
        .into_iter()
        .filter(|p| *p > 0.0 && *p < upper)
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts.push(upper);

    let mut total = 0.0f64;
    let mut lo = 0.0;
    for hi in pts {
        let abs_tol = 0.1 * ctrl.rel_tol * total.abs() + 1e-320;
        let seg = adaptive_gk(&f, lo, hi, ctrl.rel_tol, abs_tol, 400)?;
        total += seg.value;
        lo = hi;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let chi = point.chi;
    Ok(-(HBAR * C * pol.alpha0) / (PI * sys.radius_r.powi(4) * chi * chi) * total)
}

/// F1: the pole-type thermal correction (J); exponentially small for T << T_omega.
pub fn thermal_correction_1(sys: &PhysicalSystem, pol: &Polarizability) -> Result<f64> {
    let point = reduce(sys)?;
    if !(sys.temperature_t > 0.0) {
        return Err(Error::domain("thermal_correction_1", "T > 0 required"));
    }
    require_single_oscillator(pol, "thermal_correction_1")?;
    if point.q == 0.0 || pol.alpha0 == 0.0 {
        return Ok(0.0);
    }
    let q_a = pole_frequency(pol, sys.radius_r);
    let a = HBAR * pol.omega_a / (2.0 * PI * K_B * sys.temperature_t);
    let x = 2.0 * PI * a;
    let planck = if x < 700.0 { 1.0 / x.exp_m1() } else { 0.0 };
    if planck == 0.0 {
        return Ok(-0.0);
    }
    let sf = SpectralFunctions::from_point(&point)?;
    let e1 = sf.e1_at(q_a)?;
    let chi = point.chi;
    Ok(-(pol.alpha0 * e1 * HBAR * pol.omega_a) / (sys.radius_r.powi(3) * chi * chi) * planck)
}

/// F2: the branch-cut thermal correction (J). The integrand differentiates
/// psi(t)/(e^{2 pi a t} - 1) in t — the Planck factor analytically, psi by
/// Richardson-extrapolated central differences — against the logarithmic
/// weight ln|(1+t)/(1-t)|, with the integrable singularity at t = 1 handled
/// by tanh-sinh panels on both sides.
pub fn thermal_correction_2(
    sys: &PhysicalSystem,
    pol: &Polarizability,
    ctrl: &SeriesControl,
) -> Result<f64> {
    ctrl.validate()?;
    let point = reduce(sys)?;
    if !(sys.temperature_t > 0.0) {
        return Err(Error::domain("thermal_correction_2", "T > 0 required"));
    }
    require_single_oscillator(pol, "thermal_correction_2")?;
    if point.q == 0.0 || pol.alpha0 == 0.0 {
        return Ok(0.0);
    }
    let q_a = pole_frequency(pol, sys.radius_r);
    let a = HBAR * pol.omega_a / (2.0 * PI * K_B * sys.temperature_t);
    let tpa = 2.0 * PI * a;
    let sf = SpectralFunctions::from_point(&point)?
        .with_rel_tol((ctrl.rel_tol * 1e-2).clamp(1e-13, 1e-8));

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let record = |e: Error| {
        failure.borrow_mut().get_or_insert(e);
        0.0
    };
    let psi = |t: f64| -> f64 {
        match sf.e2_at(t * q_a) {
            Ok(v) => v,
            Err(e) => record(e),
        }
    };
    let integrand = |t: f64| -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let x = tpa * t;
        if x > 500.0 {
            return 0.0;
        }
        let p = 1.0 / x.exp_m1();
        let pp = -tpa * (p + p * p);
        let h0 = t.max(0.05) * 1e-3;
        let (dpsi, _) = central_derivative(&psi, t, h0);
        let weight = ((1.0 + t) / (1.0 - t).abs()).ln();
        (dpsi * p + psi(t) * pp) * weight
    };

    let tcut = (46.0 / tpa).max(1e-3);
    let mut total = 0.0;
    if tcut <= 0.9 {
        total += adaptive_gk(&integrand, 0.0, tcut, ctrl.rel_tol, 1e-320, 400)?.value;
    } else {
        total += adaptive_gk(&integrand, 0.0, 0.9, ctrl.rel_tol, 1e-320, 400)?.value;
        let scale = total.abs().max(1e-308);
        total += tanh_sinh(&integrand, 0.9, 1.0, ctrl.rel_tol)?.value;
        total += tanh_sinh(&integrand, 1.0, 1.1, ctrl.rel_tol)?.value;
        let tail_hi = tcut.max(1.2);
        total +=
            adaptive_gk(&integrand, 1.1, tail_hi, ctrl.rel_tol, 0.01 * ctrl.rel_tol * scale, 400)?
                .value;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let chi = point.chi;
    Ok(-(pol.alpha0 * HBAR * pol.omega_a) / (PI * sys.radius_r.powi(3) * chi * chi) * total)
}

/// The assembled Abel-Plana representation. At T = 0 the thermal pieces are
/// exactly zero and the total equals E0.
pub fn free_energy(
    sys: &PhysicalSystem,
    pol: &Polarizability,
    ctrl: &SeriesControl,
) -> Result<AbelPlanaBreakdown> {
    let e0 = zero_temperature_energy(sys, pol, ctrl)?;
    let (f1, f2) = if sys.temperature_t > 0.0 && reduce(sys)?.q > 0.0 && pol.alpha0 != 0.0 {
        (thermal_correction_1(sys, pol)?, thermal_correction_2(sys, pol, ctrl)?)
    } else {
        (0.0, 0.0)
    };
    Ok(AbelPlanaBreakdown { e0, f1, f2, total: e0 + f1 + f2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EV;
    use approx::assert_relative_eq;

    const Q_A: f64 = 0.02019135950475356;

    fn sf(chi: f64, q: f64) -> SpectralFunctions {
        SpectralFunctions::new(chi, q).unwrap().with_rel_tol(1e-13)
    }

    fn c60(temperature: f64, r: f64, q: f64) -> (PhysicalSystem, Polarizability) {
        let radius = 0.342e-9;
        let sys = PhysicalSystem {
            radius_r: radius,
            plasma_omega: q / radius,
            atom_omega_a: 11.65 * EV / HBAR,
            alpha0: 0.667e-30,
            separation_d: r * radius,
            temperature_t: temperature,
        };
        let pol = Polarizability::single_oscillator(sys.alpha0, sys.atom_omega_a);
        (sys, pol)
    }

    #[test]
    fn continued_sum_matches_reference_values() {
        // Frozen from an independent float64 pipeline (scipy Bessel backend).
        let cases: [(f64, f64, f64, f64, f64); 6] = [
            (Q_A, 1.5, 0.0494, 2.8198756129145894, -3.3435004962962836e-6),
            (Q_A, 1.5, 5.0, 2.802299270985781, -3.261173354427132e-6),
            (1.0, 1.5, 0.0494, -0.3277065588645551, 0.019944047182571034),
            (1.0, 2.0, 0.5, -0.2409823446154456, 0.11277128433262454),
            (5.0, 3.0, 5.0, 2.949671726381374, 1.2829676774777234),
            (0.3, 1.04, 1000.0, 4062.454588579632, -0.053825718182351689),
        ];
        for (w, chi, q, re, im) in cases {
            let v = sf(chi, q).continued_at(w).unwrap();
            assert_relative_eq!(v.re, re, max_relative = 1e-9, epsilon = 1e-12);
            assert_relative_eq!(v.im, im, max_relative = 1e-8, epsilon = 1e-12);
        }
    }

    #[test]
    fn imaginary_axis_sum_matches_reference_values() {
        let cases: [(f64, f64, f64, f64); 3] = [
            (0.5, 1.5, 0.0494, 0.6702523716163797),
            (2.0, 1.5, 5.0, 1.1974249562679729),
            (1.0, 3.0, 0.5, 0.004170196461468211),
        ];
        for (u, chi, q, want) in cases {
            assert_relative_eq!(sf(chi, q).e0_at(u).unwrap(), want, max_relative = 1e-10);
        }
        // k = 0 closed form: chi^2 P(r) at r = 0.5.
        assert_relative_eq!(
            sf(1.5, 0.0494).e0_at(0.0).unwrap(),
            2.8017777777777777,
            max_relative = 1e-12
        );
    }

    #[test]
    fn small_frequency_laws_of_e2() {
        let s = sf(1.5, 0.0494);
        // TM leading law: e2 ~ -2 w^3 / chi^4.
        for &w in &[1e-4, 1e-3] {
            let e2 = s.e2_at(w).unwrap();
            let law = -2.0 * w.powi(3) / 1.5f64.powi(4);
            assert_relative_eq!(e2, law, max_relative = 1e-3);
        }
        // Fitted exponent of the total over [1e-4, 1e-2] within 1% of 3.
        let (w1, w2) = (1e-4, 1e-2);
        let p = (s.e2_at(w2).unwrap().abs().ln() - s.e2_at(w1).unwrap().abs().ln())
            / (w2.ln() - w1.ln());
        assert!((p - 3.0).abs() < 0.03, "fitted TM exponent {p}");
        // TE share alone starts at w^5.
        let (te1, _) = s.continued_shares_at(1e-3).unwrap();
        let (te2, _) = s.continued_shares_at(1e-2).unwrap();
        let pte = (te2.im.abs().ln() - te1.im.abs().ln()) / (1e-2f64.ln() - 1e-3f64.ln());
        assert!((pte - 5.0).abs() < 0.05, "fitted TE exponent {pte}");
    }

    #[test]
    fn e2_odd_and_conjugate_symmetry() {
        let s = sf(1.5, 0.5);
        let plus = s.e2_at(0.7).unwrap();
        let minus = s.e2_at(-0.7).unwrap();
        assert_eq!(plus, -minus);
        // g_continued over the two branches: (g(it) - g(-it))/2i = Im g(it).
        let (sys, _) = c60(300.0, 0.5, 0.5);
        let point = reduce(&sys).unwrap();
        let gp = g_continued(3, 40.0, &point).unwrap();
        let gm = g_continued(3, -40.0, &point).unwrap();
        let im_from_pair = (gp - gm) / Complex64::new(0.0, 2.0);
        assert_relative_eq!(im_from_pair.re, gp.im, max_relative = 1e-12);
        assert!(im_from_pair.im.abs() < 1e-15 * gp.norm());
    }

    #[test]
    fn tm_share_stays_bounded_as_q_vanishes() {
        // e2_TM ~ Q * bounded as Q -> 0 at fixed w: the Q-normalized share
        // approaches a constant, with the residual Q-dependence entering
        // through the Jost factors at O(Q/w).
        let w = 0.3;
        let mut prev = f64::INFINITY;
        for &q in &[1e-4, 1e-6, 1e-8] {
            let (_, tm) = sf(1.5, q).continued_shares_at(w).unwrap();
            let scaled = tm.im.abs() / q;
            assert!(scaled.is_finite() && scaled > 0.0);
            if prev.is_finite() {
                assert_relative_eq!(scaled, prev, max_relative = 1e-2);
            }
            prev = scaled;
        }
    }

    #[test]
    fn zero_temperature_energy_matches_reference() {
        let ctrl = SeriesControl { rel_tol: 1e-10, ..Default::default() };
        let (sys, pol) = c60(300.0, 2.0, 0.0494);
        let e0 = zero_temperature_energy(&sys, &pol, &ctrl).unwrap();
        assert_relative_eq!(e0, -7.768838821384498e-23, max_relative = 1e-8);
        // Temperature independence is exact by construction.
        let (sys2, _) = c60(3000.0, 2.0, 0.0494);
        assert_eq!(e0, zero_temperature_energy(&sys2, &pol, &ctrl).unwrap());
    }

    #[test]
    fn zero_temperature_short_distance_law() {
        // r << Q: E0 -> -hbar omega_a alpha(0) / (8 d^3).
        let radius = 0.342e-9;
        let r = 0.004;
        let q = 5.0;
        let (mut sys, pol) = c60(0.0, r, q);
        sys.separation_d = r * radius;
        let ctrl = SeriesControl { rel_tol: 1e-9, ..Default::default() };
        let e0 = zero_temperature_energy(&sys, &pol, &ctrl).unwrap();
        let law = -HBAR * pol.omega_a * pol.alpha0 / (8.0 * sys.separation_d.powi(3));
        assert_relative_eq!(e0, law, max_relative = 0.05);
    }

    #[test]
    fn pole_correction_matches_reference() {
        let (sys, pol) = c60(3000.0, 0.5, 0.0494);
        let f1 = thermal_correction_1(&sys, &pol).unwrap();
        assert_relative_eq!(f1, -1.0471108233690193e-39, max_relative = 1e-8);
        // Exponentially small at low T.
        let (sys2, _) = c60(300.0, 0.5, 0.0494);
        let f1_cold = thermal_correction_1(&sys2, &pol).unwrap();
        assert!(f1_cold.abs() < 1e-200);
    }

    #[test]
    fn branch_cut_correction_matches_reference() {
        let ctrl = SeriesControl { rel_tol: 1e-9, ..Default::default() };
        let (sys, pol) = c60(300.0, 1.0, 0.5);
        let f2 = thermal_correction_2(&sys, &pol, &ctrl).unwrap();
        assert_relative_eq!(f2, -8.026615901313594e-37, max_relative = 5e-6);
    }

    #[test]
    fn branch_cut_low_temperature_quartic_law() {
        // F2 -> -(4 pi^3/15) alpha0 (k_B T)^4 / ((hbar c)^3 chi^6).
        let (sys, pol) = c60(30.0, 0.5, 0.0494);
        let ctrl = SeriesControl { rel_tol: 1e-9, ..Default::default() };
        let f2 = thermal_correction_2(&sys, &pol, &ctrl).unwrap();
        let chi: f64 = 1.5;
        let law = -(4.0 * PI.powi(3) / 15.0) * pol.alpha0 * (K_B * 30.0f64).powi(4)
            / ((HBAR * C).powi(3) * chi.powi(6));
        assert_relative_eq!(f2, law, max_relative = 1e-3);
    }

    #[test]
    fn moment_integral_of_derivative_bracket() {
        // Int_0^inf (t^3/(e^{2 pi t}-1))' * 2t dt = -1/120, via the same
        // derivative-of-bracket-then-weight pattern as F2.
        let f = |t: f64| -> f64 {
            if t <= 0.0 {
                return 0.0;
            }
            let x = 2.0 * PI * t;
            if x > 600.0 {
                return 0.0;
            }
            let p = 1.0 / x.exp_m1();
            let pp = -2.0 * PI * (p + p * p);
            (3.0 * t * t * p + t.powi(3) * pp) * 2.0 * t
        };
        let v = adaptive_gk(&f, 0.0, 10.0, 1e-11, 1e-320, 400).unwrap();
        assert_relative_eq!(v.value, -1.0 / 120.0, max_relative = 1e-9);
    }

    #[test]
    fn assembled_breakdown_consistency() {
        let ctrl = SeriesControl { rel_tol: 1e-9, ..Default::default() };
        let (sys, pol) = c60(300.0, 2.0, 0.5);
        let b = free_energy(&sys, &pol, &ctrl).unwrap();
        assert_eq!(b.total, b.e0 + b.f1 + b.f2);
        assert!(b.e0 < 0.0 && b.f2 < 0.0);
        // T = 0: thermal parts exactly zero.
        let (sys0, _) = c60(0.0, 2.0, 0.5);
        let b0 = free_energy(&sys0, &pol, &ctrl).unwrap();
        assert_eq!(b0.f1, 0.0);
        assert_eq!(b0.f2, 0.0);
        assert_eq!(b0.total, b0.e0);
        // Q = 0: everything zero.
        let (mut sysq, _) = c60(300.0, 2.0, 0.5);
        sysq.plasma_omega = 0.0;
        let bq = free_energy(&sysq, &pol, &ctrl).unwrap();
        assert_eq!(bq.total, 0.0);
    }

    #[test]
    fn static_polarizability_rejected_for_thermal_parts() {
        let (sys, _) = c60(300.0, 0.5, 0.5);
        let stat = Polarizability::static_mode(0.667e-30);
        assert!(thermal_correction_1(&sys, &stat).is_err());
        assert!(thermal_correction_2(&sys, &stat, &SeriesControl::default()).is_err());
        // E0 works for the static mode.
        assert!(zero_temperature_energy(&sys, &stat, &SeriesControl::default()).is_ok());
    }
}
