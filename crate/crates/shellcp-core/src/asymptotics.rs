//! Closed-form limit regimes of the shell-atom free energy: the flat-plate
//! expansion with curvature corrections, the low- and high-temperature laws,
//! the short-distance law, the Casimir-Polder normalization, and the
//! eta0/eta1 profile functions with their analytic tau-derivatives.
//!
//! Every regime evaluator records the inequalities it assumes together with
//! their numeric slack instead of silently trusting them; outright violations
//! (slack >= 1) are reported as regime errors.

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::matsubara::{self, SeriesControl};
use crate::model::{effective_temperatures, reduce, PhysicalSystem, Polarizability, PolarizabilityMode};
use crate::quad;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which asymptotic law produced a [`RegimeResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    FlatPlate,
    LowT,
    HighT,
    ShortDistance,
}

/// One recorded validity inequality. `slack` is the ratio
/// (small quantity)/(large quantity); the assumption reads `slack << 1` and
/// `satisfied` means `slack < 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityCheck {
    pub condition: &'static str,
    pub slack: f64,
    pub satisfied: bool,
}

impl ValidityCheck {
    fn new(condition: &'static str, slack: f64) -> Self {
        ValidityCheck { condition, slack, satisfied: slack.is_finite() && slack < 1.0 }
    }
}

/// Value of an asymptotic law together with the assumptions it rests on.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeResult {
    /// Energy (J).
    pub value: f64,
    pub regime: Regime,
    pub validity: Vec<ValidityCheck>,
}

fn ensure_regime(context: &'static str, checks: &[ValidityCheck]) -> Result<()> {
    let violated: Vec<String> = checks
        .iter()
        .filter(|c| !c.satisfied)
        .map(|c| format!("{} = {:.3e} (need << 1)", c.condition, c.slack))
        .collect();
    if violated.is_empty() {
        Ok(())
    } else {
        Err(Error::regime(context, violated.join("; ")))
    }
}

// ---------------------------------------------------------------------------
// Casimir-Polder normalization
// ---------------------------------------------------------------------------

/// Zero-temperature ideal-plate Casimir-Polder energy -3 hbar c alpha0 / (8 pi d^4).
pub fn casimir_polder_energy(alpha0: f64, d: f64) -> Result<f64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::domain("casimir_polder_energy", "separation d must be > 0"));
    }
    if !(alpha0.is_finite() && alpha0 >= 0.0) {
        return Err(Error::domain("casimir_polder_energy", "alpha0 must be >= 0"));
    }
    Ok(-3.0 * HBAR * C * alpha0 / (8.0 * PI * d.powi(4)))
}

// ---------------------------------------------------------------------------
// eta0 / eta1 profile functions (ideal plate + first curvature correction,
// static polarizability) and their analytic tau-derivatives
// ---------------------------------------------------------------------------

/// tau -> 0 limit of eta0 (the ideal-plate zero-temperature normalization).
pub const ETA0_AT_ZERO: f64 = 1.0;
/// tau -> 0 limit of eta1 (curvature correction at zero temperature).
pub const ETA1_AT_ZERO: f64 = -67.0 / 45.0;

/// Both eta functions and their derivatives switch from a small-tau series to
/// the closed form here. Below the cut the closed forms lose digits to the
/// cancellation of O(1/tau) pieces; above it the series truncation grows.
const ETA_SERIES_CUT: f64 = 0.9;

/// eta0 small-tau series: 1 + sum c_{2m} tau^{2m} (even powers from tau^4).
const ETA0_SERIES: [(i32, f64); 7] = [
    (4, -1.0 / 2160.0),
    (6, 1.0 / 15120.0),
    (8, -1.0 / 241_920.0),
    (10, 1.0 / 5_132_160.0),
    (12, -691.0 / 87_178_291_200.0),
    (14, 1.0 / 3_396_556_800.0),
    (16, -3617.0 / 351_778_775_040_000.0),
];

/// eta1 small-tau series coefficients (power, coefficient). The tau^3 and
/// tau^5 entries carry the two subtracted-integral constants
/// C1 = int_0^inf [cosh t/(t sinh^5 t) - t^-6 + t^-4/3] dt and
/// C2 = int_0^inf [cosh t/(t sinh^3 t) - t^-4] dt.
const ETA1_SERIES: [(i32, f64); 10] = [
    (0, -67.0 / 45.0),
    (3, 0.010149485686131089),
    (4, -1.0 / 432.0),
    (5, 6.653176208557146e-4),
    (6, -29.0 / 136_080.0),
    (8, 173.0 / 18_144_000.0),
    (10, -4.2389757998223607e-7),
    (12, 1.6845103484440289e-8),
    (14, -6.177595145982725e-10),
    (16, 2.1399233441795923e-11),
];

const ETA1_PRIME_SERIES: [(i32, f64); 9] = [
    (2, 0.030448457058393268),
    (3, -1.0 / 108.0),
    (4, 3.3265881042785728e-3),
    (5, -29.0 / 22_680.0),
    (7, 173.0 / 2_268_000.0),
    (9, -4.2389757998223607e-6),
    (11, 2.0214124181328347e-7),
    (13, -8.648633204375816e-9),
    (15, 3.4238773506873478e-10),
];

fn eval_powers(terms: &[(i32, f64)], tau: f64, offset: f64) -> f64 {
    let mut acc = offset;
    for &(k, c) in terms {
        acc += c * tau.powi(k);
    }
    acc
}

/// Geometric sums S_k(x) = sum_{n>=1} n^k x^n with x = e^{-tau}, which
/// resum the Planck brackets: S_0..S_4.
fn planck_sums(tau: f64) -> [f64; 5] {
    let x = (-tau).exp();
    let om = -(-tau).exp_m1(); // 1 - x, accurate for small tau
    let i1 = 1.0 / om;
    let i2 = i1 * i1;
    [
        x * i1,
        x * i2,
        x * (1.0 + x) * i2 * i1,
        x * (1.0 + x * (4.0 + x)) * i2 * i2,
        x * (1.0 + x * (11.0 + x * (11.0 + x))) * i2 * i2 * i1,
    ]
}

fn eta0_closed(tau: f64) -> f64 {
    let [s0, s1, s2, _, _] = planck_sums(tau);
    tau / 6.0 * (1.0 + 2.0 * s0 + 2.0 * tau * s1 + tau * tau * s2)
}

fn eta0_prime_closed(tau: f64) -> f64 {
    let [s0, s1, s2, s3, _] = planck_sums(tau);
    let t2 = tau * tau;
    (1.0 + 2.0 * s0 + 2.0 * tau * s1 + t2 * s2 - t2 * tau * s3) / 6.0
}

/// Elementary (bracket) part of eta1 and its derivative.
fn eta1_bracket_closed(tau: f64) -> f64 {
    let [s0, s1, s2, s3, _] = planck_sums(tau);
    let t2 = tau * tau;
    -tau / 6.0 * (1.0 + 2.0 * s0 + 2.0 * tau * s1 + 1.5 * t2 * s2 + 0.5 * t2 * tau * s3)
}

fn eta1_bracket_prime_closed(tau: f64) -> f64 {
    let [s0, s1, s2, s3, s4] = planck_sums(tau);
    let t2 = tau * tau;
    -(1.0 + 2.0 * s0 + 2.0 * tau * s1 + 2.5 * t2 * s2 + 0.5 * t2 * tau * s3
        - 0.5 * t2 * t2 * s4)
        / 6.0
}

/// cosh(y)/(y sinh^p(y)) without overflow: 2^{p-1} e^{-(p-1)y}(1+x)/(y(1-x)^p),
/// x = e^{-2y}.
fn cosh_over_y_sinh_pow(y: f64, p: i32) -> f64 {
    let x = (-2.0 * y).exp();
    let om = -(-2.0 * y).exp_m1();
    let scale = (2.0f64).powi(p - 1) * (-(p as f64 - 1.0) * y).exp();
    scale * (1.0 + x) / (y * om.powi(p))
}

/// int_y^inf cosh t/(t sinh^p t) dt by adaptive quadrature on log-spread
/// segments; the integrand decays like e^{-(p-1)t}.
fn sinh_power_integral(y: f64, p: i32, rel_tol: f64) -> Result<f64> {
    if (p as f64 - 1.0) * y > 700.0 {
        return Ok(0.0);
    }
    let f = |t: f64| cosh_over_y_sinh_pow(t, p);
    let edges = [y, y + 0.5, y + 1.5, y + 4.0, y + 10.0, y + 25.0, y + 60.0];
    let mut total = 0.0;
    for w in edges.windows(2) {
        let r = quad::adaptive_gk(&f, w[0], w[1], rel_tol, 1e-300, 200)?;
        total += r.value;
    }
    Ok(total)
}

fn eta_quad_tol(ctrl: &SeriesControl) -> f64 {
    ctrl.rel_tol.min(1e-12).max(1e-14)
}

fn check_tau(context: &'static str, tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::domain(context, "tau must be finite and > 0"));
    }
    Ok(())
}

/// Ideal-plate profile eta0(tau); free energy of the static-polarizability
/// flat-plate limit is E_CP * eta0.
pub fn eta0(tau: f64) -> Result<f64> {
    check_tau("eta0", tau)?;
    if tau <= ETA_SERIES_CUT {
        Ok(eval_powers(&ETA0_SERIES, tau, 1.0))
    } else {
        Ok(eta0_closed(tau))
    }
}

/// Analytic tau-derivative of eta0.
pub fn eta0_prime(tau: f64) -> Result<f64> {
    check_tau("eta0_prime", tau)?;
    if tau <= ETA_SERIES_CUT {
        let mut acc = 0.0;
        for &(k, c) in &ETA0_SERIES {
            acc += c * (k as f64) * tau.powi(k - 1);
        }
        Ok(acc)
    } else {
        Ok(eta0_prime_closed(tau))
    }
}

/// First curvature-correction profile eta1(tau); the corrected flat-plate
/// free energy for static polarizability is E_CP (eta0 + (d/R) eta1).
pub fn eta1(tau: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_tau("eta1", tau)?;
    if tau <= ETA_SERIES_CUT {
        return Ok(eval_powers(&ETA1_SERIES, tau, 0.0));
    }
    let tol = eta_quad_tol(ctrl);
    let y = 0.5 * tau;
    let i5 = sinh_power_integral(y, 5, tol)?;
    let i3 = sinh_power_integral(y, 3, tol)?;
    let t2 = tau * tau;
    let t3 = t2 * tau;
    Ok(eta1_bracket_closed(tau) + t3 * t2 / 16.0 * i5 + t3 * (t2 - 4.0) / 48.0 * i3)
}

/// Analytic tau-derivative of eta1: bracket derivative plus the Leibniz
/// boundary terms from the moving lower limit tau/2 of the two integrals.
pub fn eta1_prime(tau: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_tau("eta1_prime", tau)?;
    if tau <= ETA_SERIES_CUT {
        return Ok(eval_powers(&ETA1_PRIME_SERIES, tau, 0.0));
    }
    let tol = eta_quad_tol(ctrl);
    let y = 0.5 * tau;
    let i5 = sinh_power_integral(y, 5, tol)?;
    let i3 = sinh_power_integral(y, 3, tol)?;
    let w5 = if 4.0 * y > 700.0 { 0.0 } else { cosh_over_y_sinh_pow(y, 5) };
    let w3 = if 2.0 * y > 700.0 { 0.0 } else { cosh_over_y_sinh_pow(y, 3) };
    let t2 = tau * tau;
    let t3 = t2 * tau;
    let t4 = t2 * t2;
    Ok(eta1_bracket_prime_closed(tau)
        + 5.0 * t4 / 16.0 * i5
        - t4 * tau / 32.0 * w5
        + (5.0 * t4 - 12.0 * t2) / 48.0 * i3
        - t3 * (t2 - 4.0) / 96.0 * w3)
}

// ---------------------------------------------------------------------------
// Flat-plate Matsubara sum with 1/R curvature corrections
// ---------------------------------------------------------------------------

/// One reduced-frequency term of the flat-plate expansion:
/// J_n = int_y^inf Q^2 e^{-Q} B(Q) dQ with y = n tau and
/// B = 1 - 3r + r (Q^2-y^2)^2/Q^5 + (r/2)(Q^2-y^2)/Q.
///
/// Evaluated by Gauss-Laguerre after the shift Q = y + u. The n = 0 case
/// has the closed form 2 - 2r (and 2 without corrections).
fn flat_plate_jn(y: f64, r: f64, corrections: bool, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    if y > 745.0 {
        return 0.0; // e^{-y} underflows; the term is gone
    }
    if !corrections {
        return (-y).exp() * (2.0 + y * (2.0 + y));
    }
    let mut s = 0.0;
    for (&u, &w) in gl.0.iter().zip(gl.1.iter()) {
        let q = y + u;
        let dq2 = u * (u + 2.0 * y); // Q^2 - y^2
        let b = 1.0 - 3.0 * r + r * dq2 * dq2 / q.powi(5) + 0.5 * r * dq2 / q;
        s += w * q * q * b;
    }
    (-y).exp() * s
}

/// Flat-plate (large sphere, ideal conductor) free energy at separation d:
/// the leading ideal-plate Matsubara sum, optionally with the three O(d/R)
/// curvature corrections. Uses the same stopping policy as the full
/// Matsubara sum; the transverse-momentum integral is Gauss-Laguerre.
pub fn flat_plate_energy(
    sys: &PhysicalSystem,
    pol: &Polarizability,
    ctrl: &SeriesControl,
    include_corrections: bool,
) -> Result<f64> {
    ctrl.validate()?;
    let point = reduce(sys)?;
    if !(sys.temperature_t > 0.0) {
        return Err(Error::domain(
            "flat_plate_energy",
            "the Matsubara form of the flat-plate sum requires T > 0",
        ));
    }
    let tau = point.tau;
    let d = sys.separation_d;
    let pref = -K_B * sys.temperature_t * pol.alpha0 / (4.0 * d.powi(3));
    let gl = quad::gauss_laguerre(48);
    let inv_a = 1.0 / point.a; // n T / T_omega per unit n

    let j0 = if include_corrections { 2.0 - 2.0 * point.r } else { 2.0 };
    let mut sum = 0.5 * j0;
    let mut prev_term = f64::INFINITY;
    let mut streak = 0u32;
    let mut n = 1u64;
    loop {
        let y = n as f64 * tau;
        let term = pol.ratio_at(n as f64 * inv_a) * flat_plate_jn(y, point.r, include_corrections, &gl);
        sum += term;
        let small = term.abs() <= 0.1 * ctrl.rel_tol * sum.abs();
        streak = if small { streak + 1 } else { 0 };
        if streak >= 3 {
            let ratio = term.abs() / prev_term.abs();
            if ratio < 1.0 - 1e-9 {
                let bound = term.abs() * ratio / (1.0 - ratio);
                if bound <= ctrl.rel_tol * sum.abs() {
                    return Ok(pref * sum);
                }
            }
        }
        prev_term = if term != 0.0 { term } else { prev_term };
        n += 1;
        if n > ctrl.n_max_cap {
            return Err(Error::Convergence {
                context: "flat-plate frequency sum hit n_max_cap",
                partial: pref * sum,
                bound: prev_term.abs(),
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Temperature / distance regime laws
// ---------------------------------------------------------------------------

/// Quartic thermal coefficient S_T = 2 r^4 / (45 (1+r)^6) of the
/// low-temperature law E_CP (S_Omega + S_T (T/T_R)^4).
pub fn low_temperature_thermal_coefficient(r: f64) -> f64 {
    2.0 * r.powi(4) / (45.0 * (1.0 + r).powi(6))
}

/// Normalized high-temperature slope: the free energy approaches
/// E_CP * s_bar * (T/T_R) with s_bar = 2r(6r^4+24r^3+33r^2+18r+4)/(3(r+1)^4(r+2)^3).
pub fn high_temperature_slope(r: f64) -> f64 {
    let num = 2.0 * r * (4.0 + r * (18.0 + r * (33.0 + r * (24.0 + 6.0 * r))));
    let den = 3.0 * (r + 1.0).powi(4) * (r + 2.0).powi(3);
    num / den
}

/// Low-temperature law: E_CP (S_Omega + S_T (T/T_R)^4) with S_Omega taken
/// operationally as E0/E_CP from the zero-temperature integral. Requires
/// T well below all three geometric temperature scales and T/T_R << Q.
pub fn low_temperature_energy(sys: &PhysicalSystem, pol: &Polarizability) -> Result<RegimeResult> {
    let point = reduce(sys)?;
    let temps = effective_temperatures(sys)?;
    let t = sys.temperature_t;
    let t_rd = temps.t_d * sys.radius_r / (sys.radius_r + sys.separation_d);
    let q_slack = if point.q > 0.0 { point.t_ratio_r / point.q } else { f64::INFINITY };
    let validity = vec![
        ValidityCheck::new("T / T_omega", t / temps.t_omega),
        ValidityCheck::new("T / T_R", t / temps.t_r),
        ValidityCheck::new("T / (T_d R/(R+d))", t / t_rd),
        ValidityCheck::new("(T/T_R) / Q", q_slack),
    ];
    ensure_regime("low_temperature_energy", &validity)?;
    let ecp = casimir_polder_energy(pol.alpha0, sys.separation_d)?;
    let e0 = crate::abel_plana::zero_temperature_energy(sys, pol, &SeriesControl::default())?;
    let st = low_temperature_thermal_coefficient(point.r);
    let value = e0 + ecp * st * point.t_ratio_r.powi(4);
    Ok(RegimeResult { value, regime: Regime::LowT, validity })
}

/// High-temperature law: the free energy collapses onto the n = 0 Matsubara
/// mode, linear in T. Identical to the zero-mode closed form.
pub fn high_temperature_energy(sys: &PhysicalSystem, pol: &Polarizability) -> Result<RegimeResult> {
    let point = reduce(sys)?;
    let temps = effective_temperatures(sys)?;
    let t = sys.temperature_t;
    let inv = if t > 0.0 { 1.0 / t } else { f64::INFINITY };
    let validity = vec![
        ValidityCheck::new("T_omega / T", temps.t_omega * inv),
        ValidityCheck::new("T_R / T", temps.t_r * inv),
        ValidityCheck::new("T_d / T", temps.t_d * inv),
    ];
    ensure_regime("high_temperature_energy", &validity)?;
    let value = matsubara::zero_mode(&point, pol.alpha0, t, sys.radius_r)?;
    Ok(RegimeResult { value, regime: Regime::HighT, validity })
}

/// Short-distance law: -(alpha0/4d^3)(hbar omega_a/2 + hbar omega_a Planck
/// occupation). Valid for r = d/R << Q; needs the single-oscillator model.
pub fn short_distance_energy(sys: &PhysicalSystem, pol: &Polarizability) -> Result<RegimeResult> {
    let point = reduce(sys)?;
    if pol.mode != PolarizabilityMode::SingleOscillator {
        return Err(Error::domain(
            "short_distance_energy",
            "the short-distance law uses the single-oscillator Planck form",
        ));
    }
    let slack = if point.q > 0.0 { point.r / point.q } else { f64::INFINITY };
    let validity = vec![ValidityCheck::new("r / Q", slack)];
    ensure_regime("short_distance_energy", &validity)?;
    let d = sys.separation_d;
    let hw = HBAR * pol.omega_a;
    let occupation = if sys.temperature_t > 0.0 {
        let x = hw / (K_B * sys.temperature_t);
        if x > 700.0 { 0.0 } else { 1.0 / x.exp_m1() }
    } else {
        0.0
    };
    let value = -pol.alpha0 / (4.0 * d.powi(3)) * (0.5 * hw + hw * occupation);
    Ok(RegimeResult { value, regime: Regime::ShortDistance, validity })
}
