//! Cross-representation and cross-route physics checks on a frozen
//! parameter grid, plus limit behaviors: exact transparency at zero shell
//! strength, strict binding for positive strength, the large-radius plate
//! limit, and the low/high-temperature entropy laws.
//!
//! The frozen numbers were produced by an independent float64 pipeline
//! (separate language and quadrature stack) and agree between its own two
//! representations at the 1e-9 level; they are pinned here verbatim.

use shellcp_core::abel_plana::{free_energy as decomposed_free_energy, SpectralFunctions};
use shellcp_core::asymptotics::flat_plate_energy;
use shellcp_core::constants::{C, EV, HBAR, K_B};
use std::f64::consts::PI;
use shellcp_core::entropy::{entropy_analytic, entropy_fd};
use shellcp_core::matsubara::{free_energy as matsubara_free_energy, SeriesControl};
use shellcp_core::model::{PhysicalSystem, Polarizability};

/// Shell radius of the reference system (m).
const RADIUS: f64 = 0.342e-9;
/// Oscillator energy of the reference atom (eV).
const ATOM_EV: f64 = 11.65;
/// Static polarizability of the reference atom (m^3).
const ALPHA0: f64 = 0.667e-30;

struct GridPoint {
    q: f64,
    r: f64,
    t: f64,
    mats: f64,
    e0: f64,
    f1: f64,
    f2: f64,
    e1: f64,
}

const GRID: [GridPoint; 27] = [
    GridPoint { q: 0.0494, r: 0.5, t: 30.0, mats: -1.7995343287521056e-20, e0: -1.799534328762584e-20, f1: -0.0, f2: -4.509460648597641e-40, e1: 2.819875612914487 },
    GridPoint { q: 0.0494, r: 0.5, t: 300.0, mats: -1.7995343290091266e-20, e0: -1.799534328762584e-20, f1: -7.581324242311607e-216, f2: -4.509885412156847e-36, e1: 2.819875612914487 },
    GridPoint { q: 0.0494, r: 0.5, t: 3000.0, mats: -1.799534329057879e-20, e0: -1.799534328762584e-20, f1: -1.0471108233690193e-39, f2: -4.553261739245152e-32, e1: 2.819875612914487 },
    GridPoint { q: 0.0494, r: 1.0, t: 30.0, mats: -1.3978647516419743e-21, e0: -1.3978647516545038e-21, f1: -0.0, f2: -8.025871180774093e-41, e1: 0.3972347798333332 },
    GridPoint { q: 0.0494, r: 1.0, t: 300.0, mats: -1.3978647516538406e-21, e0: -1.3978647516545038e-21, f1: -6.00737734494971e-217, f2: -8.026632684760869e-37, e1: 0.3972347798333332 },
    GridPoint { q: 0.0494, r: 1.0, t: 3000.0, mats: -1.3978647516626081e-21, e0: -1.3978647516545038e-21, f1: -8.297217790596295e-41, f2: -8.104396660125615e-33, e1: 0.3972347798333332 },
    GridPoint { q: 0.0494, r: 2.0, t: 30.0, mats: -7.768838821328266e-23, e0: -7.768838821384498e-23, f1: -0.0, f2: -7.046032726684904e-42, e1: 0.050519293243640934 },
    GridPoint { q: 0.0494, r: 2.0, t: 300.0, mats: -7.768838821363292e-23, e0: -7.768838821384498e-23, f1: -3.395567705348273e-218, f2: -7.046742290550751e-38, e1: 0.050519293243640934 },
    GridPoint { q: 0.0494, r: 2.0, t: 3000.0, mats: -7.768838821455686e-23, e0: -7.768838821384498e-23, f1: -4.6898610085938894e-42, f2: -7.1192030486660926e-34, e1: 0.050519293243640934 },
    GridPoint { q: 0.5, r: 0.5, t: 30.0, mats: -1.8873915757959434e-20, e0: -1.8873915758076774e-20, f1: -0.0, f2: -4.509460555188516e-40, e1: 2.8039287256889556 },
    GridPoint { q: 0.5, r: 0.5, t: 300.0, mats: -1.8873915760545037e-20, e0: -1.8873915758076774e-20, f1: -7.538450534635057e-216, f2: -4.509876069323153e-36, e1: 2.8039287256889556 },
    GridPoint { q: 0.5, r: 0.5, t: 3000.0, mats: -1.8873915761029592e-20, e0: -1.8873915758076774e-20, f1: -1.0411892294744431e-39, f2: -4.552307428859877e-32, e1: 2.8039287256889556 },
    GridPoint { q: 0.5, r: 1.0, t: 30.0, mats: -1.4779409416748967e-21, e0: -1.4779409416855742e-21, f1: -0.0, f2: -8.025871012974234e-41, e1: 0.3940289094796411 },
    GridPoint { q: 0.5, r: 1.0, t: 300.0, mats: -1.4779409416790157e-21, e0: -1.4779409416855742e-21, f1: -5.9588950017326945e-217, f2: -8.026615901313594e-37, e1: 0.3940289094796411 },
    GridPoint { q: 0.5, r: 1.0, t: 3000.0, mats: -1.4779409416936768e-21, e0: -1.4779409416855742e-21, f1: -8.23025536463712e-41, f2: -8.10268221100628e-33, e1: 0.3940289094796411 },
    GridPoint { q: 0.5, r: 2.0, t: 30.0, mats: -8.236248707766816e-23, e0: -8.236248707844435e-23, f1: -0.0, f2: -7.046032567548769e-42, e1: 0.05002153605670416 },
    GridPoint { q: 0.5, r: 2.0, t: 300.0, mats: -8.236248707844425e-23, e0: -8.236248707844435e-23, f1: -3.362111809183688e-218, f2: -7.0467263735648e-38, e1: 0.05002153605670416 },
    GridPoint { q: 0.5, r: 2.0, t: 3000.0, mats: -8.236248707915607e-23, e0: -8.236248707844435e-23, f1: -4.6436526815790225e-42, f2: -7.1175761867847395e-34, e1: 0.05002153605670416 },
    GridPoint { q: 5.0, r: 0.5, t: 30.0, mats: -1.91406486415839e-20, e0: -1.9140648641699706e-20, f1: -0.0, f2: -4.509460545077866e-40, e1: 2.802299270985678 },
    GridPoint { q: 5.0, r: 0.5, t: 300.0, mats: -1.914064864402415e-20, e0: -1.9140648641699706e-20, f1: -7.534069694435181e-216, f2: -4.509875058055892e-36, e1: 2.802299270985678 },
    GridPoint { q: 5.0, r: 0.5, t: 3000.0, mats: -1.9140648644651362e-20, e0: -1.9140648641699706e-20, f1: -1.0405841603543098e-39, f2: -4.552204174054944e-32, e1: 2.802299270985678 },
    GridPoint { q: 5.0, r: 1.0, t: 30.0, mats: -1.501350233826252e-21, e0: -1.5013502338387963e-21, f1: -0.0, f2: -8.025870989202453e-41, e1: 0.3936853155577935 },
    GridPoint { q: 5.0, r: 1.0, t: 300.0, mats: -1.5013502338383594e-21, e0: -1.5013502338387963e-21, f1: -5.953698834511798e-217, f2: -8.026613523656246e-37, e1: 0.3936853155577935 },
    GridPoint { q: 5.0, r: 1.0, t: 3000.0, mats: -1.5013502338468988e-21, e0: -1.5013502338387963e-21, f1: -8.223078567070977e-41, f2: -8.102439432279289e-33, e1: 0.3936853155577935 },
    GridPoint { q: 5.0, r: 2.0, t: 30.0, mats: -8.368612364453333e-23, e0: -8.368612364533295e-23, f1: -0.0, f2: -7.046032502001429e-42, e1: 0.049961187667386275 },
    GridPoint { q: 5.0, r: 2.0, t: 300.0, mats: -8.368612364533195e-23, e0: -8.368612364533295e-23, f1: -3.358055595632771e-218, f2: -7.046719817500181e-38, e1: 0.049961187667386275 },
    GridPoint { q: 5.0, r: 2.0, t: 3000.0, mats: -8.368612364604463e-23, e0: -8.368612364533295e-23, f1: -4.6380503554215986e-42, f2: -7.116906699757342e-34, e1: 0.049961187667386275 },
];

/// Frozen entropy values on the (r, T) sub-grid at the reference strength.
const ENTROPY_GRID: [(f64, f64, f64); 9] = [
    (0.5, 30.0, 6.012617057912903e-41),
    (0.5, 300.0, 6.013466643456288e-38),
    (0.5, 3000.0, 6.100849871190704e-35),
    (1.0, 30.0, 1.07011667013029e-41),
    (1.0, 300.0, 1.0702689814037243e-38),
    (1.0, 3000.0, 1.0859346759174538e-35),
    (2.0, 30.0, 9.394715079480174e-43),
    (2.0, 300.0, 9.396134304861911e-40),
    (2.0, 3000.0, 9.542107948734138e-37),
];

/// High-temperature plateau values S(T >= 100 T_omega) for the same system.
const PLATEAU: [(f64, f64); 2] =
    [(0.5, 2.8666981534524925e-25), (2.0, 1.2767434973045258e-27)];

fn system(q: f64, r: f64, t: f64) -> (PhysicalSystem, Polarizability) {
    let sys = PhysicalSystem {
        radius_r: RADIUS,
        plasma_omega: q / RADIUS,
        atom_omega_a: ATOM_EV * EV / HBAR,
        alpha0: ALPHA0,
        separation_d: r * RADIUS,
        temperature_t: t,
    };
    let pol = Polarizability::single_oscillator(sys.alpha0, sys.atom_omega_a);
    (sys, pol)
}

fn check_rel(label: &str, got: f64, want: f64, tol: f64) {
    let denom = want.abs().max(f64::MIN_POSITIVE);
    let rel = (got - want).abs() / denom;
    assert!(
        rel <= tol,
        "{label}: got {got:e}, want {want:e}, rel {rel:.3e} > tol {tol:.1e}"
    );
}

/// The central claim of the artifact: the direct Matsubara sum and the
/// zero-temperature + two-thermal-corrections decomposition are the same
/// number, and both reproduce the independently frozen grid.
#[test]
fn representations_agree_and_match_the_frozen_grid() {
    let ctrl = SeriesControl { rel_tol: 1e-8, ..Default::default() };
    for p in &GRID {
        let tag = format!("(Q={}, r={}, T={})", p.q, p.r, p.t);
        let (sys, pol) = system(p.q, p.r, p.t);

        let mats = matsubara_free_energy(&sys, &pol, &ctrl).unwrap().total;
        assert!(mats < 0.0, "{tag}: binding energy must be negative");
        check_rel(&format!("{tag} mats"), mats, p.mats, 5e-8);

        let dec = decomposed_free_energy(&sys, &pol, &ctrl).unwrap();
        check_rel(&format!("{tag} e0"), dec.e0, p.e0, 1e-7);
        if p.f1 == 0.0 {
            assert_eq!(dec.f1, 0.0, "{tag}: pole correction must freeze out");
        } else {
            check_rel(&format!("{tag} f1"), dec.f1, p.f1, 1e-6);
        }
        check_rel(&format!("{tag} f2"), dec.f2, p.f2, 1e-6);
        assert_eq!(dec.total, dec.e0 + dec.f1 + dec.f2, "{tag}: breakdown sum");

        check_rel(&format!("{tag} equivalence"), dec.total, mats, 1e-7);

        let sf = SpectralFunctions::new(1.0 + p.r, p.q).unwrap();
        let q_a = pol.omega_a * RADIUS / C;
        check_rel(&format!("{tag} e1"), sf.e1_at(q_a).unwrap(), p.e1, 1e-9);
    }
}

/// A transparent shell (zero plasma strength) interacts with nothing: every
/// representation and both entropy routes return exactly 0, not merely a
/// small number.
#[test]
fn zero_strength_is_exactly_transparent() {
    let ctrl = SeriesControl::default();
    for &(r, t) in &[(0.5, 30.0), (0.5, 3000.0), (2.0, 300.0)] {
        let (sys, pol) = system(0.0, r, t);
        assert_eq!(matsubara_free_energy(&sys, &pol, &ctrl).unwrap().total, 0.0);
        let dec = decomposed_free_energy(&sys, &pol, &ctrl).unwrap();
        assert_eq!(dec.e0, 0.0);
        assert_eq!(dec.f1, 0.0);
        assert_eq!(dec.f2, 0.0);
        assert_eq!(entropy_analytic(&sys, &pol, &ctrl).unwrap().total, 0.0);
        assert_eq!(entropy_fd(&sys, &pol, &ctrl).unwrap().total, 0.0);
    }
}

/// The analytic (term-wise temperature derivative) and finite-difference
/// entropy routes agree across four decades of temperature, spanning both
/// the branch-cut-integral representation and the resummed one.
#[test]
fn entropy_routes_agree_across_temperature_decades() {
    let ctrl = SeriesControl { rel_tol: 1e-7, ..Default::default() };
    for &r in &[0.25, 0.5, 1.0, 2.0] {
        for &t in &[30.0, 300.0, 3000.0, 3.0e4, 3.0e5] {
            let tag = format!("(r={r}, T={t})");
            let (sys, pol) = system(0.0494, r, t);
            let sa = entropy_analytic(&sys, &pol, &ctrl).unwrap();
            let sf = entropy_fd(&sys, &pol, &ctrl).unwrap();
            assert!(sa.total > 0.0, "{tag}: entropy positive at reference strength");
            assert_eq!(sa.total, sa.s1 + sa.s2, "{tag}: breakdown sum");
            check_rel(&format!("{tag} route agreement"), sf.total, sa.total, 1e-4);
        }
    }
}

/// Frozen-value regression for the entropy on the criterion sub-grid.
#[test]
fn entropy_matches_the_frozen_grid() {
    let ctrl = SeriesControl { rel_tol: 1e-8, ..Default::default() };
    for &(r, t, s) in &ENTROPY_GRID {
        let (sys, pol) = system(0.0494, r, t);
        let got = entropy_analytic(&sys, &pol, &ctrl).unwrap().total;
        check_rel(&format!("S(r={r}, T={t})"), got, s, 1e-6);
    }
}

/// Nernst: S vanishes as T^3 with the closed-form coefficient.
#[test]
fn low_temperature_entropy_follows_the_cubic_law() {
    let ctrl = SeriesControl { rel_tol: 1e-8, ..Default::default() };
    for &r in &[0.5, 2.0] {
        let s_at = |t: f64| {
            let (sys, pol) = system(0.0494, r, t);
            entropy_analytic(&sys, &pol, &ctrl).unwrap().total
        };
        let (s_lo, s_hi) = (s_at(15.0), s_at(60.0));
        let slope = (s_hi / s_lo).ln() / 4.0f64.ln();
        assert!(
            (slope - 3.0).abs() <= 0.05,
            "r={r}: fitted low-T exponent {slope} not within 3.00 +/- 0.05"
        );
        let chi6 = (1.0 + r).powi(6);
        let law = 16.0 * PI.powi(3) / 15.0 * K_B * ALPHA0
            * (K_B * 15.0 / (HBAR * C)).powi(3)
            / chi6;
        check_rel(&format!("r={r} cubic coefficient"), s_lo, law, 2e-2);
    }
}

/// High-temperature plateau: S saturates at the zero-mode value within 0.1%
/// for T >= 100 T_omega.
#[test]
fn high_temperature_entropy_reaches_the_plateau() {
    let ctrl = SeriesControl { rel_tol: 1e-8, ..Default::default() };
    let t_omega = ATOM_EV * EV / (2.0 * PI * K_B);
    for &(r, s_plateau) in &PLATEAU {
        for &factor in &[100.0, 300.0] {
            let (sys, pol) = system(0.0494, r, factor * t_omega);
            let got = entropy_analytic(&sys, &pol, &ctrl).unwrap().total;
            check_rel(&format!("plateau r={r} T={factor}T_omega"), got, s_plateau, 1e-3);
        }
    }
}

/// Large-radius limit at ideal shell strength, fixed separation: the plate
/// formula converges to the full sum as r -> 0. The leading term deviates
/// by about +1.13 r; the curvature-corrected form reduces the residual to
/// about -r/3 in the quantum regime (the printed correction does not cancel
/// all of the first order) and to below 1e-3 in the classical regime, where
/// the zero mode dominates and is exact through first order.
#[test]
fn plate_limit_is_approached_at_ideal_strength() {
    let ctrl = SeriesControl { rel_tol: 1e-10, ..Default::default() };
    let radius = 2.0e-8;
    let make = |r: f64, tau: f64| {
        let d = r * radius;
        let t = tau * HBAR * C / (4.0 * PI * K_B * d);
        let sys = PhysicalSystem {
            radius_r: radius,
            plasma_omega: 1e8 / radius,
            atom_omega_a: 1e25,
            alpha0: 1e-30,
            separation_d: d,
            temperature_t: t,
        };
        let pol = Polarizability::static_mode(sys.alpha0);
        (sys, pol)
    };
    for &r in &[0.04, 0.02] {
        let (sys, pol) = make(r, 2.0);
        let full = matsubara_free_energy(&sys, &pol, &ctrl).unwrap().total;
        let lead = flat_plate_energy(&sys, &pol, &ctrl, false).unwrap();
        let corr = flat_plate_energy(&sys, &pol, &ctrl, true).unwrap();
        let dev_lead = lead / full - 1.0;
        let dev_corr = corr / full - 1.0;
        assert!(
            (1.00..=1.30).contains(&(dev_lead / r)),
            "r={r}: leading-order deviation {dev_lead:e} not ~ +1.13 r"
        );
        assert!(
            (-0.46..=-0.28).contains(&(dev_corr / r)),
            "r={r}: corrected deviation {dev_corr:e} not ~ -r/3"
        );
        assert!(
            dev_corr.abs() < 0.5 * dev_lead.abs(),
            "r={r}: corrections must at least halve the plate-limit error"
        );
    }
    let (sys, pol) = make(0.02, 10.0);
    let full = matsubara_free_energy(&sys, &pol, &ctrl).unwrap().total;
    let corr = flat_plate_energy(&sys, &pol, &ctrl, true).unwrap();
    assert!(
        (corr / full - 1.0).abs() < 1.5e-3,
        "classical regime: corrected plate must match to 0.15%"
    );
}
