//! Property-based tests: structural identities that must hold for every
//! admissible input, exercised on randomized orders, arguments, and shell
//! strengths rather than hand-picked grids.

use proptest::prelude::*;
use shellcp_core::matsubara::{jost_te, jost_tm};
use shellcp_core::specfun::{ModRiccatiTable, OscRiccatiTable, Scaled};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    /// s_l'(x) e_l(x) + s_l(x) |e_l'(x)| = 1 for the modified pair, at any
    /// order and argument, including deep in the over/underflow regime where
    /// only the scaled representation keeps the factors finite.
    #[test]
    fn modified_wronskian_holds_everywhere(
        l in 1u32..=1500,
        x in log_uniform(1e-3, 50.0),
    ) {
        let t = ModRiccatiTable::build(x, l).unwrap();
        let w = t.sp(l).mul(t.e(l)).add(t.s(l).mul(t.ep_abs(l))).to_f64();
        prop_assert!(
            (w - 1.0).abs() <= 1e-10,
            "l={} x={}: wronskian {} != 1", l, x, w
        );
    }

    /// j_l(x) y_l'(x) - j_l'(x) y_l(x) = 1 for the oscillatory pair.
    #[test]
    fn oscillatory_wronskian_holds_everywhere(
        l in 1u32..=1500,
        x in log_uniform(1e-3, 50.0),
    ) {
        let t = OscRiccatiTable::build(x, l).unwrap();
        let w = t.j(l).mul(t.yp(l)).sub(t.jp(l).mul(t.y(l))).to_f64();
        prop_assert!(
            (w - 1.0).abs() <= 1e-10,
            "l={} x={}: wronskian {} != 1", l, x, w
        );
    }

    /// Both Jost factors are >= 1 for every order, frequency, and strength:
    /// the mode denominators can never vanish on the imaginary axis.
    #[test]
    fn jost_factors_never_fall_below_unity(
        l in 1u32..=300,
        x in log_uniform(1e-3, 200.0),
        q in log_uniform(1e-4, 1e4),
    ) {
        prop_assert!(jost_te(l, x, q).unwrap() >= 1.0);
        prop_assert!(jost_tm(l, x, q).unwrap() >= 1.0);
    }

    /// The scaled representation reproduces plain f64 arithmetic wherever
    /// the latter is exact enough to compare.
    #[test]
    fn scaled_products_match_f64(a in -1e8f64..1e8, b in -1e8f64..1e8) {
        let got = Scaled::from_f64(a).mul(Scaled::from_f64(b)).to_f64();
        let want = a * b;
        prop_assert!((got - want).abs() <= 1e-14 * want.abs().max(1e-30));
    }
}
