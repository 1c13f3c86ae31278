//! Quadrature and numerical-differentiation kernels shared by the energy
//! and entropy integrals: adaptive Gauss-Kronrod for smooth pieces,
//! tanh-sinh for endpoint singularities (the logarithmic factor at t = 1),
//! Gauss-Laguerre for exponential-times-polynomial integrands, and
//! Richardson-extrapolated central differences.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Value with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

// --- 7-15 Gauss-Kronrod pair (positive abscissae; symmetric) ---
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod evaluation on [a, b]: (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let fsum = f(c - dx) + f(c + dx);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive bisection Gauss-Kronrod on [a, b].
///
/// Splits the worst interval until `sum(err) <= max(abs_tol, rel_tol*|I|)`.
/// The final sum runs over intervals ordered by left endpoint, so results
/// are bitwise reproducible for a given integrand.
pub fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::domain("adaptive_gk", "need finite a < b"));
    }
    struct Seg {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
    }
    let (v0, e0) = gk15(f, a, b);
    let mut segs = vec![Seg { a, b, val: v0, err: e0 }];
    let mut evals = 15usize;
    loop {
        let total: f64 = segs.iter().map(|s| s.val).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if err <= tol || segs.len() >= max_intervals {
            let mut ordered: Vec<&Seg> = segs.iter().collect();
            ordered.sort_by(|p, q| p.a.total_cmp(&q.a));
            let value: f64 = ordered.iter().map(|s| s.val).sum();
            if err > tol {
                return Err(Error::Convergence {
                    context: "adaptive_gk".into(),
                    partial: value,
                    bound: err,
                });
            }
            return Ok(QuadResult { value, abs_error: err, evaluations: evals });
        }
        // Split the interval with the largest error.
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .unwrap();
        let Seg { a: sa, b: sb, .. } = segs.swap_remove(worst);
        let m = 0.5 * (sa + sb);
        let (v1, e1) = gk15(f, sa, m);
        let (v2, e2) = gk15(f, m, sb);
        evals += 30;
        segs.push(Seg { a: sa, b: m, val: v1, err: e1 });
        segs.push(Seg { a: m, b: sb, val: v2, err: e2 });
    }
}

/// Tanh-sinh (double-exponential) quadrature on [a, b]; handles integrable
/// endpoint singularities (log or mild algebraic) at either end.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::domain("tanh_sinh", "need finite a < b"));
    }
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let half_pi = 0.5 * std::f64::consts::PI;
    // x(u) = c + hw*tanh(pi/2 sinh u); du-weight = hw*(pi/2)cosh u/cosh^2(..)
    let eval = |u: f64| -> f64 {
        let s = half_pi * u.sinh();
        if s.abs() > 350.0 {
            return 0.0; // weight underflows; abscissa has hit the endpoint
        }
        let t = s.tanh();
        let x = c + hw * t;
        if x <= a || x >= b {
            return 0.0; // rounding collapsed onto the singular endpoint
        }
        let w = hw * half_pi * u.cosh() / s.cosh().powi(2);
        w * f(x)
    };
    const U_MAX: f64 = 6.5;
    let mut h = 1.0f64;
    let mut sum = eval(0.0);
    {
        let mut k = 1;
        while (k as f64) * h <= U_MAX {
            let u = (k as f64) * h;
            sum += eval(u) + eval(-u);
            k += 1;
        }
    }
    let mut prev = sum * h;
    let mut evals = (2.0 * U_MAX + 1.0) as usize;
    for _level in 0..12 {
        h *= 0.5;
        // add midpoints (odd multiples of the new h)
        let mut k = 1;
        let mut add = 0.0;
        while (k as f64) * h <= U_MAX {
            let u = (k as f64) * h;
            add += eval(u) + eval(-u);
            evals += 2;
            k += 2;
        }
        let cur = 0.5 * prev + h * add;
        let diff = (cur - prev).abs();
        if diff <= rel_tol * cur.abs().max(1e-300) && _level >= 2 {
            return Ok(QuadResult { value: cur, abs_error: diff, evaluations: evals });
        }
        prev = cur;
    }
    Err(Error::Convergence {
        context: "tanh_sinh".into(),
        partial: prev,
        bound: f64::NAN,
    })
}

/// Gauss-Laguerre nodes and weights for ∫_0^∞ e^{-x} f(x) dx ≈ Σ w_i f(x_i).
///
/// Computed by Newton iteration on the Laguerre recurrence; cached per n.
pub fn gauss_laguerre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let computed = Arc::new(compute_laguerre(n));
    cache.lock().unwrap().insert(n, computed.clone());
    computed
}

fn compute_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && n <= 300, "unsupported Gauss-Laguerre size");
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n {
        // Stroud-Secrest style initial guesses.
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
            }
        };
        // Evaluate L_n, L_{n-1} and L_n'(z) = n (L_n - L_{n-1}) / z.
        let eval = |z: f64| -> (f64, f64) {
            let mut p1 = 1.0f64;
            let mut p2 = 0.0f64;
            for k in 0..n {
                let kf = k as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * kf + 1.0 - z) * p2 - kf * p3) / (kf + 1.0);
            }
            (p1, nf * (p1 - p2) / z)
        };
        for _ in 0..200 {
            let (p, pp) = eval(z);
            let dz = p / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        nodes[i] = z;
        // Refresh L_n' at the converged root; w_i = 1/(x_i [L_n'(x_i)]^2).
        let (_, pp) = eval(z);
        weights[i] = 1.0 / (z * pp * pp);
    }
    (nodes, weights)
}

/// Richardson-extrapolated central difference df/dt at `t` with initial
/// step `h0`. Returns (derivative, error estimate). Uses three step sizes
/// h0, h0/2, h0/4 and a two-level Richardson table.
pub fn central_derivative<F: Fn(f64) -> f64>(f: &F, t: f64, h0: f64) -> (f64, f64) {
    let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    let d0 = d(h0);
    let d1 = d(0.5 * h0);
    let d2 = d(0.25 * h0);
    let r1 = (4.0 * d1 - d0) / 3.0;
    let r1b = (4.0 * d2 - d1) / 3.0;
    let r2 = (16.0 * r1b - r1) / 15.0;
    (r2, (r2 - r1b).abs().max(f64::EPSILON * r2.abs()))
}
