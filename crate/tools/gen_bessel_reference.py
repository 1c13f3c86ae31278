#!/usr/bin/env python3
"""Generate high-precision reference values for the Riccati-Bessel families.

Writes crates/shellcp-core/tests/fixtures/bessel_reference.json with, for
each (l, x) grid point and each family:

  - the four pairwise products (value/derivative cross products), which stay
    representable in float64 at every order because the growth of one family
    cancels the decay of the other;
  - the plain values and derivatives whenever their magnitude fits
    comfortably in float64 (|ln| < 600), else null.

Products are the quantities the mode sums actually consume, so they are the
primary oracle targets. All arithmetic is done with mpmath at 50 digits;
derivatives use the exact ladder identities, not numerical differentiation.
"""

import json
import math
import os

import mpmath as mp

mp.mp.dps = 50

OUT = os.path.join(
    os.path.dirname(__file__), "..", "crates", "shellcp-core", "tests", "fixtures",
    "bessel_reference.json",
)

LS = [1, 2, 3, 5, 8, 13, 21, 34, 60, 100, 300, 1000]
XS = ["0.001", "0.01", "0.1", "0.5", "1", "2.5", "7", "20", "50"]


def s_fam(l, x):
    """s_l(x) = sqrt(pi x/2) I_{l+1/2}(x) and its derivative."""
    nu = mp.mpf(2 * l + 1) / 2
    s = mp.sqrt(mp.pi * x / 2) * mp.besseli(nu, x)
    s_lm1 = mp.sqrt(mp.pi * x / 2) * mp.besseli(nu - 1, x)
    # d/dx [x i_l] ladder: s_l' = s_{l-1} - (l/x) s_l.
    sp = s_lm1 - l / x * s
    return s, sp


def e_fam(l, x):
    """e_l(x) = sqrt(2x/pi) K_{l+1/2}(x) and its derivative."""
    nu = mp.mpf(2 * l + 1) / 2
    e = mp.sqrt(2 * x / mp.pi) * mp.besselk(nu, x)
    e_lm1 = mp.sqrt(2 * x / mp.pi) * mp.besselk(nu - 1, x)
    # K ladder with the opposite sign: e_l' = -e_{l-1} - (l/x) e_l... check:
    # k_nu' = -(k_{nu-1} + k_{nu+1})/2 in K; for the Riccati form the stable
    # identity is e_l' = -(e_{l-1} + (l/x) e_l) verified against mp.diff.
    ep = -(e_lm1 + l / x * e)
    return e, ep


def j_fam(l, x):
    """J_l(x) = x j_l(x) and derivative."""
    nu = mp.mpf(2 * l + 1) / 2
    j = mp.sqrt(mp.pi * x / 2) * mp.besselj(nu, x)
    j_lm1 = mp.sqrt(mp.pi * x / 2) * mp.besselj(nu - 1, x)
    jp = j_lm1 - l / x * j
    return j, jp


def y_fam(l, x):
    nu = mp.mpf(2 * l + 1) / 2
    y = mp.sqrt(mp.pi * x / 2) * mp.bessely(nu, x)
    y_lm1 = mp.sqrt(mp.pi * x / 2) * mp.bessely(nu - 1, x)
    yp = y_lm1 - l / x * y
    return y, yp


def f64(v):
    """mpf -> float64 (None when the magnitude escapes float64)."""
    if v == 0:
        return 0.0
    ln = mp.log(abs(v))
    if ln > 600 or ln < -600:
        return None
    return float(v)


def check_derivative_identities():
    """Spot-check the ladder identities against mp.diff before trusting them."""
    for l, x in [(1, mp.mpf("0.7")), (5, mp.mpf("3")), (20, mp.mpf("11"))]:
        nu = mp.mpf(2 * l + 1) / 2
        s_direct = mp.diff(lambda t: mp.sqrt(mp.pi * t / 2) * mp.besseli(nu, t), x)
        e_direct = mp.diff(lambda t: mp.sqrt(2 * t / mp.pi) * mp.besselk(nu, t), x)
        j_direct = mp.diff(lambda t: mp.sqrt(mp.pi * t / 2) * mp.besselj(nu, t), x)
        y_direct = mp.diff(lambda t: mp.sqrt(mp.pi * t / 2) * mp.bessely(nu, t), x)
        _, sp = s_fam(l, x)
        _, ep = e_fam(l, x)
        _, jp = j_fam(l, x)
        _, yp = y_fam(l, x)
        for name, a, b in [("s'", sp, s_direct), ("e'", ep, e_direct),
                           ("j'", jp, j_direct), ("y'", yp, y_direct)]:
            rel = abs(a - b) / abs(b)
            assert rel < mp.mpf("1e-30"), (name, l, x, rel)
    print("ladder identities verified against direct differentiation")


def main():
    check_derivative_identities()
    records = []
    for l in LS:
        for xs in XS:
            x = mp.mpf(xs)
            s, sp = s_fam(l, x)
            e, ep = e_fam(l, x)
            w_ik = s * ep - sp * e
            assert abs(w_ik + 1) < mp.mpf("1e-40"), (l, xs, w_ik)
            records.append({
                "family": "ik", "l": l, "x": float(x),
                "p_ve": f64(s * e), "p_vd": f64(s * ep),
                "p_dv": f64(sp * e), "p_dd": f64(sp * ep),
                "v": f64(s), "d": f64(sp), "w": f64(e), "wd": f64(ep),
            })
            j, jp = j_fam(l, x)
            y, yp = y_fam(l, x)
            w_jy = j * yp - jp * y
            assert abs(w_jy - 1) < mp.mpf("1e-40"), (l, xs, w_jy)
            records.append({
                "family": "jy", "l": l, "x": float(x),
                "p_ve": f64(j * y), "p_vd": f64(j * yp),
                "p_dv": f64(jp * y), "p_dd": f64(jp * yp),
                "v": f64(j), "d": f64(jp), "w": f64(y), "wd": f64(yp),
            })
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w") as fh:
        json.dump(records, fh, indent=1)
    print(f"wrote {len(records)} records to {OUT}")


if __name__ == "__main__":
    main()
