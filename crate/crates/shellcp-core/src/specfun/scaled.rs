//! Exponent-extended floating point: `value = m * 2^e2`.
//!
//! Riccati-Bessel values at order ~5000 span far beyond the f64 exponent
//! range, but every physical quantity here is a *product* of a huge and a
//! tiny factor. Keeping a separate power-of-two exponent makes all scaling
//! operations exact (multiplication by 2^k never rounds), so reconstructed
//! products carry full f64 relative precision.

/// ln 2 split into a high part (exactly representable product with small
/// integers) and a low correction, for accurate `exp(ln_value)` splits.
const LN2_HI: f64 = 6.931_471_803_691_238_16e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_70e-10;

const BIG: f64 = 1.3407807929942597e154; // 2^512
const BIG_INV: f64 = 7.458340731200207e-155; // 2^-512

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    /// Mantissa; kept within [2^-512, 2^512] in absolute value (or 0).
    pub m: f64,
    /// Power-of-two exponent.
    pub e2: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: 0.0, e2: 0 };
    pub const ONE: Scaled = Scaled { m: 1.0, e2: 0 };

    #[inline]
    pub fn new(m: f64, e2: i64) -> Self {
        Scaled { m, e2 }.normalized()
    }

    #[inline]
    pub fn from_f64(v: f64) -> Self {
        Scaled { m: v, e2: 0 }.normalized()
    }

    /// Construct from a natural-log magnitude and a sign.
    pub fn from_ln(ln_abs: f64, negative: bool) -> Self {
        let k = (ln_abs / std::f64::consts::LN_2).floor();
        // Two-part reduction keeps the fractional exponent accurate even
        // when |ln_abs| is ~1e5.
        let frac = (ln_abs - k * LN2_HI) - k * LN2_LO;
        let m = frac.exp();
        Scaled { m: if negative { -m } else { m }, e2: k as i64 }.normalized()
    }

    #[inline]
    pub fn normalized(mut self) -> Self {
        if self.m == 0.0 || !self.m.is_finite() {
            self.e2 = 0;
            return self;
        }
        let mut a = self.m.abs();
        while a >= BIG {
            self.m *= BIG_INV;
            a *= BIG_INV;
            self.e2 += 512;
        }
        while a < BIG_INV {
            self.m *= BIG;
            a *= BIG;
            self.e2 -= 512;
        }
        self
    }

    /// Collapse to f64; may overflow to +-inf or underflow to 0.
    #[inline]
    pub fn to_f64(self) -> f64 {
        if self.m == 0.0 {
            return 0.0;
        }
        match self.e2 {
            0 => self.m,
            e if e > 2000 => self.m * f64::INFINITY,
            e if e < -2000 => self.m * 0.0,
            e => {
                // exp2 of |e| <= 2000 via at most two exact powers.
                let (h, l) = (e / 2, e - e / 2);
                self.m * pow2i(h) * pow2i(l)
            }
        }
    }

    #[inline]
    pub fn ln_abs(self) -> f64 {
        if self.m == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.m.abs().ln() + (self.e2 as f64) * std::f64::consts::LN_2
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    #[inline]
    pub fn abs(self) -> Self {
        Scaled { m: self.m.abs(), e2: self.e2 }
    }

    #[inline]
    pub fn neg(self) -> Self {
        Scaled { m: -self.m, e2: self.e2 }
    }

    #[inline]
    pub fn mul(self, o: Scaled) -> Self {
        Scaled { m: self.m * o.m, e2: self.e2 + o.e2 }.normalized()
    }

    #[inline]
    pub fn mul_f64(self, v: f64) -> Self {
        Scaled { m: self.m * v, e2: self.e2 }.normalized()
    }

    #[inline]
    pub fn div(self, o: Scaled) -> Self {
        Scaled { m: self.m / o.m, e2: self.e2 - o.e2 }.normalized()
    }

    #[inline]
    pub fn square(self) -> Self {
        Scaled { m: self.m * self.m, e2: 2 * self.e2 }.normalized()
    }

    /// Exact-alignment addition; the smaller addend is shifted by an exact
    /// power of two (values > ~600 binades apart: smaller one is dropped).
    pub fn add(self, o: Scaled) -> Self {
        if self.m == 0.0 {
            return o;
        }
        if o.m == 0.0 {
            return self;
        }
        let (hi, lo) = if self.e2 >= o.e2 { (self, o) } else { (o, self) };
        let d = hi.e2 - lo.e2;
        if d > 1100 {
            return hi;
        }
        let m = hi.m + lo.m * pow2i(-d / 2) * pow2i(-(d - d / 2));
        Scaled { m, e2: hi.e2 }.normalized()
    }

    #[inline]
    pub fn sub(self, o: Scaled) -> Self {
        self.add(o.neg())
    }
}

/// 2^k, exact; valid for k in [-1074, 1023].
#[inline]
fn pow2i(k: i64) -> f64 {
    debug_assert!((-1074..=1023).contains(&k));
    if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        // subnormal range: two exact power-of-two steps
        pow2i(-1022) * pow2i(k + 1022)
    }
}
