//! Complex numbers carried as `m * exp(e)` so that Legendre and Airy values
//! with magnitudes far outside the f64 range can be combined safely.

use num_complex::Complex64 as C64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub m: C64,
    pub e: f64,
}

const LO: f64 = 1e-100;
const HI: f64 = 1e100;

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: C64 { re: 0.0, im: 0.0 }, e: 0.0 };
    pub const ONE: Scaled = Scaled { m: C64 { re: 1.0, im: 0.0 }, e: 0.0 };

    pub fn new(m: C64, e: f64) -> Self {
        Scaled { m, e }.tidy()
    }

    pub fn from_c64(z: C64) -> Self {
        Scaled { m: z, e: 0.0 }.tidy()
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_c64(C64::new(x, 0.0))
    }

    /// `exp(l)` for a complex logarithm `l`.
    pub fn from_ln(l: C64) -> Self {
        Scaled { m: C64::from_polar(1.0, l.im), e: l.re }
    }

    fn tidy(self) -> Self {
        let a = self.m.norm();
        if a == 0.0 {
            return Scaled::ZERO;
        }
        if (LO..HI).contains(&a) {
            self
        } else {
            Scaled { m: self.m / a, e: self.e + a.ln() }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.re.is_finite() && self.m.im.is_finite() && self.e.is_finite()
    }

    pub fn to_c64(self) -> C64 {
        if self.is_zero() {
            C64::new(0.0, 0.0)
        } else {
            self.m * self.e.exp()
        }
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.norm().ln() + self.e
        }
    }

    /// A complex logarithm (principal in the mantissa).
    pub fn ln(&self) -> C64 {
        self.m.ln() + self.e
    }

    pub fn arg(&self) -> f64 {
        self.m.arg()
    }

    pub fn conj(self) -> Self {
        Scaled { m: self.m.conj(), e: self.e }
    }

    /// Multiply by `exp(l)`.
    pub fn mul_exp(self, l: C64) -> Self {
        Scaled { m: self.m * C64::from_polar(1.0, l.im), e: self.e + l.re }.tidy()
    }

    pub fn scale(self, c: C64) -> Self {
        Scaled { m: self.m * c, e: self.e }.tidy()
    }

    /// `self / other` as a plain complex number (may overflow to inf).
    pub fn ratio(self, other: Scaled) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        (self.m / other.m) * (self.e - other.e).exp()
    }

    /// `|self| / |other|` computed without overflow of the exponents.
    pub fn abs_ratio(self, other: Scaled) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        (self.ln_abs() - other.ln_abs()).exp()
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled { m: self.m * o.m, e: self.e + o.e }.tidy()
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, o: Scaled) -> Scaled {
        Scaled { m: self.m / o.m, e: self.e - o.e }.tidy()
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        if self.e >= o.e {
            Scaled { m: self.m + o.m * (o.e - self.e).exp(), e: self.e }.tidy()
        } else {
            Scaled { m: o.m + self.m * (self.e - o.e).exp(), e: o.e }.tidy()
        }
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { m: -self.m, e: self.e }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, o: Scaled) -> Scaled {
        self + (-o)
    }
}

impl Mul<C64> for Scaled {
    type Output = Scaled;
    fn mul(self, c: C64) -> Scaled {
        self.scale(c)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, c: f64) -> Scaled {
        self.scale(C64::new(c, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_arith() {
        let a = Scaled::from_c64(C64::new(3.0, -4.0));
        let b = Scaled::from_ln(C64::new(800.0, 0.3));
        let c = (a * b) / b;
        assert!((c.to_c64() - C64::new(3.0, -4.0)).norm() < 1e-12);
        let s = b + a;
        assert!((s.ratio(b) - 1.0).norm() < 1e-300_f64.max(1e-15));
        assert_eq!((a - a).to_c64(), C64::new(0.0, 0.0));
    }

    #[test]
    fn huge_values_stay_finite() {
        let a = Scaled::from_ln(C64::new(5000.0, 1.0));
        let b = Scaled::from_ln(C64::new(-5000.0, -1.0));
        let p = a * b;
        assert!((p.to_c64() - 1.0).norm() < 1e-10);
        assert!((a.ln_abs() - 5000.0).abs() < 1e-12);
    }
}
