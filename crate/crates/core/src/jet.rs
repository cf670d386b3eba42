//! Truncated multivariate Taylor arithmetic over complex numbers.
//!
//! A `Jet` carries the Taylor coefficients of a function of three variables
//! (v, a, y) up to total degree `DEG`, which gives exact mixed derivatives of
//! closed-form expressions without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::cmath;

pub const DEG: usize = 4;
const N: usize = DEG + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [[[Complex64; N]; N]; N],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    V = 0,
    A = 1,
    Y = 2,
}

const FACT: [f64; N] = [1.0, 1.0, 2.0, 6.0, 24.0];

impl Jet {
    pub fn zero() -> Self {
        Jet { c: [[[Complex64::new(0.0, 0.0); N]; N]; N] }
    }

    pub fn constant(x: Complex64) -> Self {
        let mut j = Self::zero();
        j.c[0][0][0] = x;
        j
    }

    pub fn var(x: Complex64, axis: Axis) -> Self {
        let mut j = Self::constant(x);
        match axis {
            Axis::V => j.c[1][0][0] = Complex64::new(1.0, 0.0),
            Axis::A => j.c[0][1][0] = Complex64::new(1.0, 0.0),
            Axis::Y => j.c[0][0][1] = Complex64::new(1.0, 0.0),
        }
        j
    }

    pub fn value(&self) -> Complex64 {
        self.c[0][0][0]
    }

    /// Mixed partial derivative ∂^(i+j+k) / ∂v^i ∂a^j ∂y^k.
    pub fn deriv(&self, i: usize, j: usize, k: usize) -> Complex64 {
        assert!(i + j + k <= DEG);
        self.c[i][j][k] * FACT[i] * FACT[j] * FACT[k]
    }

    fn scale(mut self, s: Complex64) -> Self {
        for i in 0..N {
            for j in 0..N - i {
                for k in 0..N - i - j {
                    self.c[i][j][k] *= s;
                }
            }
        }
        self
    }

    /// Apply a scalar analytic function given its derivatives at the constant term.
    fn compose(&self, derivs: [Complex64; N]) -> Self {
        let mut h = *self;
        h.c[0][0][0] = Complex64::new(0.0, 0.0);
        let mut out = Self::constant(derivs[0]);
        let mut hp = Self::constant(Complex64::new(1.0, 0.0));
        for n in 1..N {
            hp = hp * h;
            out = out + hp.scale(derivs[n] / FACT[n]);
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = cmath::exp(self.value());
        self.compose([e; N])
    }

    pub fn sqrt(&self) -> Self {
        let x = self.value();
        let s = cmath::sqrt(x);
        let r = 1.0 / x;
        self.compose([
            s,
            0.5 * s * r,
            -0.25 * s * r * r,
            0.375 * s * r * r * r,
            -0.9375 * s * r * r * r * r,
        ])
    }

    /// sqrt with the sign chosen so the value lies on the given sheet.
    pub fn sqrt_on_sheet(&self, sign: f64) -> Self {
        self.sqrt().scale(Complex64::new(sign, 0.0))
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.value();
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r.powi(4), 24.0 * r.powi(5)])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for i in 0..N {
            for j in 0..N - i {
                for k in 0..N - i - j {
                    self.c[i][j][k] += o.c[i][j][k];
                }
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut r = Jet::zero();
        for i in 0..N {
            for j in 0..N - i {
                for k in 0..N - i - j {
                    let x = self.c[i][j][k];
                    if x == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let rem = DEG - i - j - k;
                    for p in 0..=rem {
                        for q in 0..=rem - p {
                            for s in 0..=rem - p - q {
                                r.c[i + p][j + q][k + s] += x * o.c[p][q][s];
                            }
                        }
                    }
                }
            }
        }
        r
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<Complex64> for Jet {
    type Output = Jet;
    fn add(mut self, o: Complex64) -> Jet {
        self.c[0][0][0] += o;
        self
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, o: Complex64) -> Jet {
        self.scale(o)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(Complex64::new(o, 0.0))
    }
}
