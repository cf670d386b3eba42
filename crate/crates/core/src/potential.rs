//! Wire profile, impurity potential and unit conversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmath;
use crate::error::{Error, Result};

/// Largest |Re| of a Gaussian exponent that is evaluated.
pub const EXPONENT_CAP: f64 = 700.0;

/// Below this value of B the semiclassical treatment is not trusted.
pub const SEMICLASSICAL_B_MIN: f64 = 25.0;

/// Ratio used for "much less than" in regime checks.
pub const MUCH_LESS: f64 = 0.1;

fn capped_exp(exponent: Complex64) -> Result<Complex64> {
    if exponent.re > EXPONENT_CAP {
        return Err(Error::ExponentCap {
            exponent: exponent.re,
            cap: EXPONENT_CAP,
        });
    }
    Ok(cmath::exp(exponent))
}

/// An even wire profile, described through α²(y).
pub trait Profile {
    fn alpha_sq(&self, y: Complex64) -> Result<Complex64>;
    fn d_alpha_sq(&self, y: Complex64) -> Result<Complex64>;
}

/// α(y) = α₀ exp(−y²/a²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub alpha0: f64,
    pub a: f64,
}

impl Gaussian {
    pub fn alpha(&self, y: Complex64) -> Result<Complex64> {
        Ok(self.alpha0 * capped_exp(-y * y / (self.a * self.a))?)
    }
}

impl Profile for Gaussian {
    fn alpha_sq(&self, y: Complex64) -> Result<Complex64> {
        Ok(self.alpha0 * self.alpha0 * capped_exp(-2.0 * y * y / (self.a * self.a))?)
    }

    fn d_alpha_sq(&self, y: Complex64) -> Result<Complex64> {
        Ok(-4.0 * y / (self.a * self.a) * self.alpha_sq(y)?)
    }
}

/// sech-shaped profile α²(y) = α₀² / cosh(y/a).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sech {
    pub alpha0: f64,
    pub a: f64,
}

impl Profile for Sech {
    fn alpha_sq(&self, y: Complex64) -> Result<Complex64> {
        let z = y / self.a;
        if z.re.abs() > EXPONENT_CAP {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(self.alpha0 * self.alpha0 / cmath::cosh(z))
    }

    fn d_alpha_sq(&self, y: Complex64) -> Result<Complex64> {
        let z = y / self.a;
        if z.re.abs() > EXPONENT_CAP {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(-self.alpha0 * self.alpha0 * cmath::tanh(z) / (cmath::cosh(z) * self.a))
    }
}

/// Dimensionless barrier problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierParams {
    #[serde(rename = "B")]
    pub b: f64,
    pub gamma: f64,
    pub alpha0: f64,
    pub a: f64,
}

impl BarrierParams {
    pub fn new(b: f64, gamma: f64, alpha0: f64, a: f64) -> Result<Self> {
        let p = BarrierParams { b, gamma, alpha0, a };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor from α₀².
    pub fn with_alpha0_sq(b: f64, gamma: f64, alpha0_sq: f64, a: f64) -> Result<Self> {
        if !(alpha0_sq >= 0.0) {
            return Err(Error::InvalidParams(format!("alpha0^2 = {alpha0_sq} must be >= 0")));
        }
        Self::new(b, gamma, alpha0_sq.sqrt(), a)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::InvalidParams(format!("B = {} must be finite and > 0", self.b)));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidParams(format!("gamma = {} must lie in (0, 1)", self.gamma)));
        }
        if !(self.alpha0.is_finite() && self.alpha0 >= 0.0) {
            return Err(Error::InvalidParams(format!("alpha0 = {} must be >= 0", self.alpha0)));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::InvalidParams(format!("a = {} must be > 0", self.a)));
        }
        Ok(())
    }

    pub fn with_a(&self, a: f64) -> Self {
        BarrierParams { a, ..*self }
    }

    pub fn alpha0_sq(&self) -> f64 {
        self.alpha0 * self.alpha0
    }

    pub fn profile(&self) -> Gaussian {
        Gaussian {
            alpha0: self.alpha0,
            a: self.a,
        }
    }

    pub fn alpha(&self, y: Complex64) -> Result<Complex64> {
        self.profile().alpha(y)
    }

    pub fn alpha_sq(&self, y: Complex64) -> Result<Complex64> {
        self.profile().alpha_sq(y)
    }

    /// α²(iv) = α₀² exp(2v²/a²), analytic in complex v.
    pub fn alpha_sq_iv(&self, v: Complex64) -> Result<Complex64> {
        Ok(self.alpha0_sq() * capped_exp(2.0 * v * v / (self.a * self.a))?)
    }

    /// Non-fatal diagnostics about the parameter regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.b < SEMICLASSICAL_B_MIN {
            w.push(format!(
                "B = {} is below the semiclassical threshold {}",
                self.b, SEMICLASSICAL_B_MIN
            ));
        }
        w
    }
}

/// Physical inputs: barrier height, field, mass and ħ in any consistent units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub u0: f64,
    pub e_field: f64,
    pub m: f64,
    pub hbar: f64,
}

/// B together with the scales needed to undo the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scales {
    #[serde(rename = "B")]
    pub b: f64,
    pub u0: f64,
    pub m: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn to_dimensionless(&self) -> Scales {
        Scales {
            b: self.u0 * (2.0 * self.m * self.u0).sqrt() / (self.hbar * self.e_field),
            u0: self.u0,
            m: self.m,
            hbar: self.hbar,
        }
    }

    /// Length unit u₀/ℰ.
    pub fn length_unit(&self) -> f64 {
        self.u0 / self.e_field
    }
}

impl Scales {
    pub fn to_physical(&self) -> PhysicalParams {
        PhysicalParams {
            u0: self.u0,
            e_field: self.u0 * (2.0 * self.m * self.u0).sqrt() / (self.hbar * self.b),
            m: self.m,
            hbar: self.hbar,
        }
    }
}

/// Field at which a profile of physical width `a_phys` sits at the
/// dimensionless threshold width `a_r`.
pub fn threshold_field(a_r: f64, u0: f64, a_phys: f64) -> f64 {
    a_r * u0 / a_phys
}

/// Localized impurity inside the barrier of a homogeneous wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpurityParams {
    pub u: f64,
    pub l: f64,
    pub a_imp: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpurityValidity {
    /// l < 2k² < 2.
    pub window: bool,
    /// u·exp((4k² − l²)/a²) ≪ 1.
    pub perturbative: bool,
    /// exp((4k² − l²)/a²) ≪ B.
    pub semiclassical: bool,
    /// ln(MUCH_LESS) − ln(u·E); positive when satisfied.
    pub perturbative_margin: f64,
    /// ln(MUCH_LESS·B) − ln(E); positive when satisfied.
    pub semiclassical_margin: f64,
    /// min(2k² − l, 2 − 2k²).
    pub window_margin: f64,
}

impl ImpurityParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.u.is_finite() && self.u >= 0.0) {
            return Err(Error::InvalidParams(format!("u = {} must be >= 0", self.u)));
        }
        if !(self.a_imp.is_finite() && self.a_imp > 0.0) {
            return Err(Error::InvalidParams(format!("a_imp = {} must be > 0", self.a_imp)));
        }
        if !(self.l.is_finite() && self.k.is_finite()) {
            return Err(Error::InvalidParams("l and k must be finite".into()));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.k * self.k
    }

    /// Natural log of the enhancement factor (4k² − l²)/a².
    pub fn log_enhancement(&self) -> f64 {
        (4.0 * self.k * self.k - self.l * self.l) / (self.a_imp * self.a_imp)
    }

    pub fn validity(&self, b: f64) -> ImpurityValidity {
        let k2 = 2.0 * self.k * self.k;
        let window_margin = (k2 - self.l).min(2.0 - k2);
        let le = self.log_enhancement();
        let perturbative_margin = MUCH_LESS.ln() - (self.u.ln() + le);
        let semiclassical_margin = (MUCH_LESS * b).ln() - le;
        ImpurityValidity {
            window: window_margin > 0.0,
            perturbative: perturbative_margin > 0.0,
            semiclassical: semiclassical_margin > 0.0,
            perturbative_margin,
            semiclassical_margin,
            window_margin,
        }
    }
}

/// Symmetric pair of Gaussian wells centred at x = ±l.
pub fn impurity_u(x: Complex64, y: Complex64, p: &ImpurityParams) -> Result<Complex64> {
    let a2 = p.a_imp * p.a_imp;
    let y2 = y * y;
    let e1 = -((x - p.l) * (x - p.l) + y2) / a2;
    let e2 = -((x + p.l) * (x + p.l) + y2) / a2;
    Ok(-p.u * (capped_exp(e1)? + capped_exp(e2)?))
}
