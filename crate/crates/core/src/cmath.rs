//! Complex elementary functions built on [`f64::sin_cos`], bit-identical in
//! debug and release builds.

#![allow(clippy::disallowed_methods)]

use num_complex::Complex64;

pub fn from_polar(r: f64, theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(r * c, r * s)
}

pub fn exp(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(z.re.exp(), z.im);
    }
    from_polar(z.re.exp(), z.im)
}

/// Principal square root, branch cut on the negative real axis.
pub fn sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re.is_sign_positive() {
            Complex64::new(z.re.sqrt(), z.im)
        } else {
            let im = (-z.re).sqrt();
            Complex64::new(0.0, if z.im.is_sign_positive() { im } else { -im })
        }
    } else if z.re == 0.0 {
        let x = (z.im.abs() / 2.0).sqrt();
        Complex64::new(x, if z.im.is_sign_positive() { x } else { -x })
    } else {
        let (r, theta) = z.to_polar();
        from_polar(r.sqrt(), theta / 2.0)
    }
}

pub fn cosh(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    Complex64::new(z.re.cosh() * c, z.re.sinh() * s)
}

pub fn tanh(z: Complex64) -> Complex64 {
    let (tr, ti) = (z.re + z.re, z.im + z.im);
    let (s, c) = ti.sin_cos();
    Complex64::new(tr.sinh(), s) / (tr.cosh() + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn agrees_with_num_complex(re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let z = Complex64::new(re, im);
            let tol = |w: Complex64| 4.0 * f64::EPSILON * w.norm().max(f64::MIN_POSITIVE);
            prop_assert!((exp(z) - z.exp()).norm() <= tol(z.exp()));
            prop_assert!((sqrt(z) - z.sqrt()).norm() <= tol(z.sqrt()));
            prop_assert!((cosh(z) - z.cosh()).norm() <= tol(z.cosh()));
            prop_assert!((tanh(z) - z.tanh()).norm() <= 8.0 * tol(z.tanh()) + 1e-15);
        }
    }

    #[test]
    fn axis_cases() {
        assert_eq!(sqrt(Complex64::new(-4.0, 0.0)), Complex64::new(0.0, 2.0));
        assert_eq!(sqrt(Complex64::new(-4.0, -0.0)), Complex64::new(0.0, -2.0));
        assert_eq!(sqrt(Complex64::new(0.0, 8.0)), Complex64::new(2.0, 2.0));
        assert_eq!(exp(Complex64::new(1.0, 0.0)).re, 1f64.exp());
    }
}
