use proptest::prelude::*;

use underbarrier::critical::critical_set;
use underbarrier::critical::folds::find_folds;
use underbarrier::hj::saddle::eval_saddle;
use underbarrier::hj::branches::{branch_family, ContinuationOptions};
use underbarrier::impurity::{enhancement_exponent_closed_form, enhancement_exponent_quadrature};
use underbarrier::oned::scatter::reflect_cosh_barrier;
use underbarrier::trajectory::{energy, find_threshold, integrate_trajectory, penetration};
use underbarrier::{BarrierParams, Complex64, ImpurityParams, PhysicalParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn params(gamma: f64, s: f64, a: f64) -> BarrierParams {
    BarrierParams::with_alpha0_sq(30.0, gamma, s, a).unwrap()
}

fn log_log_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x.ln(), sy + y.ln()));
    let sxx: f64 = pts.iter().map(|&(x, _)| x.ln().powi(2)).sum();
    let sxy: f64 = pts.iter().map(|&(x, y)| x.ln() * y.ln()).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_traced_sample_satisfies_hj(gamma in 0.1f64..0.3, s in 0.02f64..0.04, a in 1.4f64..2.6, y in 0.0f64..1.5) {
        let p = params(gamma, s, a);
        let yc = Complex64::new(y, 0.0);
        let fam = branch_family(&p, y, (0.0, 2.0), &ContinuationOptions::default()).unwrap();
        prop_assert!(!fam.is_empty());
        for curve in &fam {
            let evals: Vec<_> = curve.samples.iter().map(|m| eval_saddle(&p, m.v, yc, m.sheet).unwrap()).collect();
            for (m, e) in curve.samples.iter().zip(&evals) {
                let (sx, sy) = (I * e.r, e.root_s);
                prop_assert!((sx * sx + sy * sy - m.x - (gamma - 1.0)).norm() < 1e-10);
            }
            // σ changes by ∫ ∂σ/∂x dx between neighbours, whatever contour produced it
            for k in 1..curve.samples.len() {
                let (m0, m1) = (&curve.samples[k - 1], &curve.samples[k]);
                if evals[k - 1].dx_dv.norm() < 0.1 || evals[k].dx_dv.norm() < 0.1 {
                    continue;
                }
                let dx = m1.x - m0.x;
                let trap = 0.5 * I * (evals[k - 1].r + evals[k].r) * dx;
                prop_assert!((m1.sigma - m0.sigma - trap).norm() < 1e-4, "x = {} dx = {}", m0.x, dx);
            }
        }
    }

    #[test]
    fn folds_exist_exactly_above_a0(s in 0.02f64..0.04, da in 0.02f64..0.15) {
        let p0 = params(0.2, s, 2.0);
        let a0 = critical_set(&p0).unwrap().width.a0;
        let (f1, f2) = find_folds(&p0.with_a(a0 + da), 0.0).unwrap();
        prop_assert!(f1.x.im.abs() < 1e-9 && f2.x.im.abs() < 1e-9);
        let (g1, _) = find_folds(&p0.with_a(a0 - da), 0.0).unwrap();
        prop_assert!(g1.x.im.abs() > 1e-9);
    }

    #[test]
    fn trajectory_conserves_energy(s in 0.02f64..0.04, a in 1.8f64..2.6) {
        let p = params(0.2, s, a);
        let t = integrate_trajectory(&p).unwrap();
        prop_assert!(t.max_energy_residual < 1e-10);
        for i in (0..t.x.len()).step_by(97) {
            prop_assert!((energy(t.x[i], t.x_dot[i], t.eta_dot[i]) - (0.2 - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn penetration_vanishes_at_threshold(s in 0.02f64..0.04) {
        let p = params(0.2, s, 2.0);
        let th = find_threshold(&p).unwrap();
        let at = penetration(&p.with_a(th.a_r)).unwrap();
        prop_assert!((at.action_a0 + at.action_a1).abs() / p.b < 1e-8);
        let below = penetration(&p.with_a(th.a_r * 0.95)).unwrap();
        prop_assert!(below.action_a0 + below.action_a1 > 0.0);
    }

    #[test]
    fn cosh_barrier_conserves_flux(ratio in 1.2f64..3.0, width in 0.5f64..2.0) {
        let units = PhysicalParams { u0: 1.0, e_field: 1.0, m: 0.5, hbar: 1.0 };
        let r = reflect_cosh_barrier(150.0 * ratio, 150.0, width, &units).unwrap();
        prop_assert!(r.flux_error < 1e-8);
    }
}

#[test]
fn impurity_quadrature_approaches_closed_form() {
    let b = 1.0;
    let mut errs = Vec::new();
    for a in [0.2, 0.15, 0.1, 0.07] {
        let p = ImpurityParams { u: 1e-10, l: 0.5, a_imp: a, k: std::f64::consts::FRAC_1_SQRT_2 };
        let q = enhancement_exponent_quadrature(1.5, &p, b).unwrap();
        let c = enhancement_exponent_closed_form(&p, b);
        errs.push((a * a, (q / c - 1.0).abs()));
    }
    let order = log_log_slope(&errs);
    assert!(order >= 1.0, "relative error vs closed form {errs:?}, fitted order {order}");
}
