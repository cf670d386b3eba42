//! Dispatch from a scenario to the solver modules, producing one table each.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{Scenario, ScenarioKind};
use super::output::{Cell, Table};
use crate::critical::{self, caustic_trajectories, trace_stokes_lines_2d};
use crate::error::{Error, Result};
use crate::hj::{branch_family, ContinuationOptions};
use crate::impurity;
use crate::oned::{self, WireShape};
use crate::potential::BarrierParams;
use crate::trajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Newton tolerance for saddle seeds and corrector steps.
    pub seed_tolerance: Option<f64>,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed_tolerance: None, jobs: 1 }
    }
}

pub fn continuation_options(s: &Scenario, run: &RunOptions) -> ContinuationOptions {
    let mut o = ContinuationOptions::default();
    if let Some(t) = run.seed_tolerance {
        o.newton.tol = t;
    }
    if let Some(e) = s.extension {
        o.extension = e;
    }
    o
}

/// Map over `items` on a pool of `jobs` threads, keeping input order.
fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::SolverFailure(format!("thread pool: {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

fn c(v: impl Into<Cell>) -> Cell {
    v.into()
}

fn branches(s: &Scenario, run: &RunOptions) -> Result<Table> {
    let p = s.barrier()?;
    let y = s.y.unwrap_or(0.0);
    let range = (s.x_min.unwrap_or(0.0), s.require(s.x_max, "x_max")?);
    let fam = branch_family(&p, y, range, &continuation_options(s, run))?;
    let mut t = Table::new(&["branch_label", "y", "x", "re_v", "im_v", "re_sigma", "im_sigma", "log_psi_mag"]);
    for curve in &fam {
        for smp in &curve.samples {
            t.push(vec![
                c(curve.label.as_str()),
                c(curve.y),
                c(smp.x),
                c(smp.v.re),
                c(smp.v.im),
                c(smp.sigma.re),
                c(smp.sigma.im),
                c(smp.log_psi_mag),
            ]);
        }
    }
    let labels: Vec<&str> = fam.iter().map(|b| b.label.as_str()).collect();
    t.result("branch_count", fam.len());
    t.result("labels", labels.join(";"));
    let folds = if y == 0.0 {
        match critical::find_folds(&p, 0.0) {
            Ok((c1, c2)) if c1.v.im == 0.0 && c2.v.im == 0.0 => {
                t.result("x_c1", c1.x.re);
                t.result("x_c2", c2.x.re);
                2usize
            }
            _ => 0,
        }
    } else {
        0
    };
    t.result("real_fold_count", folds);
    Ok(t)
}

fn critical_table(s: &Scenario) -> Result<Table> {
    let p = s.barrier()?;
    let set = critical::critical_set(&p)?;
    let mut t = Table::new(&["quantity", "value"]);
    let e = &set.expansion;
    let rows: Vec<(&str, f64)> = vec![
        ("a0", set.width.a0),
        ("x0", set.width.x0),
        ("v0", set.width.v0),
        ("v_a", set.extrema.v_a),
        ("x_a", set.extrema.x_a),
        ("v_b", set.extrema.v_b),
        ("x_b", set.extrema.x_b),
        ("c_lin_y", e.c_lin_y),
        ("c_cubic", e.c_cubic),
        ("c_lin_av", e.c_lin_av),
        ("x_shift", e.x_shift),
        ("delta_coeff", e.delta_coeff),
        ("D_coeff", e.d_coeff),
        ("tan_theta", e.tan_theta),
        ("theta_deg", e.theta_deg),
        ("Delta", set.delta),
    ];
    for (k, v) in rows {
        t.push(vec![c(k), c(v)]);
    }
    if let Some((c1, c2)) = set.folds {
        for (name, f) in [("c1", c1), ("c2", c2)] {
            t.push(vec![c(format!("re_v_{name}")), c(f.v.re)]);
            t.push(vec![c(format!("im_v_{name}")), c(f.v.im)]);
            t.push(vec![c(format!("re_x_{name}")), c(f.x.re)]);
            t.push(vec![c(format!("im_x_{name}")), c(f.x.im)]);
        }
    }
    t.result("delta_convention", if set.a_above_a0 { "a > a0: Delta = D|a - a0|^1.5 (real folds)" } else { "a <= a0: Delta = D(a0 - a)^1.5" });
    if (p.a - set.width.a0).abs() <= critical::unfolding::WINDOW_FRACTION * set.width.a0 && p.a != set.width.a0 {
        let pos = critical::unfolding::singularity_positions(&p)?;
        for (tag, list) in [("literal", &pos.literal), ("predicted", &pos.predicted), ("tracked", &pos.tracked)] {
            for (i, (x, y)) in list.iter().enumerate() {
                t.push(vec![c(format!("singularity_{tag}_{i}_x")), c(*x)]);
                t.push(vec![c(format!("singularity_{tag}_{i}_y")), c(*y)]);
            }
        }
        let ax = critical::action_expansion_coeffs(&p)?;
        t.push(vec![c("action_constant"), c(ax.constant)]);
        t.push(vec![c("action_linear"), c(ax.linear)]);
        t.push(vec![c("action_quartic"), c(ax.quartic)]);
    }
    Ok(t)
}

fn penetration(s: &Scenario) -> Result<Table> {
    let p = s.barrier()?;
    let r = trajectory::penetration(&p)?;
    let mut t = Table::new(&["A0_over_B", "A1_over_B", "w_log_over_B", "wkb_log_over_B", "x_b", "v_b", "A0_negative"]);
    t.push(vec![
        c(r.action_a0 / p.b),
        c(r.action_a1 / p.b),
        c(r.w_log / p.b),
        c(r.wkb_log / p.b),
        c(r.x_b),
        c(r.v_b),
        c(r.a0_negative),
    ]);
    Ok(t)
}

fn threshold(s: &Scenario, sweep: Option<&[f64]>, run: &RunOptions) -> Result<Table> {
    let p = s.barrier()?;
    let th = trajectory::find_threshold(&p)?;
    let a0 = critical::find_critical_width(&p)?.a0;
    let values: Vec<f64> = match sweep {
        Some(v) => v.to_vec(),
        None => (0..25).map(|i| 1.05 * a0 + (1.2 * th.a_r - 1.05 * a0) * i as f64 / 24.0).collect(),
    };
    let rows = par_map(run.jobs, &values, |&a| {
        let q = p.with_a(a);
        let r = trajectory::penetration(&q)?;
        Ok(vec![c(a), c(r.action_a0 / p.b), c(r.action_a1 / p.b), c(r.w_log / p.b), c(r.x_b)])
    })?;
    let mut t = Table::new(&["a", "A0_over_B", "A1_over_B", "w_log_over_B", "x_b"]);
    rows.into_iter().for_each(|r| t.push(r));
    t.result("a_R", th.a_r);
    t.result("slope", th.slope);
    t.result("x_b_at_threshold", th.x_b);
    t.result("a0", a0);
    Ok(t)
}

fn impurity_table(s: &Scenario) -> Result<Table> {
    let p = s.impurity()?;
    let b = s.require(s.b, "B")?;
    let x = s.require(s.x, "x")?;
    let (lo, hi) = (s.require(s.y_min, "y_min")?, s.require(s.y_max, "y_max")?);
    let n = s.count.unwrap_or(81);
    let rep = impurity::enhancement_report(&p, b);
    let on_traj = 2.0 * p.k * (x - 1.0).max(0.0).sqrt();
    let closed = rep.exponent_closed_form / b;
    let two = rep.exponent_two_gaussian / b;
    let mut t = Table::new(&[
        "y",
        "offset",
        "im_sigma1",
        "log_psi_over_B",
        "log_psi_over_B_closed_form",
        "log_psi_over_B_two_gaussian",
    ]);
    for i in 0..n {
        let y = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let lp = impurity::psi_profile_outside(x, y, &p, b)? / b;
        let s1 = impurity::sigma1(x, y, &p)?;
        t.push(vec![
            c(y),
            c(y - on_traj),
            c(s1.value.im),
            c(lp),
            c(impurity::psi_profile_asymptotic(x, y, &p, 1.0, closed)),
            c(impurity::psi_profile_asymptotic(x, y, &p, 1.0, two)),
        ]);
    }
    t.result("log_enhancement", rep.log_enhancement);
    t.result("u_eff", rep.u_eff);
    t.result("perturbative_margin", rep.validity.perturbative_margin);
    t.result("semiclassical_margin", rep.validity.semiclassical_margin);
    t.result("window_margin", rep.validity.window_margin);
    t.result("after_exit_point", rep.after_exit_point);
    t.result("exponent_quadrature_over_B", impurity::enhancement_exponent_quadrature(x, &p, 1.0)?);
    t.result("exponent_closed_form_over_B", closed);
    t.result("exponent_two_gaussian_over_B", two);
    t.result("prefactor", "(x - 1)^(-1/4) omitted");
    Ok(t)
}

fn polylines(lines: &[Vec<Complex64>], re: &str, im: &str) -> Table {
    let mut t = Table::new(&["line", re, im]);
    for (i, l) in lines.iter().enumerate() {
        for z in l {
            t.push(vec![c(i), c(z.re), c(z.im)]);
        }
    }
    t
}

fn stokes1d(s: &Scenario) -> Result<Table> {
    let (e, v, a) = (s.require(s.energy, "energy")?, s.require(s.height, "height")?, s.require(s.width, "width")?);
    let set = oned::stokes_lines_1d(e, v, a)?;
    let mut t = polylines(&set.lines, "re_x", "im_x");
    t.result("re_x_c", set.origin.re);
    t.result("im_x_c", set.origin.im);
    let units = crate::potential::PhysicalParams { u0: 1.0, e_field: 1.0, m: 0.5, hbar: 1.0 };
    let r = oned::reflect_cosh_barrier(e, v, a, &units)?;
    t.result("ka", r.ka);
    t.result("log_r_exact", r.log_r_exact);
    t.result("log_r_wkb", r.log_r_wkb);
    t.result("flux_error", r.flux_error);
    t.result("regime_ok", r.regime_ok);
    Ok(t)
}

fn stokes2d(s: &Scenario) -> Result<Table> {
    let p = s.barrier()?;
    let set = trace_stokes_lines_2d(&p)?;
    let mut t = polylines(&set.lines, "re_v", "im_v");
    t.result("re_origin", set.origin.re);
    t.result("im_origin", set.origin.im);
    Ok(t)
}

fn wire(s: &Scenario, run: &RunOptions) -> Result<Table> {
    let beta0 = s.require(s.beta0, "beta0")?;
    let u0 = s.require(s.u0, "u0")?;
    let e = s.require(s.energy, "energy")?;
    let shape = s.shape.unwrap_or(WireShape::Gaussian);
    let widths = s.widths.clone().ok_or_else(|| Error::config("widths", "required for kind WireZeroField"))?;
    if widths.len() < 2 {
        return Err(Error::config("widths", "at least two widths are required"));
    }
    let kappa = (e + u0).sqrt();
    let rows = par_map(run.jobs, &widths, |&a| {
        oned::wire_overbarrier_reflection(&oned::WireProfile { beta0, a, shape }, e, u0).map(|r| (a, r))
    })?;
    let sweep = oned::wire::fit_log_r(kappa, &widths, &rows.iter().map(|(_, r)| r.log_r).collect::<Vec<_>>());
    let mut t = Table::new(&["width", "kappa_a", "log_r", "log_r_fit", "flux_error"]);
    for (a, r) in &rows {
        t.push(vec![c(*a), c(kappa * a), c(r.log_r), c(sweep.intercept - sweep.exponent_fit * kappa * a), c(r.flux_error)]);
    }
    t.result("exponent_fit", sweep.exponent_fit);
    t.result("relative_residual", sweep.relative_residual);
    Ok(t)
}

fn caustics(s: &Scenario) -> Result<Table> {
    let p = s.barrier()?;
    let bs = s.b_values.clone().ok_or_else(|| Error::config("b_values", "required for kind Caustics"))?;
    let trs = caustic_trajectories(&p, &bs)?;
    let mut t = Table::new(&["b", "point", "eta", "x"]);
    for tr in &trs {
        for (eta, x) in tr.eta.iter().zip(&tr.x) {
            t.push(vec![c(tr.b), c("curve"), c(*eta), c(*x)]);
        }
        t.push(vec![c(tr.b), c("tangency"), c(tr.tangency.0), c(tr.tangency.1)]);
    }
    let e = critical::unfolding::unfold_cubic(&p).or_else(|_| {
        let w = critical::find_critical_width(&p)?;
        critical::unfolding::expansion_at(&p, &w)
    })?;
    t.result("tan_theta", e.tan_theta);
    t.result("x0", e.x0);
    Ok(t)
}

fn crosscheck(s: &Scenario, run: &RunOptions) -> Result<Table> {
    let b = s.require(s.b, "B")?;
    let gamma = s.require(s.gamma, "gamma")?;
    let ss = s.grid_alpha0_sq.clone().ok_or_else(|| Error::config("grid_alpha0_sq", "required for kind Crosscheck"))?;
    let aa = s.grid_a.clone().ok_or_else(|| Error::config("grid_a", "required for kind Crosscheck"))?;
    let grid: Vec<(f64, f64)> = ss.iter().flat_map(|&s2| aa.iter().map(move |&a| (s2, a))).collect();
    let rows = par_map(run.jobs, &grid, |&(s2, a)| {
        let p = BarrierParams::with_alpha0_sq(b, gamma, s2, a)?;
        let r = trajectory::penetration(&p)?;
        let total = r.action_a0 + r.action_a1;
        let hj = trajectory::action_from_hj(&p)?;
        Ok(vec![c(s2), c(a), c(total), c(hj), c((total - hj).abs() / total.abs())])
    })?;
    let mut t = Table::new(&["alpha0_sq", "a", "A0_plus_A1", "hj_2B_dIm_sigma", "rel_diff"]);
    let mut worst: f64 = 0.0;
    for r in rows {
        if let Cell::Num(v) = r[4] {
            worst = worst.max(v);
        }
        t.push(r);
    }
    t.result("max_rel_diff", worst);
    Ok(t)
}

fn run_single(s: &Scenario, run: &RunOptions) -> Result<Table> {
    match s.kind {
        ScenarioKind::Branches => branches(s, run),
        ScenarioKind::Critical => critical_table(s),
        ScenarioKind::Penetration => penetration(s),
        ScenarioKind::ThresholdSweep => threshold(s, None, run),
        ScenarioKind::Impurity => impurity_table(s),
        ScenarioKind::Stokes1d => stokes1d(s),
        ScenarioKind::Stokes2d => stokes2d(s),
        ScenarioKind::WireZeroField => wire(s, run),
        ScenarioKind::Caustics => caustics(s),
        ScenarioKind::Crosscheck => crosscheck(s, run),
    }
}

/// Runs a scenario; a sweep repeats it per value and prepends the swept parameter as a column.
pub fn run_scenario(s: &Scenario, sweep: Option<(&str, &[f64])>, run: &RunOptions) -> Result<Table> {
    let Some((name, values)) = sweep else {
        return run_single(s, run);
    };
    if s.kind == ScenarioKind::ThresholdSweep && name == "a" {
        return threshold(s, Some(values), run);
    }
    let tables = par_map(run.jobs, values, |&v| run_single(&s.with_param(name, v), &RunOptions { jobs: 1, ..*run }))?;
    let mut out = Table::new(&[]);
    out.columns.push(name.to_string());
    out.columns.extend(tables[0].columns.iter().cloned());
    for (v, t) in values.iter().zip(tables) {
        for row in t.rows {
            let mut r = vec![c(*v)];
            r.extend(row);
            out.rows.push(r);
        }
        for (k, val) in t.results {
            out.results.push((format!("{name}={}/{k}", super::output::fmt_num(*v)), val));
        }
    }
    Ok(out)
}
