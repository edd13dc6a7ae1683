//! Numeric verification: residual evaluation of candidate profiles over
//! sample grids, pole-avoiding grid selection, finite-difference derivative
//! checks, and pointwise equivalence of solution families up to a fitted
//! free constant.

use crate::closed_form::ClosedFormSolution;
use crate::error::{Error, Result};
use crate::expr::{self, Expr, WAVE_VAR};
use crate::solve::Assignment;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(from: f64, to: f64, points: usize) -> Self {
        Grid { from, to, points }
    }

    /// Default verification window ξ ∈ [−5, 5] with 101 samples.
    pub fn default_wave() -> Self {
        Grid::new(-5.0, 5.0, 101)
    }

    pub fn samples(&self) -> Vec<f64> {
        if self.points <= 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.from + i as f64 * step).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub grid: Grid,
    pub max_residual: f64,
    pub evaluated: usize,
    pub skipped: usize,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ResidualOptions {
    pub tol: f64,
    /// Denominators smaller than this in magnitude mark the point skipped.
    pub guard: f64,
    /// Largest admissible fraction of skipped points.
    pub max_skip_fraction: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        ResidualOptions {
            tol: 1e-10,
            guard: 1e-8,
            max_skip_fraction: 0.10,
        }
    }
}

/// A verified solution branch as reported by any of the methods.
#[derive(Clone, Debug)]
pub struct SolutionBranch {
    pub method: &'static str,
    pub assignment: Assignment,
    pub solution: ClosedFormSolution,
    /// Degenerate-constant profiles of the same family.
    pub limit_solutions: Vec<ClosedFormSolution>,
    pub residual: ResidualReport,
}

/// Substitutes a profile for the dependent function in an ODE written with
/// prime markers in the wave variable.
pub fn bind_prime_profile(lhs: &Expr, dependent: &str, profile: &Expr) -> Expr {
    let mut map: BTreeMap<Expr, Expr> = BTreeMap::new();
    map.insert(expr::sym(dependent), profile.clone());
    let mut d = profile.clone();
    for order in 1..=max_prime_order(lhs, dependent) {
        d = d.differentiate(WAVE_VAR);
        map.insert(expr::prime(dependent, order), d.clone());
    }
    lhs.substitute(&map)
}

pub fn max_prime_order(e: &Expr, dependent: &str) -> usize {
    let mut max = 0;
    e.walk(&mut |n| {
        if let Expr::Der(f, vars) = n {
            if f == dependent {
                max = max.max(vars.len());
            }
        }
    });
    max
}

/// Evaluates |residual| over the grid. Points where a guarded denominator
/// vanishes or the value is non-finite are skipped; everything else must
/// stay below the tolerance and the skip fraction must stay small.
pub fn residual_report(
    residual: &Expr,
    grid: &Grid,
    bindings: &BTreeMap<String, f64>,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    let mut max_residual: f64 = 0.0;
    let mut evaluated = 0usize;
    let mut skipped = 0usize;
    let mut b = bindings.clone();
    for xi in grid.samples() {
        b.insert(WAVE_VAR.to_string(), xi);
        match residual.eval_guarded(&b, opts.guard) {
            Ok(v) if v.is_finite() => {
                evaluated += 1;
                max_residual = max_residual.max(v.abs());
            }
            Ok(_) | Err(Error::DivisionByZero) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let max_skips = (opts.max_skip_fraction * grid.points as f64).floor() as usize;
    let pass = evaluated > 0 && skipped <= max_skips && max_residual < opts.tol;
    Ok(ResidualReport {
        grid: grid.clone(),
        max_residual,
        evaluated,
        skipped,
        tol: opts.tol,
        pass,
    })
}

/// Picks a 101-point grid inside the longest pole-free window of the
/// profile, scanning the base window densely and leaving a 5% margin on
/// each side. Used for profiles with trigonometric denominators.
pub fn grid_avoiding_poles(
    profile: &Expr,
    bindings: &BTreeMap<String, f64>,
    base: &Grid,
) -> Grid {
    let scan = Grid::new(base.from, base.to, 1001);
    let xs = scan.samples();
    let mut b = bindings.clone();
    let values: Vec<Option<f64>> = xs
        .iter()
        .map(|&x| {
            b.insert(WAVE_VAR.to_string(), x);
            // beyond ~1e3 the cancellation noise of a second-order residual
            // already swamps the verification tolerance in f64
            match profile.eval_guarded(&b, 1e-6) {
                Ok(v) if v.is_finite() && v.abs() < 1e3 => Some(v),
                _ => None,
            }
        })
        .collect();
    let mut ok: Vec<bool> = values.iter().map(Option::is_some).collect();
    // an odd pole can slip between two samples that both stay moderate; it
    // betrays itself as a sign flip at large magnitude (a true zero crossing
    // has small values on both sides)
    for i in 0..values.len().saturating_sub(1) {
        if let (Some(a), Some(b)) = (values[i], values[i + 1]) {
            if a * b < 0.0 && a.abs().min(b.abs()) > 10.0 {
                ok[i] = false;
                ok[i + 1] = false;
            }
        }
    }
    // longest run of usable consecutive samples
    let (mut best_start, mut best_len) = (0usize, 0usize);
    let mut run_start = 0usize;
    let mut run_len = 0usize;
    for (i, &good) in ok.iter().enumerate() {
        if good {
            if run_len == 0 {
                run_start = i;
            }
            run_len += 1;
            if run_len > best_len {
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
    }
    if best_len < 2 {
        return base.clone();
    }
    let lo = xs[best_start];
    let hi = xs[best_start + best_len - 1];
    let margin = 0.05 * (hi - lo);
    Grid::new(lo + margin, hi - margin, 101)
}

/// Compares an analytic derivative against a central finite difference at
/// the given sample points; returns the largest relative error.
pub fn fd_check(
    e: &Expr,
    var: &str,
    bindings: &BTreeMap<String, f64>,
    points: &[f64],
) -> Result<f64> {
    let h = 1e-6;
    let analytic = e.differentiate(var);
    let mut worst: f64 = 0.0;
    let mut b = bindings.clone();
    for &p in points {
        b.insert(var.to_string(), p);
        let exact = analytic.eval(&b)?;
        b.insert(var.to_string(), p + h);
        let fp = e.eval(&b)?;
        b.insert(var.to_string(), p - h);
        let fm = e.eval(&b)?;
        let fd = (fp - fm) / (2.0 * h);
        worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    Ok(worst)
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub max_difference: f64,
    pub fitted_constant: Option<(String, f64)>,
    pub compared: usize,
    pub pass: bool,
}

/// Checks that two profiles describe the same function on the grid, after
/// renaming symbols of the first via `rename` and optionally fitting one
/// free constant of the second. The fit runs a coarse signed log-scale scan
/// followed by a golden-section refinement.
pub fn equivalence_check(
    u1: &Expr,
    u2: &Expr,
    rename: &BTreeMap<String, String>,
    fit_constant: Option<&str>,
    grid: &Grid,
    bindings: &BTreeMap<String, f64>,
    tol: f64,
) -> EquivalenceReport {
    let mut lhs = u1.clone();
    for (old, new) in rename {
        lhs = lhs.substitute_symbol(old, &expr::sym(new));
    }
    let xs = grid.samples();
    let mut b = bindings.clone();
    // reference values of the first profile
    let mut reference: Vec<Option<f64>> = vec![];
    for &x in &xs {
        b.insert(WAVE_VAR.to_string(), x);
        reference.push(match lhs.eval_guarded(&b, 1e-8) {
            Ok(v) if v.is_finite() => Some(v),
            _ => None,
        });
    }
    let objective = |c: Option<(&str, f64)>| -> (f64, usize) {
        let mut b = bindings.clone();
        if let Some((name, v)) = c {
            b.insert(name.to_string(), v);
        }
        let mut worst: f64 = 0.0;
        let mut compared = 0usize;
        for (i, &x) in xs.iter().enumerate() {
            let r = match reference[i] {
                Some(r) => r,
                None => continue,
            };
            b.insert(WAVE_VAR.to_string(), x);
            match u2.eval_guarded(&b, 1e-8) {
                Ok(v) if v.is_finite() => {
                    compared += 1;
                    worst = worst.max((v - r).abs());
                }
                _ => return (f64::INFINITY, compared),
            }
        }
        if compared == 0 {
            (f64::INFINITY, 0)
        } else {
            (worst, compared)
        }
    };
    match fit_constant {
        None => {
            let (worst, compared) = objective(None);
            EquivalenceReport {
                max_difference: worst,
                fitted_constant: None,
                compared,
                pass: compared > 0 && worst < tol,
            }
        }
        Some(name) => {
            let mut best_c = 1.0;
            let mut best_val = f64::INFINITY;
            for sign in [1.0, -1.0] {
                for k in -6..=6 {
                    for m in [1.0, 2.0, 5.0] {
                        let c = sign * m * 10f64.powi(k);
                        let (v, _) = objective(Some((name, c)));
                        if v < best_val {
                            best_val = v;
                            best_c = c;
                        }
                    }
                }
            }
            // golden-section refinement one decade around the best candidate
            let (mut a, mut d) = if best_c > 0.0 {
                (best_c / 10.0, best_c * 10.0)
            } else {
                (best_c * 10.0, best_c / 10.0)
            };
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            let mut x1 = d - phi * (d - a);
            let mut x2 = a + phi * (d - a);
            let mut f1 = objective(Some((name, x1))).0;
            let mut f2 = objective(Some((name, x2))).0;
            for _ in 0..200 {
                if f1 < f2 {
                    d = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = d - phi * (d - a);
                    f1 = objective(Some((name, x1))).0;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + phi * (d - a);
                    f2 = objective(Some((name, x2))).0;
                }
            }
            let c_star = if f1 < f2 { x1 } else { x2 };
            let (worst, compared) = objective(Some((name, c_star)));
            let (worst, c_star) = if best_val < worst {
                (objective(Some((name, best_c))).0, best_c)
            } else {
                (worst, c_star)
            };
            EquivalenceReport {
                max_difference: worst,
                fitted_constant: Some((name.to_string(), c_star)),
                compared,
                pass: compared > 0 && worst < tol,
            }
        }
    }
}
