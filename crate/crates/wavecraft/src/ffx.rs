//! Polynomial expansions in a logarithmic-derivative variable: the ansatz
//! u = Σ bⱼwʲ with w = F′/F (or its Riccati mirror w = −F′/F), the degree
//! balance rule, assembly of the coefficient system, and the end-to-end
//! drivers that turn a travelling-wave ODE into verified solution branches.

use crate::closed_form::build_u;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::poly::{normalize_poly, MultiPoly};
use crate::reduce::TravellingWaveODE;
use crate::solve::{solve_system, Assignment, PolySystem};
use crate::verify::{
    grid_avoiding_poles, residual_report, Grid, ResidualOptions, SolutionBranch,
};
use crate::verify::bind_prime_profile;
use crate::closed_form::CaseTag;
use num::{BigInt, BigRational};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// w = F′/F, closed under w′ = −(w² + γ).
    Ffx,
    /// w = −F′/F, closed under w′ = w² + γ.
    Riccati,
}

impl Variant {
    pub fn method_name(&self) -> &'static str {
        match self {
            Variant::Ffx => "ffx",
            Variant::Riccati => "riccati",
        }
    }

    fn coeff_prefix(&self) -> &'static str {
        match self {
            Variant::Ffx => "b",
            Variant::Riccati => "a",
        }
    }

    /// Orientation of w relative to F′/F.
    fn w_sign(&self) -> i64 {
        match self {
            Variant::Ffx => 1,
            Variant::Riccati => -1,
        }
    }
}

/// The expansion polynomial u = b₀ + b₁w + … + b_m w^m.
#[derive(Clone, Debug)]
pub struct AnsatzPoly {
    pub degree: usize,
    pub coeffs: Vec<String>,
    pub w: String,
    pub gamma: String,
}

impl AnsatzPoly {
    pub fn new(degree: usize, prefix: &str) -> Self {
        AnsatzPoly {
            degree,
            coeffs: (0..=degree).map(|j| format!("{}{}", prefix, j)).collect(),
            w: "w".to_string(),
            gamma: "gamma".to_string(),
        }
    }

    pub fn u_expr(&self) -> Expr {
        expr::add(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, name)| {
                    expr::mul(vec![expr::sym(name), expr::pow(expr::sym(&self.w), j as i64)])
                })
                .collect(),
        )
    }
}

/// Derivative of an expression in w under the closure rule of the variant,
/// using w′ as a polynomial in w and γ.
pub fn w_derivative(e: &Expr, w: &str, gamma: &str, variant: Variant) -> Expr {
    let core = expr::add(vec![
        expr::pow(expr::sym(w), 2),
        expr::sym(gamma),
    ]);
    let w_prime = match variant {
        Variant::Ffx => expr::neg(core),
        Variant::Riccati => core,
    };
    expr::mul(vec![e.differentiate(w), w_prime]).expand()
}

/// The same closure at the polynomial level: maps a polynomial in w to its
/// ξ-derivative, raising the degree by exactly one (for degree ≥ 1).
pub fn w_derivative_closure(
    p: &MultiPoly,
    w: &str,
    gamma: &str,
    variant: Variant,
) -> Result<MultiPoly> {
    normalize_poly(&w_derivative(&p.to_expr(), w, gamma, variant), &[w])
}

/// Determines the expansion degree m from the requirement that the highest
/// derivative and the strongest nonlinearity grow to the same w-degree.
///
/// Each expanded monomial with n factors of the dependent function (counted
/// with multiplicity) and total derivative order s reaches degree n·m + s.
/// Balancing a nonlinear monomial against the leading linear derivative of
/// order k gives m = (k − s)/(n − 1), which must be a positive integer and
/// must dominate every other monomial.
pub fn balance_degree(ode: &TravellingWaveODE) -> Result<usize> {
    let expanded = ode.lhs.expand();
    let terms: Vec<Expr> = match &expanded {
        Expr::Sum(ts) => ts.clone(),
        other => vec![other.clone()],
    };
    let dep = ode.dependent.as_str();
    // (n, s) per monomial
    let mut profile: Vec<(i64, i64)> = vec![];
    let mut k_max = 0i64;
    for t in &terms {
        let factors: Vec<&Expr> = match t {
            Expr::Prod(fs) => fs.iter().collect(),
            other => vec![other],
        };
        let mut n = 0i64;
        let mut s = 0i64;
        for f in factors {
            match f {
                Expr::Sym(name) if name == dep => n += 1,
                Expr::Der(name, vars) if name == dep => {
                    n += 1;
                    s += vars.len() as i64;
                    k_max = k_max.max(vars.len() as i64);
                }
                Expr::Pow(b, k) => match b.as_ref() {
                    Expr::Sym(name) if name == dep => n += k,
                    Expr::Der(name, vars) if name == dep => {
                        n += k;
                        s += k * vars.len() as i64;
                        k_max = k_max.max(vars.len() as i64);
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        profile.push((n, s));
    }
    if !profile.iter().any(|&(n, _)| n >= 2) {
        return Err(Error::LinearEquation);
    }
    let mut candidates: Vec<i64> = vec![];
    for &(n, s) in &profile {
        if n >= 2 {
            let num = k_max - s;
            let den = n - 1;
            if num > 0 && num % den == 0 {
                let m = num / den;
                if !candidates.contains(&m) {
                    candidates.push(m);
                }
            }
        }
    }
    // keep only candidates where the nonlinear peak meets, and nothing
    // exceeds, the degree m + k of the leading derivative
    candidates.retain(|&m| {
        let target = m + k_max;
        profile.iter().all(|&(n, s)| n * m + s <= target)
            && profile
                .iter()
                .any(|&(n, s)| n >= 2 && n * m + s == target)
    });
    match candidates.len() {
        1 => Ok(candidates[0] as usize),
        0 => Err(Error::NoBalance(
            "no nonlinear monomial balances the leading derivative".to_string(),
        )),
        _ => Err(Error::NoBalance(format!(
            "ambiguous balance degrees {:?}",
            candidates
        ))),
    }
}

/// Substitutes the expansion into the ODE and collects the coefficient of
/// each power of w into one polynomial equation.
pub fn build_system(
    ode: &TravellingWaveODE,
    ansatz: &AnsatzPoly,
    variant: Variant,
    parameters: &[String],
) -> Result<PolySystem> {
    let u = ansatz.u_expr();
    let mut map: BTreeMap<Expr, Expr> = BTreeMap::new();
    map.insert(expr::sym(&ode.dependent), u.clone());
    let mut d = u;
    for order in 1..=ode.max_order() {
        d = w_derivative(&d, &ansatz.w, &ansatz.gamma, variant);
        map.insert(expr::prime(&ode.dependent, order), d.clone());
    }
    let substituted = ode.lhs.substitute(&map).expand();
    let poly = normalize_poly(&substituted, &[&ansatz.w])?;
    let equations: Vec<Expr> = poly.terms().map(|(_, coeff)| coeff.clone()).collect();
    let mut unknowns: Vec<String> = ansatz.coeffs.clone();
    unknowns.push(ode.speed.clone());
    unknowns.push(ansatz.gamma.clone());
    let mut system = PolySystem::new(equations, unknowns);
    system.parameters = parameters.to_vec();
    system
        .nonzero
        .push(expr::sym(ansatz.coeffs.last().expect("nonempty ansatz")));
    Ok(system)
}

/// Everything a method run reports: the verified branches plus diagnostics.
#[derive(Clone, Debug)]
pub struct MethodOutcome {
    pub method: &'static str,
    pub branches: Vec<SolutionBranch>,
    pub complex_discarded: usize,
    pub notes: Vec<String>,
}

pub fn run_ffx(ode: &TravellingWaveODE, parameters: &[String]) -> Result<MethodOutcome> {
    match run_variant(ode, parameters, Variant::Ffx, None) {
        Err(Error::LinearEquation) => {
            // a linear equation has no nonlinearity to balance against; a
            // degree-1 expansion still closes, so offer it when it works
            match run_variant(ode, parameters, Variant::Ffx, Some(1)) {
                Ok(outcome) => Ok(outcome),
                Err(_) => Err(Error::LinearEquation),
            }
        }
        other => other,
    }
}

pub fn run_riccati(ode: &TravellingWaveODE, parameters: &[String]) -> Result<MethodOutcome> {
    run_variant(ode, parameters, Variant::Riccati, None)
}

fn run_variant(
    ode: &TravellingWaveODE,
    parameters: &[String],
    variant: Variant,
    forced_degree: Option<usize>,
) -> Result<MethodOutcome> {
    let degree = match forced_degree {
        Some(m) => m,
        None => balance_degree(ode)?,
    };
    let ansatz = AnsatzPoly::new(degree, variant.coeff_prefix());
    let system = build_system(ode, &ansatz, variant, parameters)?;
    let outcome = solve_system(&system)?;
    let mut notes = outcome.notes.clone();
    let mut branches = vec![];
    for assignment in &outcome.assignments {
        // the moving-frame ansatz presumes a nonzero speed; a zero-speed
        // root is a steady state, reported as a diagnostic instead
        let standing = assignment
            .value_of(&ode.speed)
            .map(|v| v.vanishes())
            .unwrap_or(false);
        if standing {
            notes.push(format!(
                "discarded a standing-wave branch ({} = 0)",
                ode.speed
            ));
            continue;
        }
        match finish_branch(ode, &ansatz, variant, assignment, &mut notes)? {
            Some(b) => branches.push(b),
            None => {}
        }
    }
    if branches.is_empty() {
        return Err(Error::NoExactSolution);
    }
    Ok(MethodOutcome {
        method: variant.method_name(),
        branches,
        complex_discarded: outcome.complex_discarded,
        notes,
    })
}

/// Closes an assignment with representative values for its free unknowns
/// (γ → −1, everything else → 1) so that a concrete profile can be built
/// and verified, keeping the symbolic assignment for reporting.
fn close_assignment(
    assignment: &Assignment,
    gamma: &str,
) -> BTreeMap<String, Expr> {
    let mut reps: Vec<(String, Expr)> = vec![];
    for f in &assignment.free {
        let rep = if f == gamma {
            expr::int(-1)
        } else {
            expr::int(1)
        };
        reps.push((f.clone(), rep));
    }
    let mut closed: BTreeMap<String, Expr> = BTreeMap::new();
    for (name, value) in &assignment.values {
        let mut v = value.clone();
        for (f, rep) in &reps {
            v = v.substitute_symbol(f, rep);
        }
        closed.insert(name.clone(), v);
    }
    for (f, rep) in reps {
        closed.insert(f, rep);
    }
    closed
}

fn finish_branch(
    ode: &TravellingWaveODE,
    ansatz: &AnsatzPoly,
    variant: Variant,
    assignment: &Assignment,
    notes: &mut Vec<String>,
) -> Result<Option<SolutionBranch>> {
    let closed = close_assignment(assignment, &ansatz.gamma);
    let gamma_value = match closed.get(&ansatz.gamma).and_then(|e| e.as_num()) {
        Some(r) => r.clone(),
        None => {
            notes.push(format!(
                "branch skipped: {} does not close to a number",
                ansatz.gamma
            ));
            return Ok(None);
        }
    };
    let mut u_of_w = ansatz.u_expr();
    for (name, value) in &closed {
        u_of_w = u_of_w.substitute_symbol(name, value);
    }
    let profiles = build_u(&u_of_w, &ansatz.w, &gamma_value, variant.w_sign(), assignment)?;
    // close the ODE itself for residual evaluation
    let mut lhs = ode.lhs.clone();
    if let Some(speed) = closed.get(&ode.speed) {
        lhs = lhs.substitute_symbol(&ode.speed, speed);
    }
    let opts = ResidualOptions::default();
    let mut main = None;
    let mut limits = vec![];
    let mut main_report = None;
    for (i, profile) in profiles.into_iter().enumerate() {
        let bound = bind_prime_profile(&lhs, &ode.dependent, &profile.u);
        let mut bindings: BTreeMap<String, f64> = BTreeMap::new();
        for name in &profile.constants {
            bindings.insert(name.clone(), 1.0);
        }
        let grid = match profile.case {
            CaseTag::Trig | CaseTag::Linear => {
                grid_avoiding_poles(&profile.u, &bindings, &Grid::default_wave())
            }
            _ => Grid::default_wave(),
        };
        let report = residual_report(&bound, &grid, &bindings, &opts)?;
        if i == 0 {
            if !report.pass {
                notes.push(format!(
                    "branch rejected: residual {:.3e} on [{:.2}, {:.2}]",
                    report.max_residual, report.grid.from, report.grid.to
                ));
                return Ok(None);
            }
            main = Some(profile);
            main_report = Some(report);
        } else if report.pass {
            limits.push(profile);
        }
    }
    let solution = main.expect("at least one profile per branch");
    Ok(Some(SolutionBranch {
        method: variant.method_name(),
        assignment: assignment.clone(),
        solution,
        limit_solutions: limits,
        residual: main_report.expect("report recorded with main profile"),
    }))
}

// ---- exponential-basis comparison ----

/// Coefficients of an expansion in G′/G where G solves
/// G″ + λG′ + μG = 0.
#[derive(Clone, Debug)]
pub struct GExpParams {
    pub lambda: BigRational,
    pub mu: BigRational,
    pub a: Vec<BigRational>,
}

/// Converts an expansion in G′/G into the equivalent expansion in F′/F with
/// F″ + γF = 0: the substitution G = e^{−λξ/2}F shifts the logarithmic
/// derivative by −λ/2 and gives γ = μ − λ²/4. Returns (γ, b).
pub fn g_to_f(params: &GExpParams) -> (BigRational, Vec<BigRational>) {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let shift = -&params.lambda * &half;
    let gamma = &params.mu - &params.lambda * &params.lambda * BigRational::new(BigInt::from(1), BigInt::from(4));
    let n = params.a.len();
    let mut b = vec![BigRational::from_integer(BigInt::from(0)); n];
    for i in 0..n {
        for j in i..n {
            // a_j (w + shift)^j contributes a_j·C(j,i)·shift^{j−i} to b_i
            let c = binomial(j, i);
            let mut term = params.a[j].clone() * BigRational::from_integer(c);
            let mut p = BigRational::from_integer(BigInt::from(1));
            for _ in 0..(j - i) {
                p *= &shift;
            }
            term *= p;
            b[i] += term;
        }
    }
    (gamma, b)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
