//! Exact solver for the small polynomial systems produced by the expansion
//! methods: elimination with explicit case splits.
//!
//! The solver walks a worklist of partial states. At each step it picks the
//! cheapest available action, preferring ones that cannot lose or invent
//! solutions: solving an unknown that appears linearly with a numeric
//! coefficient, then with a coefficient already known to be nonzero, then
//! exact root extraction for univariate equations, then zero-product splits,
//! and finally a two-way split on a linear coefficient (coefficient zero vs.
//! division). Complex roots are discarded and counted. Branches whose side
//! conditions fail are pruned; every surviving assignment is re-checked
//! against the original equations before it is reported.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::poly::normalize_poly;
use crate::radical::Radical;
use num::{BigInt, BigRational, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct PolySystem {
    /// Equations, each understood as `expression = 0`.
    pub equations: Vec<Expr>,
    /// Symbols to solve for, in elimination preference order.
    pub unknowns: Vec<String>,
    /// Symbols that may appear in coefficients but are never solved for.
    pub parameters: Vec<String>,
    /// Expressions that must not vanish on any reported branch.
    pub nonzero: Vec<Expr>,
    /// Groups of unknowns of which at least one must stay nonzero.
    pub not_all_zero: Vec<Vec<String>>,
}

impl PolySystem {
    pub fn new(equations: Vec<Expr>, unknowns: Vec<String>) -> PolySystem {
        PolySystem {
            equations,
            unknowns,
            parameters: vec![],
            nonzero: vec![],
            not_all_zero: vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    /// Exact value per solved unknown; values may reference free unknowns
    /// and parameters but never other solved unknowns.
    pub values: BTreeMap<String, Expr>,
    /// Unknowns the branch leaves unconstrained.
    pub free: BTreeSet<String>,
    /// Non-numeric expressions this branch divided by (assumed nonzero).
    pub assumptions: Vec<Expr>,
}

impl Assignment {
    pub fn value_of(&self, name: &str) -> Option<&Expr> {
        self.values.get(name)
    }

    fn sort_key(&self) -> String {
        let mut key = String::new();
        for (k, v) in &self.values {
            key.push_str(k);
            key.push('=');
            key.push_str(&v.to_string());
            key.push(';');
        }
        for f in &self.free {
            key.push_str(f);
            key.push(',');
        }
        key
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOutcome {
    pub assignments: Vec<Assignment>,
    /// Number of complex roots discarded while extracting real branches.
    pub complex_discarded: usize,
    /// Human-readable notes about pruned or generic-parameter branches.
    pub notes: Vec<String>,
}

const MAX_STATES: usize = 20_000;

#[derive(Clone, Debug)]
struct State {
    eqs: Vec<Expr>,
    values: BTreeMap<String, Expr>,
    assumptions: Vec<Expr>,
}

fn rules_of(values: &BTreeMap<String, Expr>) -> BTreeMap<Expr, Expr> {
    values
        .iter()
        .map(|(k, v)| (expr::sym(k), v.clone()))
        .collect()
}

/// Substitutes an assignment into an expression and clears denominators,
/// returning the expanded numerator.
fn reduce_with(e: &Expr, values: &BTreeMap<String, Expr>) -> Expr {
    let s = e.substitute(&rules_of(values));
    let (n, _d) = s.as_ratio();
    n.expand()
}

pub fn solve_system(system: &PolySystem) -> Result<SolveOutcome> {
    let mut outcome = SolveOutcome::default();
    let mut notes: BTreeSet<String> = BTreeSet::new();
    let mut worklist = vec![State {
        eqs: system.equations.clone(),
        values: BTreeMap::new(),
        assumptions: vec![],
    }];
    let mut processed = 0usize;
    let mut finished: Vec<Assignment> = vec![];

    while let Some(mut state) = worklist.pop() {
        processed += 1;
        if processed > MAX_STATES {
            return Err(Error::TooHard(
                "case-split budget exhausted while solving the algebraic system".to_string(),
            ));
        }
        if !normalize_state(&mut state, system, &mut notes, &mut outcome.complex_discarded) {
            continue;
        }
        if state.eqs.is_empty() {
            if let Some(asg) = finalize(&state, system, &mut notes) {
                finished.push(asg);
            }
            continue;
        }
        match find_action(&state, system)? {
            Action::Assign { x, value } => {
                apply_assignment(&mut state, &x, value);
                worklist.push(state);
            }
            Action::Univariate { x, roots, complex } => {
                outcome.complex_discarded += complex;
                for r in roots {
                    let mut child = state.clone();
                    apply_assignment(&mut child, &x, expr::num(r));
                    worklist.push(child);
                }
            }
            Action::MonomialSplit {
                eq_idx,
                factor_vars,
                residual,
            } => {
                for v in &factor_vars {
                    let mut child = state.clone();
                    child.eqs.remove(eq_idx);
                    apply_assignment(&mut child, v, expr::int(0));
                    worklist.push(child);
                }
                let mut child = state.clone();
                child.eqs[eq_idx] = residual;
                for v in &factor_vars {
                    child.assumptions.push(expr::sym(v));
                }
                worklist.push(child);
            }
            Action::QuadraticSplit { eq_idx, x, roots } => {
                for r in roots {
                    let mut child = state.clone();
                    child.eqs.remove(eq_idx);
                    apply_assignment(&mut child, &x, r);
                    worklist.push(child);
                }
            }
            Action::LinearSplit { eq_idx, x, a, b } => {
                // coefficient-vanishes branch
                let mut zero_branch = state.clone();
                zero_branch.eqs.remove(eq_idx);
                zero_branch.eqs.push(a.clone());
                zero_branch.eqs.push(b.clone());
                worklist.push(zero_branch);
                // division branch
                let mut div_branch = state.clone();
                div_branch.eqs.remove(eq_idx);
                push_factor_assumptions(&mut div_branch.assumptions, &a);
                let value = expr::mul(vec![expr::neg(b), expr::pow(a, -1)]);
                apply_assignment(&mut div_branch, &x, value);
                worklist.push(div_branch);
            }
        }
    }

    // dedup and order deterministically
    finished.sort_by(|p, q| p.sort_key().cmp(&q.sort_key()));
    finished.dedup_by(|p, q| p.sort_key() == q.sort_key());
    outcome.assignments = finished;
    outcome.notes = notes.into_iter().collect();
    Ok(outcome)
}

/// Substitutes the state's solved values into each remaining equation,
/// drops satisfied equations, and prunes contradictory or side-condition
/// violating states. Returns false when the state is dead.
fn normalize_state(
    state: &mut State,
    system: &PolySystem,
    notes: &mut BTreeSet<String>,
    _complex: &mut usize,
) -> bool {
    let mut out: Vec<Expr> = vec![];
    for eq in &state.eqs {
        let n = reduce_with(eq, &state.values);
        if n.is_num_zero() {
            continue;
        }
        if n.as_num().is_some() {
            return false; // nonzero constant: contradiction
        }
        let has_unknown = system
            .unknowns
            .iter()
            .any(|u| !state.values.contains_key(u) && n.contains_symbol(u));
        if !has_unknown {
            // constraint purely in parameters/free atoms: only satisfiable on
            // special parameter values; report generically and prune
            notes.insert(format!("dropped parameter-only constraint: {} = 0", n));
            return false;
        }
        out.push(n);
    }
    out.sort();
    out.dedup();
    state.eqs = out;
    // side conditions and division assumptions must not vanish identically
    for nz in system.nonzero.iter().chain(state.assumptions.iter()) {
        let v = nz.substitute(&rules_of(&state.values));
        if v.vanishes() {
            return false;
        }
    }
    true
}

fn finalize(
    state: &State,
    system: &PolySystem,
    notes: &mut BTreeSet<String>,
) -> Option<Assignment> {
    let free: BTreeSet<String> = system
        .unknowns
        .iter()
        .filter(|u| !state.values.contains_key(*u))
        .cloned()
        .collect();
    for group in &system.not_all_zero {
        let all_zero = group.iter().all(|g| {
            state
                .values
                .get(g)
                .map(|v| v.vanishes())
                .unwrap_or(false)
        });
        if all_zero {
            return None;
        }
    }
    let mut assumptions: Vec<Expr> = vec![];
    for a in &state.assumptions {
        let v = a.substitute(&rules_of(&state.values));
        if v.vanishes() {
            return None;
        }
        if v.as_num().is_none() && !assumptions.contains(&v) {
            assumptions.push(v);
        }
    }
    let asg = Assignment {
        values: state.values.clone(),
        free,
        assumptions,
    };
    if !verify_assignment(system, &asg) {
        notes.insert("discarded a branch that failed re-substitution".to_string());
        return None;
    }
    Some(asg)
}

/// Soundness gate: substituting the assignment into every original equation
/// must yield an identical zero (as a rational function of whatever symbols
/// remain free), and no side condition may vanish identically.
pub fn verify_assignment(system: &PolySystem, asg: &Assignment) -> bool {
    let rules = rules_of(&asg.values);
    for eq in &system.equations {
        if !eq.substitute(&rules).vanishes() {
            return false;
        }
    }
    for nz in &system.nonzero {
        if nz.substitute(&rules).vanishes() {
            return false;
        }
    }
    true
}

enum Action {
    Assign { x: String, value: Expr },
    Univariate {
        x: String,
        roots: Vec<Radical>,
        complex: usize,
    },
    MonomialSplit {
        eq_idx: usize,
        factor_vars: Vec<String>,
        residual: Expr,
    },
    LinearSplit {
        eq_idx: usize,
        x: String,
        a: Expr,
        b: Expr,
    },
    QuadraticSplit {
        eq_idx: usize,
        x: String,
        roots: Vec<Expr>,
    },
}

fn unknowns_in(eq: &Expr, system: &PolySystem, state: &State) -> Vec<String> {
    let frees = eq.free_symbols();
    system
        .unknowns
        .iter()
        .filter(|u| !state.values.contains_key(*u) && frees.contains(*u))
        .cloned()
        .collect()
}

fn push_factor_assumptions(assumptions: &mut Vec<Expr>, a: &Expr) {
    match a {
        Expr::Prod(fs) => {
            for f in fs {
                push_factor_assumptions(assumptions, f);
            }
        }
        Expr::Pow(b, _) => push_factor_assumptions(assumptions, b),
        Expr::Num(_) => {}
        other => {
            if !assumptions.contains(other) {
                assumptions.push(other.clone());
            }
        }
    }
}

/// Square root of an expanded expression when it is a single monomial with
/// a perfect-square numeric coefficient and even exponents (or zero).
fn monomial_sqrt(e: &Expr) -> Option<Expr> {
    if e.is_num_zero() {
        return Some(expr::int(0));
    }
    let vars: Vec<String> = e.free_symbols().into_iter().collect();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let p = normalize_poly(e, &var_refs).ok()?;
    if p.term_count() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    let root = c.as_num()?.sqrt()?;
    let mut fs = vec![expr::num(root)];
    for (j, &k) in m.0.iter().enumerate() {
        if k % 2 != 0 {
            return None;
        }
        if k > 0 {
            fs.push(expr::pow(expr::sym(&vars[j]), k / 2));
        }
    }
    Some(expr::mul(fs))
}

fn is_known_nonzero(e: &Expr, known: &BTreeSet<Expr>) -> bool {
    match e {
        Expr::Num(_) => true, // canonical numbers are nonzero unless the zero literal
        Expr::Pow(b, _) => is_known_nonzero(b, known),
        Expr::Prod(fs) => fs.iter().all(|f| is_known_nonzero(f, known)),
        other => known.contains(other),
    }
}

fn find_action(state: &State, system: &PolySystem) -> Result<Action> {
    let known: BTreeSet<Expr> = system
        .nonzero
        .iter()
        .cloned()
        .chain(state.assumptions.iter().cloned())
        .collect();

    // class 0/1: linear unknown with invertible coefficient
    for strict in [true, false] {
        for eq in &state.eqs {
            for x in unknowns_in(eq, system, state) {
                let Ok(p) = normalize_poly(eq, &[&x]) else { continue };
                if p.degree_in(&x) != Some(1) {
                    continue;
                }
                let a = p.coeff_of(&[1]);
                let b = p.coeff_of(&[0]);
                let invertible = if strict {
                    a.as_num().is_some()
                } else {
                    is_known_nonzero(&a, &known)
                };
                if invertible {
                    let value = expr::mul(vec![expr::neg(b), expr::pow(a, -1)]);
                    return Ok(Action::Assign { x, value });
                }
            }
        }
    }

    // class 2: univariate equation with numeric coefficients
    for eq in &state.eqs {
        let us = unknowns_in(eq, system, state);
        if us.len() != 1 {
            continue;
        }
        let x = &us[0];
        let Ok(p) = normalize_poly(eq, &[x.as_str()]) else { continue };
        let deg = p.degree_in(x).unwrap_or(0);
        if deg < 1 {
            continue;
        }
        let mut coeffs: Vec<Radical> = vec![Radical::zero(); (deg + 1) as usize];
        let mut numeric = true;
        for (m, c) in p.terms() {
            match c.as_num() {
                Some(r) => coeffs[m.0[0] as usize] = r.clone(),
                None => {
                    numeric = false;
                    break;
                }
            }
        }
        if !numeric {
            continue;
        }
        let (roots, complex) = univariate_roots(&coeffs)?;
        return Ok(Action::Univariate {
            x: x.clone(),
            roots,
            complex,
        });
    }

    // class 3: zero-product split on a common monomial factor
    for (i, eq) in state.eqs.iter().enumerate() {
        let us = unknowns_in(eq, system, state);
        if us.is_empty() {
            continue;
        }
        let var_refs: Vec<&str> = us.iter().map(|s| s.as_str()).collect();
        let Ok(p) = normalize_poly(eq, &var_refs) else { continue };
        if p.is_zero() {
            continue;
        }
        let n = var_refs.len();
        let mut mins = vec![i64::MAX; n];
        for (m, _) in p.terms() {
            for (j, &e) in m.0.iter().enumerate() {
                mins[j] = mins[j].min(e);
            }
        }
        let factor_vars: Vec<String> = (0..n)
            .filter(|&j| mins[j] >= 1)
            .map(|j| us[j].clone())
            .collect();
        if factor_vars.is_empty() {
            continue;
        }
        let mut residual_terms = vec![];
        for (m, c) in p.terms() {
            let mut factors = vec![c.clone()];
            for (j, &e) in m.0.iter().enumerate() {
                let e2 = e - if mins[j] >= 1 { mins[j] } else { 0 };
                if e2 != 0 {
                    factors.push(expr::pow(expr::sym(&us[j]), e2));
                }
            }
            residual_terms.push(expr::mul(factors));
        }
        return Ok(Action::MonomialSplit {
            eq_idx: i,
            factor_vars,
            residual: expr::add(residual_terms),
        });
    }

    // class 4: split on a symbolic linear coefficient
    for (i, eq) in state.eqs.iter().enumerate() {
        for x in unknowns_in(eq, system, state) {
            let Ok(p) = normalize_poly(eq, &[&x]) else { continue };
            if p.degree_in(&x) != Some(1) {
                continue;
            }
            return Ok(Action::LinearSplit {
                eq_idx: i,
                x: x.clone(),
                a: p.coeff_of(&[1]),
                b: p.coeff_of(&[0]),
            });
        }
    }

    // class 5: quadratic in one unknown with numeric leading coefficient
    // whose discriminant is a perfect square, giving exact root branches
    for (i, eq) in state.eqs.iter().enumerate() {
        for x in unknowns_in(eq, system, state) {
            let Ok(p) = normalize_poly(eq, &[&x]) else { continue };
            if p.degree_in(&x) != Some(2) {
                continue;
            }
            let Some(a) = p.coeff_of(&[2]).as_num().cloned() else {
                continue;
            };
            let b = p.coeff_of(&[1]);
            let c = p.coeff_of(&[0]);
            let disc = expr::sub(
                expr::mul(vec![b.clone(), b.clone()]),
                expr::mul(vec![expr::int(4), expr::num(a.clone()), c.clone()]),
            )
            .expand();
            let Some(s) = monomial_sqrt(&disc) else { continue };
            let scale = expr::num(
                a.mul(&Radical::from_integer(2))
                    .inv()
                    .expect("leading coefficient is nonzero"),
            );
            let r1 = expr::mul(vec![
                expr::add(vec![expr::neg(b.clone()), s.clone()]),
                scale.clone(),
            ]);
            let mut roots = vec![r1];
            if !s.is_num_zero() {
                roots.push(expr::mul(vec![
                    expr::sub(expr::neg(b.clone()), s.clone()),
                    scale,
                ]));
            }
            return Ok(Action::QuadraticSplit {
                eq_idx: i,
                x: x.clone(),
                roots,
            });
        }
    }

    Err(Error::TooHard(format!(
        "no elimination step applies to: {}",
        state
            .eqs
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    )))
}

fn apply_assignment(state: &mut State, x: &str, value: Expr) {
    // keep the map triangular: no stored value references a solved unknown
    let clean = value.substitute(&rules_of(&state.values));
    let mut single = BTreeMap::new();
    single.insert(expr::sym(x), clean.clone());
    let keys: Vec<String> = state.values.keys().cloned().collect();
    for k in keys {
        let v = state.values[&k].substitute(&single);
        state.values.insert(k, v);
    }
    state.values.insert(x.to_string(), clean);
}

// ---- exact univariate root extraction ----

/// Real roots of Σ coeffs[i]·x^i (exact), plus a count of discarded complex
/// roots. Fails with TooHard when exact extraction is out of reach.
fn univariate_roots(coeffs: &[Radical]) -> Result<(Vec<Radical>, usize)> {
    let mut cs: Vec<Radical> = coeffs.to_vec();
    while matches!(cs.last(), Some(c) if c.is_zero()) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return Ok((vec![], 0));
    }
    // factor out x^k
    let k = cs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots: Vec<Radical> = vec![];
    let mut complex = 0usize;
    if k > 0 {
        roots.push(Radical::zero());
        cs.drain(..k);
    }
    if cs.len() >= 2 {
        let (mut rs, c) = poly_roots(&cs)?;
        complex += c;
        roots.append(&mut rs);
    }
    roots.sort();
    roots.dedup();
    Ok((roots, complex))
}

/// Roots of a polynomial with a nonzero constant term.
fn poly_roots(cs: &[Radical]) -> Result<(Vec<Radical>, usize)> {
    let deg = cs.len() - 1;
    match deg {
        0 => Ok((vec![], 0)),
        1 => {
            let r = cs[0]
                .neg()
                .mul(&cs[1].inv().ok_or_else(|| {
                    Error::TooHard("could not invert a leading coefficient".to_string())
                })?);
            Ok((vec![r], 0))
        }
        2 => quadratic_roots(&cs[2], &cs[1], &cs[0]),
        _ => {
            // even-exponent structure: substitute z = x^2
            let all_even = cs
                .iter()
                .enumerate()
                .all(|(i, c)| c.is_zero() || i % 2 == 0);
            if all_even {
                let zs: Vec<Radical> = cs.iter().step_by(2).cloned().collect();
                let (zroots, zcomplex) = poly_roots(&zs)?;
                let mut roots = vec![];
                let mut complex = 2 * zcomplex;
                for z in zroots {
                    match z.sign() {
                        Ordering::Less => complex += 2,
                        Ordering::Equal => roots.push(Radical::zero()),
                        Ordering::Greater => {
                            let s = z.sqrt().ok_or_else(|| {
                                Error::TooHard(format!(
                                    "no exact square root for {}",
                                    z
                                ))
                            })?;
                            roots.push(s.clone());
                            roots.push(s.neg());
                        }
                    }
                }
                return Ok((roots, complex));
            }
            rational_root_descent(cs)
        }
    }
}

fn quadratic_roots(a: &Radical, b: &Radical, c: &Radical) -> Result<(Vec<Radical>, usize)> {
    let four_ac = Radical::from_integer(4).mul(&a.mul(c));
    let disc = b.mul(b).sub(&four_ac);
    match disc.sign() {
        Ordering::Less => Ok((vec![], 2)),
        Ordering::Equal => {
            let two_a = Radical::from_integer(2).mul(a);
            let r = b.neg().mul(&two_a.inv().ok_or_else(|| {
                Error::TooHard("could not invert quadratic coefficient".to_string())
            })?);
            Ok((vec![r], 0))
        }
        Ordering::Greater => {
            let s = disc.sqrt().ok_or_else(|| {
                Error::TooHard(format!("no exact square root for discriminant {}", disc))
            })?;
            let two_a_inv = Radical::from_integer(2).mul(a).inv().ok_or_else(|| {
                Error::TooHard("could not invert quadratic coefficient".to_string())
            })?;
            let r1 = b.neg().add(&s).mul(&two_a_inv);
            let r2 = b.neg().sub(&s).mul(&two_a_inv);
            Ok((vec![r1, r2], 0))
        }
    }
}

/// Degree ≥ 3 with mixed parity: peel off rational roots and recurse.
fn rational_root_descent(cs: &[Radical]) -> Result<(Vec<Radical>, usize)> {
    let rational: Option<Vec<BigRational>> = cs
        .iter()
        .map(|c| c.as_rational().cloned())
        .collect();
    let Some(qs) = rational else {
        return Err(Error::TooHard(
            "irrational coefficients in a high-degree equation".to_string(),
        ));
    };
    // scale to integers
    let mut denom_lcm = BigInt::from(1);
    for q in &qs {
        denom_lcm = num::integer::lcm(denom_lcm.clone(), q.denom().clone());
    }
    let ints: Vec<BigInt> = qs
        .iter()
        .map(|q| (q * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let cap = BigInt::from(1_000_000);
    if a0 > cap || an > cap {
        return Err(Error::TooHard(
            "coefficient magnitudes too large for rational root search".to_string(),
        ));
    }
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(p.clone() * BigInt::from(sign), q.clone());
                let mut val = BigRational::zero();
                for c in ints.iter().rev() {
                    val = val * cand.clone() + BigRational::from_integer(c.clone());
                }
                if val.is_zero() {
                    // deflate by (x - cand)
                    let mut quo: Vec<BigRational> = vec![BigRational::zero(); ints.len() - 1];
                    let mut carry = BigRational::zero();
                    for i in (0..ints.len() - 1).rev() {
                        carry = BigRational::from_integer(ints[i + 1].clone())
                            + carry * cand.clone();
                        quo[i] = carry.clone();
                    }
                    let quo_r: Vec<Radical> =
                        quo.iter().map(|q| Radical::from_rational(q.clone())).collect();
                    let (mut rest, complex) = poly_roots(&trim(&quo_r))?;
                    rest.push(Radical::from_rational(cand));
                    return Ok((rest, complex));
                }
            }
        }
    }
    Err(Error::TooHard(
        "no rational root found for a high-degree equation".to_string(),
    ))
}

fn trim(cs: &[Radical]) -> Vec<Radical> {
    let mut v = cs.to_vec();
    while matches!(v.last(), Some(c) if c.is_zero()) {
        v.pop();
    }
    v
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![];
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(1);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{int, sym};
    use crate::parser::parse_any;

    fn system(eqs: &[&str], unknowns: &[&str]) -> PolySystem {
        PolySystem::new(
            eqs.iter().map(|e| parse_any(e).unwrap()).collect(),
            unknowns.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn single_linear_equation() {
        let sys = system(&["2*x - 6"], &["x"]);
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.assignments.len(), 1);
        assert_eq!(out.assignments[0].value_of("x"), Some(&int(3)));
    }

    #[test]
    fn zero_product_splits_into_branches() {
        let sys = system(&["x*y - 2*x"], &["x", "y"]);
        let out = solve_system(&sys).unwrap();
        // x = 0 with y free, and y = 2 with x free
        assert_eq!(out.assignments.len(), 2);
        let keys: Vec<String> = out
            .assignments
            .iter()
            .map(|a| a.sort_key())
            .collect();
        assert!(keys.iter().any(|k| k.starts_with("x=0")));
        assert!(keys.iter().any(|k| k.starts_with("y=2")));
        for a in &out.assignments {
            assert!(verify_assignment(&sys, a));
        }
    }

    #[test]
    fn biquadratic_discards_complex_pair() {
        // 36/2500 c^4 = 1/4 has two real and two complex roots
        let sys = system(&["36/2500*c^4 - 1/4"], &["c"]);
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.complex_discarded, 2);
        let mut roots: Vec<String> = out
            .assignments
            .iter()
            .map(|a| a.value_of("c").unwrap().to_string())
            .collect();
        roots.sort();
        assert_eq!(roots, vec!["-5/6*sqrt(6)", "5/6*sqrt(6)"]);
    }

    #[test]
    fn linear_split_keeps_both_cases() {
        // a*x = -1 with a free: division branch only (a=0 is contradictory)
        let sys = system(&["a*x + 1"], &["x", "a"]);
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.assignments.len(), 1);
        let a = &out.assignments[0];
        assert!(a.free.contains("a"));
        assert_eq!(a.value_of("x").unwrap().to_string(), "-a^-1");
        assert!(!a.assumptions.is_empty());
    }

    #[test]
    fn no_real_solutions_counts_complex() {
        // x = -1/a and a = x forces a^2 + 1 = 0
        let sys = system(&["a*x + 1", "a - x"], &["x", "a"]);
        let out = solve_system(&sys).unwrap();
        assert!(out.assignments.is_empty());
        assert_eq!(out.complex_discarded, 2);
    }

    #[test]
    fn nonzero_side_condition_prunes_branches() {
        let mut sys = system(&["x^2 - x"], &["x"]);
        sys.nonzero.push(sym("x"));
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.assignments.len(), 1);
        assert_eq!(out.assignments[0].value_of("x"), Some(&int(1)));
    }

    #[test]
    fn not_all_zero_group_drops_trivial_branch() {
        let mut sys = system(&["x", "y"], &["x", "y"]);
        sys.not_all_zero.push(vec!["x".to_string(), "y".to_string()]);
        let out = solve_system(&sys).unwrap();
        assert!(out.assignments.is_empty());
    }

    #[test]
    fn triangular_back_substitution() {
        // y = 2x, x = 3 (deliberately ordered so y resolves before x)
        let sys = system(&["y - 2*x", "x - 3"], &["y", "x"]);
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.assignments.len(), 1);
        assert_eq!(out.assignments[0].value_of("y"), Some(&int(6)));
        assert_eq!(out.assignments[0].value_of("x"), Some(&int(3)));
    }

    #[test]
    fn cubic_with_rational_root() {
        // (x-1)(x^2+x+1) = x^3 - 1: one real root, two complex
        let sys = system(&["x^3 - 1"], &["x"]);
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.assignments.len(), 1);
        assert_eq!(out.assignments[0].value_of("x"), Some(&int(1)));
        assert_eq!(out.complex_discarded, 2);
    }

    #[test]
    fn parameter_only_constraint_is_noted() {
        // after x is eliminated the remaining constraint is on the parameter
        let mut sys = system(&["x", "x + p"], &["x"]);
        sys.parameters.push("p".to_string());
        let out = solve_system(&sys).unwrap();
        assert!(out.assignments.is_empty());
        assert!(!out.notes.is_empty());
    }

    #[test]
    fn binary_quadratic_with_square_discriminant_splits() {
        // −x² − x·y + 2y² = −(x − y)(x + 2y): two root branches with y free
        let sys = system(&["-x^2 - x*y + 2*y^2"], &["x", "y"]);
        let out = solve_system(&sys).unwrap();
        assert_eq!(out.assignments.len(), 2);
        let values: Vec<String> = out
            .assignments
            .iter()
            .map(|a| a.value_of("x").unwrap().to_string())
            .collect();
        assert!(values.contains(&"y".to_string()), "{:?}", values);
        assert!(values.contains(&"-2*y".to_string()), "{:?}", values);
        for a in &out.assignments {
            assert!(a.free.contains("y"));
        }
    }
}
