//! Rational-exponential expansions: the ansatz u = Σaₖe^{kαξ} / Σbₖe^{kαξ}
//! over index windows chosen by the caller, collection of the substituted
//! equation into one polynomial equation per exponential rate, optional
//! boundary conditions applied per branch, and the end-to-end driver.

use crate::closed_form::{simplify_exp_ratio, simplify_exponential_ratio, CaseTag, ClosedFormSolution};
use crate::error::{Error, Result};
use crate::expr::{self, Expr, WAVE_VAR};
use crate::ffx::MethodOutcome;
use crate::radical::Radical;
use crate::solve::{solve_system, Assignment, PolySystem};
use crate::verify::{bind_prime_profile, max_prime_order, residual_report, Grid, ResidualOptions, SolutionBranch};
use num::{BigRational, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Index windows of the expansion: numerator exponents num_lo..=num_hi and
/// denominator exponents den_lo..=den_hi, with the lowest denominator
/// coefficient pinned to 1 to fix the common-scale gauge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzExp {
    pub num_lo: i64,
    pub num_hi: i64,
    pub den_lo: i64,
    pub den_hi: i64,
}

fn coeff_name(prefix: &str, k: i64) -> String {
    if k < 0 {
        format!("{}_m{}", prefix, -k)
    } else {
        format!("{}{}", prefix, k)
    }
}

impl AnsatzExp {
    /// Windows from the conventional range quadruple (c, d, p, q):
    /// numerator −c..d, denominator −p..q.
    pub fn from_ranges(c: u32, d: u32, p: u32, q: u32) -> Self {
        AnsatzExp {
            num_lo: -(c as i64),
            num_hi: d as i64,
            den_lo: -(p as i64),
            den_hi: q as i64,
        }
    }

    pub fn numerator_names(&self) -> Vec<String> {
        (self.num_lo..=self.num_hi)
            .map(|k| coeff_name("a", k))
            .collect()
    }

    /// Denominator coefficient names, without the pinned lowest one.
    pub fn denominator_names(&self) -> Vec<String> {
        (self.den_lo + 1..=self.den_hi)
            .map(|k| coeff_name("b", k))
            .collect()
    }

    pub fn pinned(&self) -> String {
        coeff_name("b", self.den_lo)
    }

    /// The ansatz as an expression in the wave variable and α.
    pub fn u_expr(&self, alpha: &str) -> Expr {
        let e_pow = |k: i64| -> Expr {
            expr::exp_of(expr::mul(vec![
                expr::int(k),
                expr::sym(alpha),
                expr::sym(WAVE_VAR),
            ]))
        };
        let num = expr::add(
            (self.num_lo..=self.num_hi)
                .map(|k| expr::mul(vec![expr::sym(&coeff_name("a", k)), e_pow(k)]))
                .collect(),
        );
        let mut den_terms = vec![e_pow(self.den_lo)];
        for k in self.den_lo + 1..=self.den_hi {
            den_terms.push(expr::mul(vec![expr::sym(&coeff_name("b", k)), e_pow(k)]));
        }
        expr::mul(vec![num, expr::pow(expr::add(den_terms), -1)])
    }
}

/// A pointwise condition u^{(order)}(location) = target.
#[derive(Clone, Debug)]
pub struct BoundaryCondition {
    pub order: usize,
    pub location: BigRational,
    pub target: BigRational,
}

/// Substitutes the ansatz into the equation, clears the denominator, and
/// collects the coefficient of each exponential rate into one equation.
/// Equations are returned in increasing order of the rate multiple.
pub fn exp_collect(
    lhs: &Expr,
    dependent: &str,
    ansatz: &AnsatzExp,
    alpha: &str,
) -> Result<Vec<Expr>> {
    let u = ansatz.u_expr(alpha);
    let mut map: BTreeMap<Expr, Expr> = BTreeMap::new();
    map.insert(expr::sym(dependent), u.clone());
    let mut d = u;
    for order in 1..=max_prime_order(lhs, dependent) {
        d = d.differentiate(WAVE_VAR);
        map.insert(expr::prime(dependent, order), d.clone());
    }
    let substituted = lhs.substitute(&map);
    let numerator = substituted.as_ratio().0.expand();
    let buckets = bucket_by_rate(&numerator, alpha)?;
    Ok(buckets.into_values().collect())
}

/// Groups the terms of an expanded sum by the rational multiple of α·ξ in
/// their exponential factor.
fn bucket_by_rate(e: &Expr, alpha: &str) -> Result<BTreeMap<BigRational, Expr>> {
    let core_shape = expr::mul(vec![expr::sym(alpha), expr::sym(WAVE_VAR)]);
    let terms: Vec<Expr> = match e {
        Expr::Sum(ts) => ts.clone(),
        other => vec![other.clone()],
    };
    let mut buckets: BTreeMap<BigRational, Vec<Expr>> = BTreeMap::new();
    for t in terms {
        let factors: Vec<Expr> = match t {
            Expr::Prod(fs) => fs,
            other => vec![other],
        };
        let mut rate = BigRational::from_integer(0.into());
        let mut coeff: Vec<Expr> = vec![];
        for f in factors {
            if let Expr::Exp(arg) = &f {
                if arg.contains_symbol(WAVE_VAR) {
                    let (r, core) = arg.coeff_core();
                    let q = match (&core, r.as_rational()) {
                        (Some(c), Some(q)) if *c == core_shape => q.clone(),
                        _ => {
                            return Err(Error::InvalidProblem(format!(
                                "exponential factor {} is not a rational multiple of {}*{}",
                                f, alpha, WAVE_VAR
                            )))
                        }
                    };
                    rate = q;
                    continue;
                }
            }
            if f.contains_symbol(WAVE_VAR) {
                return Err(Error::InvalidProblem(format!(
                    "non-exponential dependence on {} after substitution: {}",
                    WAVE_VAR, f
                )));
            }
            coeff.push(f);
        }
        buckets.entry(rate).or_default().push(expr::mul(coeff));
    }
    Ok(buckets
        .into_iter()
        .map(|(k, terms)| (k, expr::add(terms)))
        .filter(|(_, e)| !e.is_num_zero())
        .collect())
}

/// Applies boundary conditions to one solved branch. Exponentials of α are
/// abstracted as integer powers of one atom X = e^{gα}, the conditions are
/// solved for the branch's remaining free coefficients with α and X treated
/// as nonzero parameters, and X is substituted back.
pub fn apply_boundary_conditions(
    branch: &Assignment,
    profile: &Expr,
    bcs: &[BoundaryCondition],
    alpha: &str,
    notes: &mut Vec<String>,
    complex_discarded: &mut usize,
) -> Result<Vec<Assignment>> {
    // raw condition expressions in α, coefficients, and e^{qα} atoms
    let mut raw = vec![];
    for bc in bcs {
        let mut e = profile.clone();
        for _ in 0..bc.order {
            e = e.differentiate(WAVE_VAR);
        }
        let at = e.substitute_symbol(
            WAVE_VAR,
            &expr::num(Radical::from_rational(bc.location.clone())),
        );
        raw.push(expr::sub(
            at,
            expr::num(Radical::from_rational(bc.target.clone())),
        ));
    }
    // collect exponential atoms e^{q·α}
    let mut multiples: BTreeSet<BigRational> = BTreeSet::new();
    let mut bad = false;
    for e in &raw {
        e.walk(&mut |n| {
            if let Expr::Exp(arg) = n {
                let (r, core) = arg.coeff_core();
                match (&core, r.as_rational()) {
                    (Some(c), Some(q)) if *c == expr::sym(alpha) => {
                        multiples.insert(q.clone());
                    }
                    _ => bad = true,
                }
            }
        });
    }
    if bad {
        return Err(Error::InvalidProblem(
            "boundary conditions mix exponential atoms beyond powers of e^alpha".to_string(),
        ));
    }
    let x_name = "X";
    let g = rational_gcd_of(&multiples);
    let mut conditions = vec![];
    for e in &raw {
        let mut mapped = e.clone();
        if let Some(g) = &g {
            let mut map: BTreeMap<Expr, Expr> = BTreeMap::new();
            for q in &multiples {
                let k = (q / g).to_integer().to_i64().ok_or_else(|| {
                    Error::InvalidProblem("exponent ratio overflows".to_string())
                })?;
                map.insert(
                    expr::exp_of(expr::mul(vec![
                        expr::num(Radical::from_rational(q.clone())),
                        expr::sym(alpha),
                    ])),
                    expr::pow(expr::sym(x_name), k),
                );
            }
            mapped = mapped.substitute(&map);
        }
        conditions.push(mapped.as_ratio().0.expand());
    }
    let unknowns: Vec<String> = branch
        .free
        .iter()
        .filter(|f| f.as_str() != alpha)
        .cloned()
        .collect();
    let mut system = PolySystem::new(conditions, unknowns);
    system.parameters = vec![alpha.to_string(), x_name.to_string()];
    system.nonzero = vec![expr::sym(alpha), expr::sym(x_name)];
    let outcome = solve_system(&system)?;
    *complex_discarded += outcome.complex_discarded;
    let x_back = g.map(|g| {
        expr::exp_of(expr::mul(vec![
            expr::num(Radical::from_rational(g)),
            expr::sym(alpha),
        ]))
    });
    // sub-solver notes speak of the abstract atom; restore e^{gα} in them
    for note in &outcome.notes {
        notes.push(match &x_back {
            Some(xb) => replace_symbol_token(note, x_name, &xb.to_string()),
            None => note.clone(),
        });
    }
    Ok(outcome
        .assignments
        .iter()
        .map(|sub| merge_assignments(branch, sub, x_name, x_back.as_ref()))
        .collect())
}

/// Replaces standalone occurrences of a symbol name in rendered text,
/// leaving identifiers that merely contain it untouched.
fn replace_symbol_token(text: &str, name: &str, with: &str) -> String {
    let is_word = |c: char| c.is_ascii_alphanumeric() || c == '_';
    let mut out = String::new();
    let mut i = 0;
    while i < text.len() {
        if text[i..].starts_with(name) {
            let before = text[..i].chars().next_back();
            let after = text[i + name.len()..].chars().next();
            if !before.map(is_word).unwrap_or(false) && !after.map(is_word).unwrap_or(false) {
                out.push_str(with);
                i += name.len();
                continue;
            }
        }
        let c = text[i..].chars().next().unwrap();
        out.push(c);
        i += c.len_utf8();
    }
    out
}

fn rational_gcd_of(qs: &BTreeSet<BigRational>) -> Option<BigRational> {
    use num::BigInt;
    let mut num_gcd = BigInt::from(0);
    let mut den_lcm = BigInt::from(1);
    for q in qs {
        if q.is_zero() {
            continue;
        }
        num_gcd = num::integer::gcd(num_gcd, q.numer().abs());
        den_lcm = num::integer::lcm(den_lcm, q.denom().clone());
    }
    if num_gcd == BigInt::from(0) {
        None
    } else {
        Some(BigRational::new(num_gcd, den_lcm))
    }
}

/// Folds a boundary-condition sub-solution into its parent branch,
/// substituting solved values (and the exponential atom) everywhere.
fn merge_assignments(
    base: &Assignment,
    sub: &Assignment,
    x_name: &str,
    x_back: Option<&Expr>,
) -> Assignment {
    let back = |mut e: Expr| -> Expr {
        for (k, v) in &sub.values {
            e = e.substitute_symbol(k, v);
        }
        if let Some(xb) = x_back {
            e = e.substitute_symbol(x_name, xb);
        }
        e
    };
    let mut values: BTreeMap<String, Expr> = BTreeMap::new();
    for (k, v) in &base.values {
        values.insert(k.clone(), back(v.clone()));
    }
    for (k, v) in &sub.values {
        let mut v = v.clone();
        if let Some(xb) = x_back {
            v = v.substitute_symbol(x_name, xb);
        }
        values.insert(k.clone(), v);
    }
    let mut free: BTreeSet<String> = base.free.clone();
    for k in sub.values.keys() {
        free.remove(k);
    }
    let mut assumptions = base.assumptions.clone();
    for a in &sub.assumptions {
        let mut a = a.clone();
        if let Some(xb) = x_back {
            a = a.substitute_symbol(x_name, xb);
        }
        assumptions.push(a);
    }
    Assignment {
        values,
        free,
        assumptions,
    }
}

/// Runs the expansion end to end on an equation in prime notation:
/// collects and solves the coefficient system, applies boundary conditions
/// when given, verifies every branch numerically, and reports the survivors.
pub fn run_expfn(
    lhs: &Expr,
    dependent: &str,
    extra_unknowns: &[String],
    ansatz: &AnsatzExp,
    bcs: &[BoundaryCondition],
    grid: &Grid,
) -> Result<MethodOutcome> {
    let alpha = "alpha";
    let equations = exp_collect(lhs, dependent, ansatz, alpha)?;
    let mut unknowns = ansatz.numerator_names();
    unknowns.extend(ansatz.denominator_names());
    unknowns.extend(extra_unknowns.iter().cloned());
    unknowns.push(alpha.to_string());
    let mut system = PolySystem::new(equations, unknowns);
    system.nonzero = vec![expr::sym(alpha)];
    system.not_all_zero = vec![ansatz.numerator_names()];
    let outcome = solve_system(&system)?;
    let mut notes = outcome.notes.clone();
    let mut complex_discarded = outcome.complex_discarded;
    let mut branches: Vec<SolutionBranch> = vec![];
    for assignment in &outcome.assignments {
        let profile0 = close_profile(&ansatz.u_expr(alpha), assignment);
        let finals = if bcs.is_empty() {
            vec![assignment.clone()]
        } else {
            apply_boundary_conditions(
                assignment,
                &profile0,
                bcs,
                alpha,
                &mut notes,
                &mut complex_discarded,
            )?
        };
        for merged in finals {
            let merged = tidy_exponentials(merged, alpha);
            if let Some(b) = finish_branch(lhs, dependent, ansatz, &merged, bcs, grid, &mut notes)? {
                branches.push(b);
            }
        }
    }
    if branches.is_empty() {
        return Err(Error::NoExactSolution);
    }
    Ok(MethodOutcome {
        method: "expfn",
        branches,
        complex_discarded,
        notes,
    })
}

/// Rewrites assignment values that contain exponentials of α into compact
/// ratio form: shared α-content cancelled, denominators refactored.
fn tidy_exponentials(assignment: Assignment, alpha: &str) -> Assignment {
    let Assignment {
        values,
        free,
        assumptions,
    } = assignment;
    let one = Radical::one();
    let values = values
        .into_iter()
        .map(|(name, value)| {
            let mut has_exp = false;
            value.walk(&mut |n| {
                if matches!(n, Expr::Exp(_)) {
                    has_exp = true;
                }
            });
            let tidied = if has_exp {
                simplify_exp_ratio(&value, alpha, &one, true, None).unwrap_or(value)
            } else {
                value
            };
            (name, tidied)
        })
        .collect();
    Assignment {
        values,
        free,
        assumptions,
    }
}

/// The ansatz with every solved value substituted; free symbols stay.
fn close_profile(u: &Expr, assignment: &Assignment) -> Expr {
    let mut out = u.clone();
    for (name, value) in &assignment.values {
        out = out.substitute_symbol(name, value);
    }
    out
}

fn finish_branch(
    lhs: &Expr,
    dependent: &str,
    ansatz: &AnsatzExp,
    assignment: &Assignment,
    bcs: &[BoundaryCondition],
    grid: &Grid,
    notes: &mut Vec<String>,
) -> Result<Option<SolutionBranch>> {
    let alpha = "alpha";
    let profile = close_profile(&ansatz.u_expr(alpha), assignment);
    // compact the display form when the exponential rate is fully numeric
    let display = match assignment.value_of(alpha).and_then(|v| v.as_num()) {
        Some(rate) if !rate.is_zero() => {
            let closed = profile.clone();
            simplify_exponential_ratio(&closed, rate, None).unwrap_or(closed)
        }
        _ => profile.clone(),
    };
    let constants: Vec<String> = display
        .free_symbols()
        .into_iter()
        .filter(|s| s != WAVE_VAR)
        .collect();
    // close the equation itself with the branch values (speed, parameters)
    let mut lhs_closed = lhs.clone();
    for (name, value) in &assignment.values {
        lhs_closed = lhs_closed.substitute_symbol(name, value);
    }
    let bound = bind_prime_profile(&lhs_closed, dependent, &profile);
    let mut bindings: BTreeMap<String, f64> = BTreeMap::new();
    for s in bound.free_symbols() {
        if s != WAVE_VAR {
            bindings.insert(s, 1.0);
        }
    }
    for s in profile.free_symbols() {
        if s != WAVE_VAR {
            bindings.entry(s).or_insert(1.0);
        }
    }
    let report = residual_report(&bound, grid, &bindings, &ResidualOptions::default())?;
    if !report.pass {
        notes.push(format!(
            "branch rejected: residual {:.3e} on [{:.2}, {:.2}]",
            report.max_residual, report.grid.from, report.grid.to
        ));
        return Ok(None);
    }
    // boundary conditions must hold numerically at the same bindings
    for bc in bcs {
        let mut e = profile.clone();
        for _ in 0..bc.order {
            e = e.differentiate(WAVE_VAR);
        }
        let mut b = bindings.clone();
        b.insert(
            WAVE_VAR.to_string(),
            bc.location.to_f64().expect("rational location"),
        );
        let got = match e.eval_guarded(&b, 1e-12) {
            Ok(v) => v,
            Err(_) => {
                notes.push("branch rejected: boundary value not evaluable".to_string());
                return Ok(None);
            }
        };
        let want = bc.target.to_f64().expect("rational target");
        if (got - want).abs() > 1e-9 {
            notes.push(format!(
                "branch rejected: boundary value {:.6} differs from {:.6}",
                got, want
            ));
            return Ok(None);
        }
    }
    let solution = ClosedFormSolution {
        case: CaseTag::Exponential,
        u: display,
        constants,
        branch: assignment.clone(),
    };
    Ok(Some(SolutionBranch {
        method: "expfn",
        assignment: assignment.clone(),
        solution,
        limit_solutions: vec![],
        residual: report,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_any;
    use crate::reduce::{reduce_to_ode, EvolutionPDE};
    use crate::verify::equivalence_check;

    fn bratu_lhs() -> Expr {
        // n = 2 transformation target: 2v′² − 2vv″ + λ
        parse_any("2*v'^2 - 2*v*v'' + lambda").unwrap()
    }

    fn bratu_bcs() -> Vec<BoundaryCondition> {
        vec![
            BoundaryCondition {
                order: 1,
                location: BigRational::from_integer(0.into()),
                target: BigRational::from_integer(0.into()),
            },
            BoundaryCondition {
                order: 0,
                location: BigRational::from_integer(1.into()),
                target: BigRational::from_integer(1.into()),
            },
        ]
    }

    #[test]
    fn ansatz_names_and_pinning() {
        let a = AnsatzExp::from_ranges(1, 1, 1, 1);
        assert_eq!(a.numerator_names(), vec!["a_m1", "a0", "a1"]);
        assert_eq!(a.denominator_names(), vec!["b0", "b1"]);
        assert_eq!(a.pinned(), "b_m1");
        let b = AnsatzExp::from_ranges(1, 1, 0, 0);
        assert_eq!(b.denominator_names(), Vec::<String>::new());
        assert_eq!(b.pinned(), "b0");
    }

    #[test]
    fn polynomial_ansatz_collects_the_three_expected_equations() {
        // windows (1,1,0,0) make the denominator ≡ 1
        let ansatz = AnsatzExp::from_ranges(1, 1, 0, 0);
        let eqs = exp_collect(&bratu_lhs(), "v", &ansatz, "alpha").unwrap();
        assert_eq!(eqs.len(), 3);
        let expected = [
            "-2*alpha^2*a0*a_m1",
            "lambda - 8*alpha^2*a_m1*a1",
            "-2*alpha^2*a0*a1",
        ];
        for (eq, want) in eqs.iter().zip(expected) {
            let w = parse_any(want).unwrap();
            assert!(
                expr::sub(eq.clone(), w).vanishes(),
                "got {} want {}",
                eq,
                want
            );
        }
    }

    #[test]
    fn boundary_value_problem_yields_the_bifurcation_family() {
        let outcome = run_expfn(
            &bratu_lhs(),
            "v",
            &["lambda".to_string()],
            &AnsatzExp::from_ranges(1, 1, 0, 0),
            &bratu_bcs(),
            &Grid::new(0.0, 1.0, 101),
        )
        .unwrap();
        // the coupled branch carries λ(α); the uncoupled one is v ≡ 1, λ = 0
        let main = outcome
            .branches
            .iter()
            .find(|b| {
                b.assignment
                    .value_of("lambda")
                    .map(|v| !v.is_num_zero())
                    .unwrap_or(false)
            })
            .expect("coupled branch");
        assert_eq!(main.assignment.value_of("a0"), Some(&expr::int(0)));
        let lam = main.assignment.value_of("lambda").unwrap();
        let lam_expected =
            parse_any("8*alpha^2*exp(2*alpha)*(1 + exp(2*alpha))^-2").unwrap();
        assert!(
            expr::sub(lam.clone(), lam_expected).vanishes(),
            "lambda = {}",
            lam
        );
        let a1 = main.assignment.value_of("a1").unwrap();
        let a1_expected = parse_any("exp(alpha)*(1 + exp(2*alpha))^-1").unwrap();
        assert!(
            expr::sub(a1.clone(), a1_expected).vanishes(),
            "a1 = {}",
            a1
        );
        // symmetric profile: the two outer coefficients agree
        let am1 = main.assignment.value_of("a_m1").unwrap();
        assert!(expr::sub(am1.clone(), a1.clone()).vanishes());
        assert!(main.residual.pass);
        assert!(main.assignment.free.contains("alpha"));
        // solved values display in compact ratio form
        assert_eq!(
            lam.to_string(),
            "8*alpha^2*(1 + exp(2*alpha))^-2*exp(2*alpha)"
        );
        assert_eq!(a1.to_string(), "(1 + exp(2*alpha))^-1*exp(alpha)");
        // diagnostics never leak the internal exponential atom
        for note in &outcome.notes {
            let leaks = note
                .split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                .any(|tok| tok == "X");
            assert!(!leaks, "note leaks atom: {}", note);
        }
        // the trivial member survives honestly
        let trivial = outcome
            .branches
            .iter()
            .find(|b| b.assignment.value_of("lambda") == Some(&expr::int(0)))
            .expect("uncoupled branch");
        assert_eq!(trivial.assignment.value_of("a0"), Some(&expr::int(1)));
    }

    #[test]
    fn fisher_wave_matches_the_logarithmic_derivative_profile() {
        let pde = EvolutionPDE::new(
            parse_any("u_t - u_xx - u + u^2").unwrap(),
            "u",
            "x",
            "t",
        )
        .unwrap();
        let ode = reduce_to_ode(&pde, 1).unwrap();
        let outcome = run_expfn(
            &ode.lhs,
            "u",
            &[ode.speed.clone()],
            &AnsatzExp::from_ranges(1, 1, 1, 1),
            &[],
            &Grid::default_wave(),
        )
        .unwrap();
        let speed = parse_any("5/6*sqrt(6)").unwrap();
        let reference = parse_any("(1 + C*exp(1/6*sqrt(6)*xi))^-2").unwrap();
        let mut matched = false;
        for b in &outcome.branches {
            if b.assignment.value_of("c") != Some(&speed) {
                continue;
            }
            if !b.solution.u.contains_symbol(WAVE_VAR) {
                continue;
            }
            if b.solution.constants.len() != 1 {
                continue;
            }
            let rep = equivalence_check(
                &b.solution.u,
                &reference,
                &BTreeMap::new(),
                Some("C"),
                &Grid::default_wave(),
                &{
                    let mut m = BTreeMap::new();
                    m.insert(b.solution.constants[0].clone(), 1.0);
                    m
                },
                1e-9,
            );
            if rep.pass {
                matched = true;
                break;
            }
        }
        assert!(
            matched,
            "no branch matched; branches: {:#?}",
            outcome
                .branches
                .iter()
                .map(|b| format!(
                    "c={:?} u={} free={:?}",
                    b.assignment.value_of("c").map(|v| v.to_string()),
                    b.solution.u,
                    b.solution.constants
                ))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn zero_numerator_family_is_not_reported() {
        let pde = EvolutionPDE::new(
            parse_any("u_t - u_xx - u + u^2").unwrap(),
            "u",
            "x",
            "t",
        )
        .unwrap();
        let ode = reduce_to_ode(&pde, 1).unwrap();
        let outcome = run_expfn(
            &ode.lhs,
            "u",
            &[ode.speed.clone()],
            &AnsatzExp::from_ranges(1, 1, 1, 1),
            &[],
            &Grid::default_wave(),
        )
        .unwrap();
        for b in &outcome.branches {
            let all_zero = ["a_m1", "a0", "a1"].iter().all(|n| {
                b.assignment.value_of(n).map(|v| v.is_num_zero()).unwrap_or(false)
            });
            assert!(!all_zero, "trivial zero family reported");
        }
    }
}
