//! Assembles explicit solution profiles u(ξ) from solved coefficient
//! branches: the three fundamental branches of F″ + γF = 0, the exponential
//! rewrite for γ < 0, and the simplification of the resulting rational
//! expression in e^{αξ} to its compact quotient form.

use crate::error::{Error, Result};
use crate::expr::{self, Expr, WAVE_VAR};
use crate::radical::Radical;
use crate::solve::Assignment;
use num::{BigRational, Signed};
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Trig,
    Hyperbolic,
    Linear,
    Exponential,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Trig => "trig",
            CaseTag::Hyperbolic => "hyperbolic",
            CaseTag::Linear => "linear",
            CaseTag::Exponential => "exponential",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClosedFormSolution {
    pub case: CaseTag,
    /// Profile in ξ and the free constants.
    pub u: Expr,
    /// Names of free constants appearing in `u`.
    pub constants: Vec<String>,
    /// The coefficient branch this profile came from.
    pub branch: Assignment,
}

fn xi() -> Expr {
    expr::sym(WAVE_VAR)
}

/// The fundamental solution of F″ + γF = 0 for the sign of γ.
pub fn assemble_f(gamma: &Radical, c1: &Expr, c2: &Expr) -> Result<ClosedFormSolution> {
    let (case, f) = match gamma.sign() {
        Ordering::Greater => {
            let beta = sqrt_radical(gamma)?;
            let arg = expr::mul(vec![expr::num(beta), xi()]);
            (
                CaseTag::Trig,
                expr::add(vec![
                    expr::mul(vec![c1.clone(), expr::cos_of(arg.clone())]),
                    expr::mul(vec![c2.clone(), expr::sin_of(arg)]),
                ]),
            )
        }
        Ordering::Less => {
            let alpha = sqrt_radical(&gamma.neg())?;
            let arg = expr::mul(vec![expr::num(alpha), xi()]);
            (
                CaseTag::Hyperbolic,
                expr::add(vec![
                    expr::mul(vec![c1.clone(), expr::cosh_of(arg.clone())]),
                    expr::mul(vec![c2.clone(), expr::sinh_of(arg)]),
                ]),
            )
        }
        Ordering::Equal => (
            CaseTag::Linear,
            expr::add(vec![c1.clone(), expr::mul(vec![c2.clone(), xi()])]),
        ),
    };
    Ok(ClosedFormSolution {
        case,
        u: f,
        constants: constants_in(&f_constants(c1, c2)),
        branch: Assignment {
            values: BTreeMap::new(),
            free: Default::default(),
            assumptions: vec![],
        },
    })
}

fn f_constants(c1: &Expr, c2: &Expr) -> Vec<Expr> {
    vec![c1.clone(), c2.clone()]
}

fn constants_in(es: &[Expr]) -> Vec<String> {
    let mut out = vec![];
    for e in es {
        for s in e.free_symbols() {
            if s != WAVE_VAR && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Rewrites the γ < 0 branch as c₁e^{αξ} + c₂e^{−αξ} with α = √−γ.
pub fn to_exponential_form(gamma: &Radical, c1: &Expr, c2: &Expr) -> Result<Expr> {
    if gamma.sign() != Ordering::Less {
        return Err(Error::InvalidProblem(
            "exponential form requires negative gamma".to_string(),
        ));
    }
    let alpha = sqrt_radical(&gamma.neg())?;
    let arg = expr::mul(vec![expr::num(alpha), xi()]);
    Ok(expr::add(vec![
        expr::mul(vec![c1.clone(), expr::exp_of(arg.clone())]),
        expr::mul(vec![c2.clone(), expr::exp_of(expr::neg(arg))]),
    ]))
}

/// Constant remapping from the hyperbolic to the exponential basis:
/// c₁cosh + c₂sinh = ((c₁+c₂)/2)e^{αξ} + ((c₁−c₂)/2)e^{−αξ}.
pub fn exponential_constants(c1: &Expr, c2: &Expr) -> (Expr, Expr) {
    let half = expr::ratio(1, 2);
    (
        expr::mul(vec![half.clone(), expr::add(vec![c1.clone(), c2.clone()])]),
        expr::mul(vec![half, expr::sub(c1.clone(), c2.clone())]),
    )
}

fn sqrt_radical(r: &Radical) -> Result<Radical> {
    r.sqrt().ok_or_else(|| {
        Error::NotRepresentable(format!("square root of {} is not expressible", r))
    })
}

/// Builds the solution profile(s) for an expansion branch.
///
/// `u_of_w` is the ansatz polynomial with all coefficients already bound;
/// `w_sign` records the orientation of the expansion variable relative to
/// the logarithmic derivative (w = w_sign · F′/F). The free constant of the
/// family is the ratio C = c₂/c₁; the degenerate c₁ = 0 profile is returned
/// separately as the C → ∞ limit.
pub fn build_u(
    u_of_w: &Expr,
    w: &str,
    gamma: &Radical,
    w_sign: i64,
    branch: &Assignment,
) -> Result<Vec<ClosedFormSolution>> {
    let c_sym = expr::sym("C");
    let mut out = vec![];
    match gamma.sign() {
        Ordering::Less => {
            let alpha = sqrt_radical(&gamma.neg())?;
            // F = e^{αξ} + C e^{−αξ}
            let f = to_exponential_form(gamma, &expr::int(1), &c_sym)?;
            let w_expr = oriented_log_derivative(&f, w_sign);
            let raw = u_of_w.substitute_symbol(w, &w_expr);
            let simplified =
                simplify_exponential_ratio(&raw, &alpha, Some("C")).unwrap_or(raw);
            out.push(ClosedFormSolution {
                case: CaseTag::Exponential,
                constants: constants_of(&simplified),
                u: simplified,
                branch: branch.clone(),
            });
            // C → ∞: F = C e^{−αξ}, so w = w_sign·(−α)
            let w_limit = expr::num(if w_sign < 0 { alpha } else { alpha.neg() });
            let u_limit = u_of_w.substitute_symbol(w, &w_limit);
            out.push(ClosedFormSolution {
                case: CaseTag::Exponential,
                constants: constants_of(&u_limit),
                u: u_limit,
                branch: branch.clone(),
            });
        }
        Ordering::Greater => {
            let beta = sqrt_radical(gamma)?;
            let arg = expr::mul(vec![expr::num(beta), xi()]);
            let f = expr::add(vec![
                expr::cos_of(arg.clone()),
                expr::mul(vec![c_sym.clone(), expr::sin_of(arg.clone())]),
            ]);
            let w_expr = oriented_log_derivative(&f, w_sign);
            let u = joined_ratio(&u_of_w.substitute_symbol(w, &w_expr));
            out.push(ClosedFormSolution {
                case: CaseTag::Trig,
                constants: constants_of(&u),
                u,
                branch: branch.clone(),
            });
            // C → ∞: F = sin(βξ)
            let f_lim = expr::sin_of(arg);
            let w_lim = oriented_log_derivative(&f_lim, w_sign);
            let u_lim = joined_ratio(&u_of_w.substitute_symbol(w, &w_lim));
            out.push(ClosedFormSolution {
                case: CaseTag::Trig,
                constants: constants_of(&u_lim),
                u: u_lim,
                branch: branch.clone(),
            });
        }
        Ordering::Equal => {
            let f = expr::add(vec![expr::int(1), expr::mul(vec![c_sym.clone(), xi()])]);
            let w_expr = oriented_log_derivative(&f, w_sign);
            let u = joined_ratio(&u_of_w.substitute_symbol(w, &w_expr));
            out.push(ClosedFormSolution {
                case: CaseTag::Linear,
                constants: constants_of(&u),
                u,
                branch: branch.clone(),
            });
            let w_lim = oriented_log_derivative(&xi(), w_sign);
            let u_lim = joined_ratio(&u_of_w.substitute_symbol(w, &w_lim));
            out.push(ClosedFormSolution {
                case: CaseTag::Linear,
                constants: constants_of(&u_lim),
                u: u_lim,
                branch: branch.clone(),
            });
        }
    }
    Ok(out)
}

fn oriented_log_derivative(f: &Expr, w_sign: i64) -> Expr {
    let ld = expr::mul(vec![f.differentiate(WAVE_VAR), expr::pow(f.clone(), -1)]);
    if w_sign < 0 {
        expr::neg(ld)
    } else {
        ld
    }
}

fn constants_of(u: &Expr) -> Vec<String> {
    u.free_symbols()
        .into_iter()
        .filter(|s| s != WAVE_VAR)
        .collect()
}

/// Combines a sum of ratios into a single quotient without further
/// restructuring (used for the trig and linear cases).
fn joined_ratio(u: &Expr) -> Expr {
    let (n, d) = u.as_ratio();
    if d.is_num_one() {
        return n.expand();
    }
    expr::mul(vec![n.expand(), expr::pow(d.expand(), -1)])
}

// ---- rational-exponential simplification ----

/// A Laurent polynomial in T = e^{g·rate·var}: exponent → coefficient.
type TPoly = BTreeMap<i64, Expr>;

/// Attempts to rewrite a ratio of exponential sums over the single rate α
/// into the compact form N(T)/D(T), T = e^{gαξ}, with the denominator
/// refactored as a perfect power and — when `reparametrize` names a free
/// constant — that constant re-parametrized to whichever of C, 1/C gives
/// the simpler numerator.
pub(crate) fn simplify_exponential_ratio(
    u: &Expr,
    alpha: &Radical,
    reparametrize: Option<&str>,
) -> Option<Expr> {
    simplify_exp_ratio(u, WAVE_VAR, alpha, false, reparametrize)
}

/// The same rewrite over exponentials e^{q·rate·var} in an arbitrary
/// variable. `poly_in_var` admits the variable itself inside the
/// coefficients, for ratios whose exponential atoms grow over a parameter
/// (powers of e^α with α-polynomial coefficients); the shared monomial
/// content of such coefficients cancels from the ratio.
pub(crate) fn simplify_exp_ratio(
    u: &Expr,
    var: &str,
    rate: &Radical,
    poly_in_var: bool,
    reparametrize: Option<&str>,
) -> Option<Expr> {
    let (n_raw, d_raw) = u.as_ratio();
    let n_terms = exp_poly_terms(&n_raw.expand(), var, rate, poly_in_var)?;
    let d_terms = exp_poly_terms(&d_raw.expand(), var, rate, poly_in_var)?;
    // common rational rate g
    let mut rates: Vec<BigRational> = vec![];
    for (q, _) in n_terms.iter().chain(d_terms.iter()) {
        if *q != BigRational::from_integer(0.into()) {
            rates.push(q.clone());
        }
    }
    let g = rational_gcd(&rates)?;
    let to_int = |q: &BigRational| -> Option<i64> {
        let k = q / &g;
        if k.is_integer() {
            use num::ToPrimitive;
            k.to_integer().to_i64()
        } else {
            None
        }
    };
    let mut n_poly: TPoly = BTreeMap::new();
    for (q, c) in &n_terms {
        let k = if q == &BigRational::from_integer(0.into()) { 0 } else { to_int(q)? };
        let entry = n_poly.entry(k).or_insert_with(|| expr::int(0));
        *entry = expr::add(vec![entry.clone(), c.clone()]);
    }
    let mut d_poly: TPoly = BTreeMap::new();
    for (q, c) in &d_terms {
        let k = if q == &BigRational::from_integer(0.into()) { 0 } else { to_int(q)? };
        let entry = d_poly.entry(k).or_insert_with(|| expr::int(0));
        *entry = expr::add(vec![entry.clone(), c.clone()]);
    }
    drop_zero(&mut n_poly);
    drop_zero(&mut d_poly);
    if n_poly.is_empty() || d_poly.is_empty() {
        return None;
    }
    // shift jointly so the smaller of the two minimal exponents becomes 0
    let min_k = (*n_poly.keys().next().unwrap()).min(*d_poly.keys().next().unwrap());
    let n_poly: TPoly = n_poly.into_iter().map(|(k, c)| (k - min_k, c)).collect();
    let d_poly: TPoly = d_poly.into_iter().map(|(k, c)| (k - min_k, c)).collect();
    let (n_poly, d_poly) = cancel_monomial_content(n_poly, d_poly);

    let g_rate = Radical::from_rational(g).mul(rate);
    let mut candidates = vec![(n_poly.clone(), d_poly.clone())];
    if let Some(constant) = reparametrize {
        candidates.push(invert_constant(&n_poly, &d_poly, constant));
    }
    let mut best: Option<(usize, usize, Expr)> = None;
    for (np, dp) in candidates {
        let (np, dp) = normalize_trailing(np, dp);
        let u_expr = rebuild_ratio(&np, &dp, &g_rate, var);
        let terms = poly_terms(&np) + poly_terms(&dp);
        let len = u_expr.to_string().len();
        if best
            .as_ref()
            .map(|(t, l, _)| (terms, len) < (*t, *l))
            .unwrap_or(true)
        {
            best = Some((terms, len, u_expr));
        }
    }
    best.map(|(_, _, e)| e)
}

fn drop_zero(p: &mut TPoly) {
    p.retain(|_, c| !c.is_num_zero());
}

fn poly_terms(p: &TPoly) -> usize {
    p.values()
        .map(|c| match c {
            Expr::Sum(ts) => ts.len(),
            _ => 1,
        })
        .sum()
}

/// Splits each term of an expanded sum into (rational multiple of rate·var
/// in the exponential factor, residual coefficient).
fn exp_poly_terms(
    e: &Expr,
    var: &str,
    rate: &Radical,
    poly_in_var: bool,
) -> Option<Vec<(BigRational, Expr)>> {
    let terms: Vec<Expr> = match e {
        Expr::Sum(ts) => ts.clone(),
        other => vec![other.clone()],
    };
    let mut out = vec![];
    for t in terms {
        let factors: Vec<Expr> = match t {
            Expr::Prod(fs) => fs,
            other => vec![other],
        };
        let mut q = BigRational::from_integer(0.into());
        let mut coeff: Vec<Expr> = vec![];
        for f in factors {
            if let Expr::Exp(arg) = &f {
                let (r, core) = arg.coeff_core();
                if core == Some(expr::sym(var)) {
                    // r = q·rate must be a rational multiple of the rate
                    let ratio = r.mul(&rate.inv()?);
                    match ratio.as_rational() {
                        Some(rq) => {
                            q = rq.clone();
                            continue;
                        }
                        None => return None,
                    }
                }
                return None;
            }
            if !poly_in_var && f.contains_symbol(var) {
                return None;
            }
            coeff.push(f);
        }
        out.push((q, expr::mul(coeff)));
    }
    Some(out)
}

/// Removes the common monomial factor — the per-symbol minimum power across
/// every term of both polynomials — so that shared parameter content such as
/// the α² in α²·(1 + T)² cancels from the ratio. Does nothing unless every
/// coefficient term is a pure monomial.
fn cancel_monomial_content(n: TPoly, d: TPoly) -> (TPoly, TPoly) {
    let mut mins: BTreeMap<String, i64> = BTreeMap::new();
    let mut first = true;
    for coeff in n.values().chain(d.values()) {
        let terms: Vec<&Expr> = match coeff {
            Expr::Sum(ts) => ts.iter().collect(),
            other => vec![other],
        };
        for t in terms {
            let powers = match monomial_powers(t) {
                Some(p) => p,
                None => return (n, d),
            };
            if first {
                mins = powers;
                first = false;
            } else {
                for (s, m) in mins.iter_mut() {
                    *m = (*m).min(powers.get(s).copied().unwrap_or(0));
                }
                for (s, m) in powers {
                    mins.entry(s).or_insert_with(|| m.min(0));
                }
            }
        }
    }
    mins.retain(|_, m| *m != 0);
    if mins.is_empty() {
        return (n, d);
    }
    let factor = expr::mul(
        mins.iter()
            .map(|(s, m)| expr::pow(expr::sym(s), -m))
            .collect(),
    );
    let divide = |p: TPoly| -> TPoly {
        p.into_iter()
            .map(|(k, c)| (k, expr::mul(vec![c, factor.clone()]).expand()))
            .collect()
    };
    (divide(n), divide(d))
}

/// The power of each symbol in a pure monomial term (numeric factors are
/// ignored); None when the term has any other structure.
fn monomial_powers(t: &Expr) -> Option<BTreeMap<String, i64>> {
    let mut out = BTreeMap::new();
    let factors: Vec<&Expr> = match t {
        Expr::Prod(fs) => fs.iter().collect(),
        other => vec![other],
    };
    for f in factors {
        match f {
            Expr::Num(_) => {}
            Expr::Sym(s) => *out.entry(s.clone()).or_insert(0) += 1,
            Expr::Pow(b, k) => match b.as_ref() {
                Expr::Sym(s) => *out.entry(s.clone()).or_insert(0) += *k,
                _ => return None,
            },
            _ => return None,
        }
    }
    Some(out)
}

fn rational_gcd(qs: &[BigRational]) -> Option<BigRational> {
    use num::BigInt;
    if qs.is_empty() {
        return None;
    }
    let mut num_gcd = BigInt::from(0);
    let mut den_lcm = BigInt::from(1);
    for q in qs {
        num_gcd = num::integer::gcd(num_gcd, q.numer().abs());
        den_lcm = num::integer::lcm(den_lcm, q.denom().clone());
    }
    if num_gcd == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(num_gcd, den_lcm))
}

/// The C ↦ 1/C reparametrization: substitute and clear C-denominators from
/// both polynomials by the same power of C.
fn invert_constant(n: &TPoly, d: &TPoly, constant: &str) -> (TPoly, TPoly) {
    let c = expr::sym(constant);
    let inv = expr::pow(expr::sym(constant), -1);
    let mut max_deg = 0i64;
    for coeff in n.values().chain(d.values()) {
        if let Ok(p) = crate::poly::normalize_poly(coeff, &[constant]) {
            max_deg = max_deg.max(p.degree_in(constant).unwrap_or(0));
        }
    }
    let scale = expr::pow(c, max_deg);
    let transform = |p: &TPoly| -> TPoly {
        p.iter()
            .map(|(k, coeff)| {
                let swapped = coeff.substitute_symbol(constant, &inv);
                let cleared = expr::mul(vec![swapped, scale.clone()]).expand();
                (*k, cleared)
            })
            .collect()
    };
    (transform(n), transform(d))
}

/// Divides both polynomials by the trailing coefficient of the denominator
/// when that coefficient is numeric, so that D(0) = 1.
fn normalize_trailing(n: TPoly, d: TPoly) -> (TPoly, TPoly) {
    let t0 = match d.values().next() {
        Some(c) => c.clone(),
        None => return (n, d),
    };
    if let Some(r) = t0.as_num() {
        if !r.is_zero() && !r.is_one() {
            let inv = expr::num(r.inv().unwrap());
            let scale = |p: TPoly| -> TPoly {
                p.into_iter()
                    .map(|(k, c)| (k, expr::mul(vec![c, inv.clone()]).expand()))
                    .collect()
            };
            return (scale(n), scale(d));
        }
    }
    (n, d)
}

fn rebuild_poly(p: &TPoly, rate: &Radical, var: &str) -> Expr {
    let mut terms = vec![];
    for (k, c) in p {
        if *k == 0 {
            terms.push(c.clone());
        } else {
            let arg = expr::mul(vec![
                expr::num(Radical::from_integer(*k).mul(rate)),
                expr::sym(var),
            ]);
            terms.push(expr::mul(vec![c.clone(), expr::exp_of(arg)]));
        }
    }
    expr::add(terms)
}

fn rebuild_ratio(n: &TPoly, d: &TPoly, rate: &Radical, var: &str) -> Expr {
    let n_expr = rebuild_poly(n, rate, var);
    let d_expr =
        refactor_perfect_square(d, rate, var).unwrap_or_else(|| rebuild_poly(d, rate, var));
    if d_expr.is_num_one() {
        return n_expr;
    }
    expr::mul(vec![n_expr, expr::pow(d_expr, -1)])
}

/// Rewrites a degree-2 denominator {0: 1, k: A1, 2k: A2} as (1 + q·T^k)²
/// when A1² = 4A2 holds identically (with q = A1/2).
fn refactor_perfect_square(d: &TPoly, rate: &Radical, var: &str) -> Option<Expr> {
    if d.len() != 3 {
        return None;
    }
    let keys: Vec<i64> = d.keys().copied().collect();
    let (k0, k1, k2) = (keys[0], keys[1], keys[2]);
    if k0 != 0 || k2 != 2 * k1 {
        return None;
    }
    if !d[&k0].is_num_one() {
        return None;
    }
    let a1 = &d[&k1];
    let a2 = &d[&k2];
    let check = expr::sub(
        expr::mul(vec![a1.clone(), a1.clone()]),
        expr::mul(vec![expr::int(4), a2.clone()]),
    );
    if !check.vanishes() {
        return None;
    }
    let q = expr::mul(vec![expr::ratio(1, 2), a1.clone()]);
    let arg = expr::mul(vec![
        expr::num(Radical::from_integer(k1).mul(rate)),
        expr::sym(var),
    ]);
    Some(expr::pow(
        expr::add(vec![expr::int(1), expr::mul(vec![q, expr::exp_of(arg)])]),
        2,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_any;
    use std::collections::BTreeMap as Map;

    fn empty_branch() -> Assignment {
        Assignment {
            values: BTreeMap::new(),
            free: Default::default(),
            assumptions: vec![],
        }
    }

    #[test]
    fn fundamental_branches_solve_the_oscillator() {
        // F″ + γF must vanish numerically for each sign of γ
        for (gamma, _tag) in [
            (Radical::from_integer(1), CaseTag::Trig),
            (Radical::from_ratio(-1, 24), CaseTag::Hyperbolic),
            (Radical::zero(), CaseTag::Linear),
        ] {
            let f = assemble_f(&gamma, &expr::sym("c1"), &expr::sym("c2")).unwrap();
            let fpp = f.u.differentiate(WAVE_VAR).differentiate(WAVE_VAR);
            let res = expr::add(vec![fpp, expr::mul(vec![expr::num(gamma.clone()), f.u.clone()])]);
            for xi_v in [-2.0, -0.3, 0.0, 0.7, 1.9] {
                let mut b: Map<String, f64> = Map::new();
                b.insert("xi".into(), xi_v);
                b.insert("c1".into(), 1.3);
                b.insert("c2".into(), -0.8);
                assert!(res.eval(&b).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn case_tags_follow_gamma_sign() {
        let t = assemble_f(&Radical::from_integer(1), &expr::int(1), &expr::int(1)).unwrap();
        assert_eq!(t.case, CaseTag::Trig);
        let h = assemble_f(&Radical::from_integer(-1), &expr::int(1), &expr::int(1)).unwrap();
        assert_eq!(h.case, CaseTag::Hyperbolic);
        let l = assemble_f(&Radical::zero(), &expr::int(1), &expr::int(1)).unwrap();
        assert_eq!(l.case, CaseTag::Linear);
    }

    #[test]
    fn hyperbolic_argument_for_fisher_gamma() {
        // γ = −1/24 gives argument ξ/(2√6): √(1/24) = (1/12)√6
        let f = assemble_f(&Radical::from_ratio(-1, 24), &expr::int(1), &expr::int(0)).unwrap();
        let txt = f.u.to_string();
        assert!(txt.contains("cosh(1/12*sqrt(6)*xi)"), "got {}", txt);
    }

    #[test]
    fn exponential_rewrite_matches_hyperbolic() {
        let gamma = Radical::from_integer(-1);
        let (e1, e2) = (expr::int(1), expr::int(0)); // cosh(ξ)
        let hyp = assemble_f(&gamma, &e1, &e2).unwrap().u;
        let (cc1, cc2) = exponential_constants(&e1, &e2);
        assert_eq!(cc1, expr::ratio(1, 2));
        assert_eq!(cc2, expr::ratio(1, 2));
        let exp_form = to_exponential_form(&gamma, &cc1, &cc2).unwrap();
        for xi_v in [-1.5, 0.0, 0.4, 2.2] {
            let mut b: Map<String, f64> = Map::new();
            b.insert("xi".into(), xi_v);
            let lhs = hyp.eval(&b).unwrap();
            let rhs = exp_form.eval(&b).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
        }
        // γ=−1, pure exponential
        let pure = to_exponential_form(&gamma, &expr::int(1), &expr::int(0)).unwrap();
        assert_eq!(pure, parse_any("exp(xi)").unwrap());
    }

    #[test]
    fn fisher_profile_compacts_to_paper_form() {
        // u = 6w² − √6·w + 1/4 with w = F′/F, γ = −1/24 must simplify to
        // 1/(1 + C e^{ξ/√6})²
        let u_of_w = parse_any("6*w^2 - sqrt(6)*w + 1/4").unwrap();
        let gamma = Radical::from_ratio(-1, 24);
        let sols = build_u(&u_of_w, "w", &gamma, 1, &empty_branch()).unwrap();
        let main = &sols[0];
        assert_eq!(main.case, CaseTag::Exponential);
        assert_eq!(main.constants, vec!["C".to_string()]);
        let expect = parse_any("(1 + C*exp(1/6*sqrt(6)*xi))^-2").unwrap();
        for c_v in [0.5, 1.0, 2.0] {
            for i in 0..=20 {
                let xi_v = -5.0 + i as f64 * 0.5;
                let mut b: Map<String, f64> = Map::new();
                b.insert("xi".into(), xi_v);
                b.insert("C".into(), c_v);
                let got = main.u.eval(&b).unwrap();
                let want = expect.eval(&b).unwrap();
                assert!(
                    (got - want).abs() < 1e-12,
                    "C={} xi={}: {} vs {}",
                    c_v,
                    xi_v,
                    got,
                    want
                );
            }
        }
        // the C→∞ limit is the u ≡ 1 equilibrium
        assert_eq!(sols[1].u, expr::int(1));
    }

    #[test]
    fn constant_ansatz_stays_constant() {
        let sols = build_u(
            &parse_any("3/2").unwrap(),
            "w",
            &Radical::from_ratio(1, 4),
            1,
            &empty_branch(),
        )
        .unwrap();
        assert_eq!(sols[0].u, expr::ratio(3, 2));
    }

    #[test]
    fn trig_case_produces_tangent_structure() {
        let sols = build_u(
            &parse_any("w^2").unwrap(),
            "w",
            &Radical::from_integer(1),
            1,
            &empty_branch(),
        )
        .unwrap();
        assert_eq!(sols[0].case, CaseTag::Trig);
        // w = (−sin + C cos)/(cos + C sin); at C=0, u = tan²(ξ)... with sign:
        // w = −sin/cos = −tan, so u = tan²
        let mut b: Map<String, f64> = Map::new();
        b.insert("xi".into(), 0.4);
        b.insert("C".into(), 0.0);
        let got = sols[0].u.eval(&b).unwrap();
        assert!((got - 0.4f64.tan().powi(2)).abs() < 1e-12);
    }
}
