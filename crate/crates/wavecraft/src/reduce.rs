//! Travelling-wave reduction: rewrite a polynomial evolution PDE in u(x,t)
//! as an ODE in u(ξ) with ξ = x − σct.
//!
//! Every mixed derivative ∂ⁿ⁺ᵐu/∂xⁿ∂tᵐ becomes (−σc)ᵐ·u^(n+m). The reduced
//! equation is normalized so the leading numeric coefficient of its highest
//! derivative term is positive, which keeps the classical forms (for Fisher,
//! u″ + cu′ + u − u² = 0) verbatim.

use crate::error::{Error, Result};
use crate::expr::{self, Expr, WAVE_VAR};
use crate::poly::normalize_poly;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct EvolutionPDE {
    /// Left-hand side of `lhs = 0`, polynomial in u and its jets.
    pub lhs: Expr,
    pub dependent: String,
    pub space: String,
    pub time: String,
}

impl EvolutionPDE {
    pub fn new(lhs: Expr, dependent: &str, space: &str, time: &str) -> Result<EvolutionPDE> {
        let pde = EvolutionPDE {
            lhs,
            dependent: dependent.to_string(),
            space: space.to_string(),
            time: time.to_string(),
        };
        pde.validate()?;
        Ok(pde)
    }

    fn validate(&self) -> Result<()> {
        if self.lhs.contains_symbol(&self.space) || self.lhs.contains_symbol(&self.time) {
            return Err(Error::InvalidProblem(format!(
                "equation depends explicitly on {} or {}; only autonomous equations reduce to travelling waves",
                self.space, self.time
            )));
        }
        let mut bad: Option<String> = None;
        for (func, vars) in self.jets() {
            if func != self.dependent
                || !vars.iter().all(|v| *v == self.space || *v == self.time)
            {
                bad = Some(format!(
                    "{}_{}",
                    func,
                    vars.concat()
                ));
                break;
            }
        }
        if let Some(j) = bad {
            return Err(Error::InvalidProblem(format!(
                "derivative {} is not a pure {}/{} derivative of {}",
                j, self.space, self.time, self.dependent
            )));
        }
        // polynomial in the jets and the dependent symbol
        let mut rules: BTreeMap<Expr, Expr> = BTreeMap::new();
        let mut names: Vec<String> = vec![];
        for (i, (func, vars)) in self.jets().into_iter().enumerate() {
            let name = format!("__jet{}", i);
            rules.insert(expr::der(&func, vars), expr::sym(&name));
            names.push(name);
        }
        names.push(self.dependent.clone());
        let masked = self.lhs.substitute(&rules);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        normalize_poly(&masked, &refs)?;
        Ok(())
    }

    /// Distinct derivative markers appearing in the equation.
    pub fn jets(&self) -> Vec<(String, Vec<String>)> {
        let mut seen: BTreeSet<(String, Vec<String>)> = BTreeSet::new();
        collect_jets(&self.lhs, &mut seen);
        seen.into_iter().collect()
    }

    /// Highest derivative order in the given variable.
    pub fn order_in(&self, var: &str) -> usize {
        self.jets()
            .iter()
            .map(|(_, vs)| vs.iter().filter(|v| *v == var).count())
            .max()
            .unwrap_or(0)
    }
}

fn collect_jets(e: &Expr, out: &mut BTreeSet<(String, Vec<String>)>) {
    match e {
        Expr::Der(f, vs) => {
            out.insert((f.clone(), vs.clone()));
        }
        Expr::Num(_) | Expr::Sym(_) => {}
        Expr::Pow(b, _) => collect_jets(b, out),
        Expr::Exp(a) | Expr::Cos(a) | Expr::Sin(a) | Expr::Cosh(a) | Expr::Sinh(a) => {
            collect_jets(a, out)
        }
        Expr::Prod(xs) | Expr::Sum(xs) => {
            for x in xs {
                collect_jets(x, out);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TravellingWaveODE {
    /// Polynomial in u, u′, u″, … and the speed symbol.
    pub lhs: Expr,
    pub dependent: String,
    pub speed: String,
    /// σ in ξ = x − σct.
    pub direction: i64,
    /// True when normalization negated the reduced equation.
    pub flipped: bool,
}

impl TravellingWaveODE {
    pub fn max_order(&self) -> usize {
        let mut jets = BTreeSet::new();
        collect_jets(&self.lhs, &mut jets);
        jets.iter().map(|(_, vs)| vs.len()).max().unwrap_or(0)
    }
}

/// Picks a speed symbol that does not collide with anything in the equation.
pub fn speed_symbol(lhs: &Expr) -> String {
    if !lhs.contains_symbol("c") {
        return "c".to_string();
    }
    for i in 0.. {
        let name = format!("c{}", i);
        if !lhs.contains_symbol(&name) {
            return name;
        }
    }
    unreachable!()
}

pub fn reduce_to_ode(pde: &EvolutionPDE, direction: i64) -> Result<TravellingWaveODE> {
    assert!(direction == 1 || direction == -1, "direction must be ±1");
    let speed = speed_symbol(&pde.lhs);
    let minus_sigma_c = expr::mul(vec![expr::int(-direction), expr::sym(&speed)]);
    let mut rules: BTreeMap<Expr, Expr> = BTreeMap::new();
    for (func, vars) in pde.jets() {
        let m = vars.iter().filter(|v| **v == pde.time).count();
        let total = vars.len();
        rules.insert(
            expr::der(&func, vars),
            expr::mul(vec![
                expr::pow(minus_sigma_c.clone(), m as i64),
                expr::prime(&func, total),
            ]),
        );
    }
    let reduced = pde.lhs.substitute(&rules).expand();
    let (lhs, flipped) = normalize_sign(reduced);
    Ok(TravellingWaveODE {
        lhs,
        dependent: pde.dependent.clone(),
        speed,
        direction,
        flipped,
    })
}

/// Negates the equation when the leading numeric coefficient of the
/// highest-order derivative term is negative.
fn normalize_sign(e: Expr) -> (Expr, bool) {
    let terms: Vec<Expr> = match &e {
        Expr::Sum(ts) => ts.clone(),
        other => vec![other.clone()],
    };
    // among terms of maximal derivative order pick the structurally smallest
    let max_order = terms
        .iter()
        .map(|t| {
            let mut jets = BTreeSet::new();
            collect_jets(t, &mut jets);
            jets.iter().map(|(_, vs)| vs.len()).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let leader = terms
        .iter()
        .filter(|t| {
            let mut jets = BTreeSet::new();
            collect_jets(t, &mut jets);
            jets.iter().map(|(_, vs)| vs.len()).max().unwrap_or(0) == max_order
        })
        .min();
    if let Some(t) = leader {
        let (coeff, _) = t.coeff_core();
        if coeff.sign() == std::cmp::Ordering::Less {
            return (expr::neg(e).expand(), true);
        }
    }
    (e, false)
}

/// Replaces every jet and the dependent symbol by concrete expressions,
/// mapping ∂ⁿ⁺ᵐ/∂xⁿ∂tᵐ to (−σc)ᵐ·φ^(n+m) for a given profile φ(ξ).
pub fn bind_profile(
    equation: &Expr,
    dependent: &str,
    profile: &Expr,
    speed: &Expr,
    direction: i64,
) -> Expr {
    let mut jets = BTreeSet::new();
    collect_jets(equation, &mut jets);
    let mut derivs: Vec<Expr> = vec![profile.clone()];
    let max_total = jets.iter().map(|(_, vs)| vs.len()).max().unwrap_or(0);
    for _ in 0..max_total {
        derivs.push(derivs.last().unwrap().differentiate(WAVE_VAR));
    }
    let minus_sigma_c = expr::mul(vec![expr::int(-direction), speed.clone()]);
    let mut rules: BTreeMap<Expr, Expr> = BTreeMap::new();
    rules.insert(expr::sym(dependent), profile.clone());
    for (func, vars) in jets {
        if func != dependent {
            continue;
        }
        let m = vars.iter().filter(|v| *v == "t").count();
        let total = vars.len();
        rules.insert(
            expr::der(&func, vars),
            expr::mul(vec![
                expr::pow(minus_sigma_c.clone(), m as i64),
                derivs[total].clone(),
            ]),
        );
    }
    equation.substitute(&rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_any;
    use std::collections::BTreeMap as Map;

    fn fisher() -> EvolutionPDE {
        EvolutionPDE::new(
            parse_any("u_t - u_xx - u*(1-u)").unwrap(),
            "u",
            "x",
            "t",
        )
        .unwrap()
    }

    #[test]
    fn fisher_reduces_to_classical_form() {
        let ode = reduce_to_ode(&fisher(), 1).unwrap();
        assert_eq!(ode.lhs, parse_any("u'' + c*u' + u - u^2").unwrap());
        assert_eq!(ode.speed, "c");
        assert_eq!(ode.max_order(), 2);
        assert!(ode.flipped);
    }

    #[test]
    fn advection_and_heat() {
        let adv = EvolutionPDE::new(parse_any("u_t + u_x").unwrap(), "u", "x", "t").unwrap();
        let ode = reduce_to_ode(&adv, 1).unwrap();
        assert_eq!(ode.lhs, parse_any("u' - c*u'").unwrap());
        let heat = EvolutionPDE::new(parse_any("u_t - u_xx").unwrap(), "u", "x", "t").unwrap();
        let ode = reduce_to_ode(&heat, 1).unwrap();
        assert_eq!(ode.lhs, parse_any("u'' + c*u'").unwrap());
    }

    #[test]
    fn direction_flip_negates_speed() {
        let plus = reduce_to_ode(&fisher(), 1).unwrap();
        let minus = reduce_to_ode(&fisher(), -1).unwrap();
        let plus_with_negated_c = plus.lhs.substitute_symbol("c", &parse_any("-c").unwrap());
        assert_eq!(minus.lhs, plus_with_negated_c.expand());
    }

    #[test]
    fn total_order_is_preserved_per_monomial() {
        let pde = EvolutionPDE::new(parse_any("u_xxt + u*u_x").unwrap(), "u", "x", "t").unwrap();
        let ode = reduce_to_ode(&pde, 1).unwrap();
        assert_eq!(ode.max_order(), 3);
        assert_eq!(pde.order_in("x"), 2);
        assert_eq!(pde.order_in("t"), 1);
    }

    #[test]
    fn rejects_non_autonomous_and_foreign_jets() {
        assert!(EvolutionPDE::new(parse_any("u_t + x*u_x").unwrap(), "u", "x", "t").is_err());
        assert!(EvolutionPDE::new(parse_any("u_t + v_x").unwrap(), "u", "x", "t").is_err());
    }

    #[test]
    fn chain_rule_soundness_on_cubic_profile() {
        // evaluating the PDE at u(x,t) = φ(x − ct) via generic calculus must
        // agree with the reduced ODE at φ(ξ), up to the recorded sign flip
        let pde = fisher();
        let ode = reduce_to_ode(&pde, 1).unwrap();
        let phi = parse_any("xi^3 - 2*xi + 1").unwrap();
        // explicit u(x,t): substitute ξ = x - c t, then differentiate in x/t
        let xi_of_xt = parse_any("x - c*t").unwrap();
        let u_xt = phi.substitute_symbol("xi", &xi_of_xt);
        let mut rules: Map<Expr, Expr> = Map::new();
        rules.insert(expr::sym("u"), u_xt.clone());
        rules.insert(expr::der("u", vec!["t".into()]), u_xt.differentiate("t"));
        rules.insert(
            expr::der("u", vec!["x".into(), "x".into()]),
            u_xt.differentiate("x").differentiate("x"),
        );
        let pde_val = pde.lhs.substitute(&rules);
        // reduced side: bind u^{(k)} to φ^{(k)}
        let mut ode_rules: Map<Expr, Expr> = Map::new();
        ode_rules.insert(expr::sym("u"), phi.clone());
        ode_rules.insert(expr::prime("u", 1), phi.differentiate("xi"));
        ode_rules.insert(expr::prime("u", 2), phi.differentiate("xi").differentiate("xi"));
        let ode_val = ode.lhs.substitute(&ode_rules);
        let sign = if ode.flipped { -1.0 } else { 1.0 };
        for (x, t) in [(0.3, 0.1), (-1.2, 0.7), (2.0, -0.4)] {
            let mut b: Map<String, f64> = Map::new();
            b.insert("x".into(), x);
            b.insert("t".into(), t);
            b.insert("c".into(), 1.3);
            b.insert("xi".into(), x - 1.3 * t);
            let lhs = pde_val.eval(&b).unwrap();
            let rhs = ode_val.eval(&b).unwrap();
            assert!(
                (lhs - sign * rhs).abs() < 1e-12 * lhs.abs().max(1.0),
                "mismatch at ({}, {}): {} vs {}",
                x,
                t,
                lhs,
                rhs
            );
        }
    }

    #[test]
    fn bind_profile_matches_manual_reduction() {
        let pde = fisher();
        let phi = parse_any("xi^2 + 1").unwrap();
        let bound = bind_profile(&pde.lhs, "u", &phi, &expr::sym("c"), 1);
        let mut b: Map<String, f64> = Map::new();
        b.insert("xi".into(), 0.5);
        b.insert("c".into(), 2.0);
        // u_t - u_xx - u + u^2 at φ: (-c)(2ξ) - 2 - φ + φ²
        let expect = -2.0 * (2.0 * 0.5) - 2.0 - 1.25 + 1.25f64.powi(2);
        assert!((bound.eval(&b).unwrap() - expect).abs() < 1e-12);
    }
}
