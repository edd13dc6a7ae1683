//! Multivariate polynomial view of an expression.
//!
//! A `MultiPoly` indexes the terms of an expanded expression by the exponent
//! vector of a chosen list of indeterminates; everything else stays inside
//! the coefficients. Term order is graded lexicographic and coefficients are
//! canonical expressions, so two equal polynomials have identical term lists.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector aligned with the owning polynomial's indeterminate list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Expr>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> MultiPoly {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Expr)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, var: &str) -> Option<i64> {
        let i = self.vars.iter().position(|v| v == var)?;
        self.terms.keys().map(|m| m.0[i]).max()
    }

    /// Coefficient of the given exponent vector (zero when absent).
    pub fn coeff_of(&self, exps: &[i64]) -> Expr {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| expr::int(0))
    }

    pub fn to_expr(&self) -> Expr {
        let mut terms = vec![];
        for (mono, coeff) in &self.terms {
            let mut factors = vec![coeff.clone()];
            for (i, &e) in mono.0.iter().enumerate() {
                if e != 0 {
                    factors.push(expr::pow(expr::sym(&self.vars[i]), e));
                }
            }
            terms.push(expr::mul(factors));
        }
        expr::add(terms)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Rewrites an expression as a polynomial in the given indeterminates.
/// Fails when an indeterminate sits inside a function argument, under a
/// negative power, or in any other non-polynomial position.
pub fn normalize_poly(e: &Expr, vars: &[&str]) -> Result<MultiPoly> {
    let expanded = e.expand();
    let mut out = MultiPoly::zero(vars);
    let terms: Vec<Expr> = match expanded {
        Expr::Sum(ts) => ts,
        other => vec![other],
    };
    let mut acc: BTreeMap<Monomial, Vec<Expr>> = BTreeMap::new();
    for term in terms {
        let factors: Vec<Expr> = match term {
            Expr::Prod(fs) => fs,
            other => vec![other],
        };
        let mut exps = vec![0i64; vars.len()];
        let mut coeff_factors: Vec<Expr> = vec![];
        for f in factors {
            match &f {
                Expr::Sym(s) => {
                    if let Some(i) = vars.iter().position(|v| *v == s.as_str()) {
                        exps[i] += 1;
                        continue;
                    }
                }
                Expr::Pow(b, n) => {
                    if let Expr::Sym(s) = &**b {
                        if let Some(i) = vars.iter().position(|v| *v == s.as_str()) {
                            if *n < 0 {
                                return Err(Error::NonPolynomial(format!(
                                    "negative power of {} in {}",
                                    s, f
                                )));
                            }
                            exps[i] += n;
                            continue;
                        }
                    }
                }
                _ => {}
            }
            if vars.iter().any(|v| f.contains_symbol(v)) {
                return Err(Error::NonPolynomial(format!(
                    "indeterminate occurs non-polynomially in {}",
                    f
                )));
            }
            coeff_factors.push(f);
        }
        acc.entry(Monomial(exps))
            .or_default()
            .push(expr::mul(coeff_factors));
    }
    for (mono, parts) in acc {
        let coeff = expr::add(parts);
        if !coeff.is_num_zero() {
            out.terms.insert(mono, coeff);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{add, exp_of, int, mul, pow, sym};
    use crate::parser::parse_any;
    use std::collections::BTreeMap as Map;

    #[test]
    fn square_of_binomial() {
        let e = pow(add(vec![sym("w"), int(1)]), 2);
        let p = normalize_poly(&e, &["w"]).unwrap();
        assert_eq!(p.coeff_of(&[2]), int(1));
        assert_eq!(p.coeff_of(&[1]), int(2));
        assert_eq!(p.coeff_of(&[0]), int(1));
        assert_eq!(p.term_count(), 3);
    }

    #[test]
    fn squared_quadratic_ansatz_matches_pointwise_evaluation() {
        // (b2 w^2 + b1 w + b0)^2: degree 4, five terms; cross-check the
        // collected form by evaluating both sides at several points.
        let u = parse_any("b2*w^2 + b1*w + b0").unwrap();
        let e = pow(u, 2);
        let p = normalize_poly(&e, &["w"]).unwrap();
        assert_eq!(p.total_degree(), Some(4));
        assert_eq!(p.term_count(), 5);
        let rebuilt = p.to_expr();
        for w in [-2.0, -0.5, 0.0, 1.0, 3.0] {
            let mut b: Map<String, f64> = Map::new();
            b.insert("b0".into(), 0.7);
            b.insert("b1".into(), -1.3);
            b.insert("b2".into(), 2.1);
            b.insert("w".into(), w);
            let lhs = e.eval(&b).unwrap();
            let rhs = rebuilt.eval(&b).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn exponential_of_indeterminate_is_rejected() {
        let e = exp_of(sym("w"));
        assert!(matches!(
            normalize_poly(&e, &["w"]),
            Err(Error::NonPolynomial(_))
        ));
        let e2 = pow(add(vec![int(1), sym("w")]), -1);
        assert!(matches!(
            normalize_poly(&e2, &["w"]),
            Err(Error::NonPolynomial(_))
        ));
    }

    #[test]
    fn print_parse_round_trip() {
        let samples = [
            "b2*w^2 + b1*w + b0",
            "w^4 - 2*w^2*y + y^2",
            "3/4*w*y - sqrt(2)*w + 1",
        ];
        for s in samples {
            let p = normalize_poly(&parse_any(s).unwrap(), &["w", "y"]).unwrap();
            let q = normalize_poly(&parse_any(&p.to_string()).unwrap(), &["w", "y"]).unwrap();
            assert_eq!(p, q, "round trip failed for {}", s);
        }
    }

    #[test]
    fn degree_queries() {
        let p = normalize_poly(&parse_any("c*w^3 + w*y^2 + 5").unwrap(), &["w", "y"]).unwrap();
        assert_eq!(p.degree_in("w"), Some(3));
        assert_eq!(p.degree_in("y"), Some(2));
        assert_eq!(p.total_degree(), Some(3));
        assert_eq!(p.coeff_of(&[3, 0]), sym("c"));
        assert!(normalize_poly(&int(0), &["w"]).unwrap().is_zero());
    }

    #[test]
    fn graded_lex_term_order_is_deterministic() {
        let p = normalize_poly(&parse_any("w^2 + y^2 + w*y + w + y + 1").unwrap(), &["w", "y"])
            .unwrap();
        let orders: Vec<Vec<i64>> = p.terms().map(|(m, _)| m.0.clone()).collect();
        assert_eq!(
            orders,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0]
            ]
        );
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let e = parse_any("w^2 - w^2 + y").unwrap();
        let p = normalize_poly(&e, &["w", "y"]).unwrap();
        assert_eq!(p.term_count(), 1);
        assert_eq!(p.coeff_of(&[0, 1]), int(1));
        assert_eq!(mul(vec![p.coeff_of(&[2, 0])]), int(0));
    }
}
