//! Line-oriented problem files: `param` declarations, one equation in
//! subscript jet notation, optional boundary conditions for ODE problems,
//! and optional exponent ranges for the exponential ansatz.
//!
//! ```text
//! # Bratu–Gelfand after rationalization
//! param lambda;
//! eq: 2*v_x^2 - 2*v*v_xx + lambda = 0
//! bc: v_x(0) = 0
//! bc: v(1) = 1
//! ranges: 1,1,0,0
//! ```
//!
//! Equations are written with `u_x`/`u_t` style derivatives; prime marks
//! are rejected so a file cannot silently mix the two conventions. The
//! dependent symbol and the PDE/ODE split are inferred from the jets.

use crate::error::{Error, Result};
use crate::expfn::BoundaryCondition;
use crate::expr::{self, Expr};
use crate::parser::parse;
use crate::reduce::{reduce_to_ode, speed_symbol, EvolutionPDE, TravellingWaveODE};
use num::BigRational;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct ProblemFile {
    /// Declared unknown parameters, in declaration order.
    pub params: Vec<String>,
    /// Left-hand side minus right-hand side of the equation line.
    pub lhs: Expr,
    pub dependent: String,
    /// True when a time derivative appears.
    pub is_pde: bool,
    pub bcs: Vec<BoundaryCondition>,
    /// Exponential-ansatz exponent ranges (c, d, p, q).
    pub ranges: (u32, u32, u32, u32),
}

impl ProblemFile {
    pub fn to_pde(&self) -> Result<EvolutionPDE> {
        if !self.is_pde {
            return Err(Error::InvalidProblem(
                "the equation has no time derivative; it is already an ODE".to_string(),
            ));
        }
        EvolutionPDE::new(self.lhs.clone(), &self.dependent, "x", "t")
    }

    /// The problem as a wave ODE: evolution equations are reduced with
    /// the given direction; plain ODEs relabel x-derivatives as ordinary
    /// ones (the frame variable plays the role of x).
    pub fn to_ode(&self, direction: i64) -> Result<TravellingWaveODE> {
        if self.is_pde {
            return reduce_to_ode(&self.to_pde()?, direction);
        }
        let mut rules: BTreeMap<Expr, Expr> = BTreeMap::new();
        collect_jet_rules(&self.lhs, &self.dependent, &mut rules)?;
        let lhs = self.lhs.substitute(&rules);
        Ok(TravellingWaveODE {
            speed: speed_symbol(&lhs),
            lhs,
            dependent: self.dependent.clone(),
            direction,
            flipped: false,
        })
    }
}

fn collect_jet_rules(
    e: &Expr,
    dependent: &str,
    rules: &mut BTreeMap<Expr, Expr>,
) -> Result<()> {
    let mut jets: BTreeSet<(String, Vec<String>)> = BTreeSet::new();
    e.walk(&mut |n| {
        if let Expr::Der(f, vs) = n {
            jets.insert((f.clone(), vs.clone()));
        }
    });
    for (f, vs) in jets {
        if f != dependent || vs.iter().any(|v| v == "t") {
            return Err(Error::InvalidProblem(format!(
                "derivative {}_{} does not fit an ODE in {}",
                f,
                vs.concat(),
                dependent
            )));
        }
        rules.insert(expr::der(&f, vs.clone()), expr::prime(&f, vs.len()));
    }
    Ok(())
}

// ---- parsing ----

/// Offsets are 1-based characters into the whole file.
fn shift(err: Error, base: usize) -> Error {
    match err {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + base,
            message,
        },
        Error::UndeclaredSymbol { name, offset } => Error::UndeclaredSymbol {
            name,
            offset: offset + base,
        },
        other => other,
    }
}

fn parse_err(offset: usize, message: &str) -> Error {
    Error::Parse {
        offset,
        message: message.to_string(),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A directive line split as (keyword, rest, char offset of rest).
fn split_directive(line: &str, line_base: usize) -> Option<(String, String, usize)> {
    let bytes = line.find(':')?;
    let keyword = line[..bytes].trim().to_string();
    let rest = &line[bytes + 1..];
    let rest_base = line_base + line[..bytes + 1].chars().count();
    Some((keyword, rest.to_string(), rest_base))
}

fn parse_rational(text: &str, base: usize) -> Result<BigRational> {
    let e = parse(text, None).map_err(|err| shift(err, base))?;
    match &e {
        Expr::Num(r) => r
            .as_rational()
            .cloned()
            .ok_or_else(|| parse_err(base + 1, "expected a rational number")),
        _ => Err(parse_err(base + 1, "expected a rational number")),
    }
}

/// Splits `lhs = rhs` on the single equals sign.
fn split_equation(rest: &str, base: usize) -> Result<(String, usize, String, usize)> {
    let mut parts = rest.splitn(2, '=');
    let lhs = parts.next().unwrap_or("");
    let rhs = match parts.next() {
        Some(r) => r,
        None => {
            return Err(parse_err(
                base + rest.chars().count() + 1,
                "expected `lhs = rhs`",
            ))
        }
    };
    if rhs.contains('=') {
        return Err(parse_err(base + 1, "more than one `=` in equation"));
    }
    let rhs_base = base + lhs.chars().count() + 1;
    Ok((lhs.to_string(), base, rhs.to_string(), rhs_base))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut params: Vec<String> = vec![];
    let mut equation: Option<(Expr, String, usize, String, usize)> = None;
    let mut raw_bcs: Vec<(String, usize)> = vec![];
    let mut ranges = (1u32, 1u32, 1u32, 1u32);
    let mut base = 0usize; // chars before the current line
    for line in text.split('\n') {
        let line_chars = line.chars().count() + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            base += line_chars;
            continue;
        }
        if let Some(pos) = line.find('\'') {
            return Err(parse_err(
                base + line[..pos].chars().count() + 1,
                "prime notation is not allowed in problem files; write subscript derivatives like u_xx",
            ));
        }
        if let Some(decl) = trimmed.strip_prefix("param ") {
            let decl = decl.trim();
            let name = match decl.strip_suffix(';') {
                Some(n) => n.trim(),
                None => {
                    return Err(parse_err(
                        base + line.chars().count(),
                        "param declaration must end with `;`",
                    ))
                }
            };
            if !is_identifier(name) {
                return Err(parse_err(
                    base + 1,
                    &format!("`{}` is not a valid parameter name", name),
                ));
            }
            if name == "x" || name == "t" || name == expr::WAVE_VAR {
                return Err(parse_err(
                    base + 1,
                    &format!("`{}` is reserved for the equation variables", name),
                ));
            }
            if params.iter().any(|p| p == name) {
                return Err(parse_err(
                    base + 1,
                    &format!("parameter `{}` declared twice", name),
                ));
            }
            params.push(name.to_string());
            base += line_chars;
            continue;
        }
        match split_directive(line, base) {
            Some((kw, rest, rest_base)) if kw == "eq" => {
                if equation.is_some() {
                    return Err(Error::InvalidProblem(
                        "problem files state exactly one equation".to_string(),
                    ));
                }
                let (l, lb, r, rb) = split_equation(&rest, rest_base)?;
                let lhs = parse(&l, None).map_err(|e| shift(e, lb))?;
                let rhs = parse(&r, None).map_err(|e| shift(e, rb))?;
                equation = Some((expr::sub(lhs, rhs), l, lb, r, rb));
            }
            Some((kw, rest, rest_base)) if kw == "bc" => {
                raw_bcs.push((rest, rest_base));
            }
            Some((kw, rest, rest_base)) if kw == "ranges" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 4 {
                    return Err(parse_err(
                        rest_base + 1,
                        "ranges take four comma-separated integers: c,d,p,q",
                    ));
                }
                let mut vals = [0u32; 4];
                for (i, p) in parts.iter().enumerate() {
                    vals[i] = p.trim().parse::<u32>().map_err(|_| {
                        parse_err(
                            rest_base + 1,
                            &format!("`{}` is not a nonnegative integer", p.trim()),
                        )
                    })?;
                }
                ranges = (vals[0], vals[1], vals[2], vals[3]);
            }
            _ => {
                return Err(parse_err(
                    base + 1,
                    &format!("unrecognized line `{}`", trimmed),
                ));
            }
        }
        base += line_chars;
    }
    let (raw_lhs, l_text, l_base, r_text, r_base) = equation.ok_or_else(|| {
        Error::InvalidProblem("problem file has no `eq:` line".to_string())
    })?;
    // infer the dependent from the derivative markers
    let mut jets: BTreeSet<(String, Vec<String>)> = BTreeSet::new();
    raw_lhs.walk(&mut |n| {
        if let Expr::Der(f, vs) = n {
            jets.insert((f.clone(), vs.clone()));
        }
    });
    let heads: BTreeSet<&String> = jets.iter().map(|(f, _)| f).collect();
    if heads.is_empty() {
        return Err(Error::InvalidProblem(
            "the equation has no derivatives".to_string(),
        ));
    }
    if heads.len() > 1 {
        return Err(Error::InvalidProblem(format!(
            "derivatives of more than one function: {:?}",
            heads
        )));
    }
    let dependent = heads.into_iter().next().expect("nonempty").clone();
    if params.iter().any(|p| *p == dependent) {
        return Err(Error::InvalidProblem(format!(
            "`{}` is both a parameter and the dependent function",
            dependent
        )));
    }
    let is_pde = jets.iter().any(|(_, vs)| vs.iter().any(|v| v == "t"));
    // second pass with the declared set so stray symbols error with offsets
    let mut declared: BTreeSet<String> = params.iter().cloned().collect();
    declared.insert(dependent.clone());
    parse(&l_text, Some(&declared)).map_err(|e| shift(e, l_base))?;
    parse(&r_text, Some(&declared)).map_err(|e| shift(e, r_base))?;
    // boundary conditions
    if is_pde && !raw_bcs.is_empty() {
        return Err(Error::InvalidProblem(
            "boundary conditions apply only to ODE problems".to_string(),
        ));
    }
    let mut bcs: Vec<BoundaryCondition> = vec![];
    for (rest, rest_base) in raw_bcs {
        bcs.push(parse_bc(&rest, rest_base, &dependent)?);
    }
    Ok(ProblemFile {
        params,
        lhs: raw_lhs,
        dependent,
        is_pde,
        bcs,
        ranges,
    })
}

/// `v_x(0) = 0` or `v(1) = 1`: a derivative order, a location, a target.
fn parse_bc(rest: &str, base: usize, dependent: &str) -> Result<BoundaryCondition> {
    let open = rest
        .find('(')
        .ok_or_else(|| parse_err(base + 1, "boundary condition needs `name(point) = value`"))?;
    let close = rest[open..]
        .find(')')
        .map(|i| open + i)
        .ok_or_else(|| parse_err(base + rest[..open].chars().count() + 1, "unclosed `(`"))?;
    let head = rest[..open].trim();
    let order = if head == dependent {
        0
    } else {
        let tail = head
            .strip_prefix(dependent)
            .and_then(|t| t.strip_prefix('_'))
            .unwrap_or("");
        if tail.is_empty() || !tail.chars().all(|c| c == 'x') {
            return Err(parse_err(
                base + 1,
                &format!(
                    "`{}` is not {} or an x-derivative of it",
                    head, dependent
                ),
            ));
        }
        tail.len()
    };
    let loc_base = base + rest[..open + 1].chars().count();
    let location = parse_rational(&rest[open + 1..close], loc_base)?;
    let after = &rest[close + 1..];
    let eq = after
        .find('=')
        .ok_or_else(|| parse_err(base + rest.chars().count(), "expected `= value`"))?;
    let target_base = base + rest[..close + 1 + eq + 1].chars().count();
    let target = parse_rational(&after[eq + 1..], target_base)?;
    Ok(BoundaryCondition {
        order,
        location,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FISHER: &str = "# reaction–diffusion wave\neq: u_t = u_xx + u - u^2\n";
    const BRATU: &str = "param lambda;\neq: 2*v_x^2 - 2*v*v_xx + lambda = 0\nbc: v_x(0) = 0\nbc: v(1) = 1\nranges: 1,1,0,0\n";

    #[test]
    fn evolution_equation_is_recognized_as_a_pde() {
        let p = parse_problem(FISHER).unwrap();
        assert_eq!(p.dependent, "u");
        assert!(p.is_pde);
        assert!(p.bcs.is_empty());
        assert_eq!(p.ranges, (1, 1, 1, 1));
        let ode = p.to_ode(1).unwrap();
        assert_eq!(ode.dependent, "u");
        assert_eq!(ode.speed, "c");
        assert!(ode.flipped);
    }

    #[test]
    fn boundary_value_problem_parses_with_conditions_and_ranges() {
        let p = parse_problem(BRATU).unwrap();
        assert_eq!(p.params, vec!["lambda".to_string()]);
        assert_eq!(p.dependent, "v");
        assert!(!p.is_pde);
        assert_eq!(p.ranges, (1, 1, 0, 0));
        assert_eq!(p.bcs.len(), 2);
        assert_eq!(p.bcs[0].order, 1);
        assert_eq!(p.bcs[0].location, BigRational::from_integer(0.into()));
        assert_eq!(p.bcs[1].order, 0);
        assert_eq!(p.bcs[1].target, BigRational::from_integer(1.into()));
        let ode = p.to_ode(1).unwrap();
        // x-jets became ordinary derivatives of the frame variable
        assert_eq!(
            ode.lhs,
            parse(
                "2*v'^2 - 2*v*v'' + lambda",
                None
            )
            .unwrap()
        );
    }

    #[test]
    fn undeclared_symbols_report_their_position() {
        let text = "eq: u_t = u_xx + mu*u\n";
        match parse_problem(text) {
            Err(Error::UndeclaredSymbol { name, offset }) => {
                assert_eq!(name, "mu");
                let c = text.chars().nth(offset - 1).unwrap();
                assert_eq!(c, 'm');
            }
            other => panic!("expected undeclared symbol, got {:?}", other),
        }
    }

    #[test]
    fn prime_marks_are_rejected() {
        let err = parse_problem("eq: u'' + u = 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("prime notation"));
    }

    #[test]
    fn structural_mistakes_are_rejected() {
        assert!(matches!(
            parse_problem("param lambda;\n"),
            Err(Error::InvalidProblem(_))
        ));
        assert!(matches!(
            parse_problem("eq: u_x = 0\neq: u_xx = 0\n"),
            Err(Error::InvalidProblem(_))
        ));
        assert!(matches!(
            parse_problem("eq: u_t = u_xx\nbc: u(0) = 1\n"),
            Err(Error::InvalidProblem(_))
        ));
        assert!(matches!(
            parse_problem("eq: u_x + v_x = 0\n"),
            Err(Error::InvalidProblem(_))
        ));
        assert!(matches!(
            parse_problem("eq: u = 1\n"),
            Err(Error::InvalidProblem(_))
        ));
        assert!(matches!(
            parse_problem("param u;\neq: u_x = u\n"),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn parse_errors_carry_file_offsets() {
        let text = "param lambda;\neq: u_x = lambda*)\n";
        match parse_problem(text) {
            Err(Error::Parse { offset, .. }) => {
                assert_eq!(text.chars().nth(offset - 1), Some(')'));
            }
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn ranges_line_validates_its_shape() {
        assert!(parse_problem("eq: u_x = u\nranges: 1,1\n").is_err());
        assert!(parse_problem("eq: u_x = u\nranges: 1,1,1,-1\n").is_err());
        assert!(parse_problem("eq: u_x = u\nranges: a,1,1,1\n").is_err());
        let p = parse_problem("eq: u_x = u\nranges: 2,1,1,3\n").unwrap();
        assert_eq!(p.ranges, (2, 1, 1, 3));
    }
}
