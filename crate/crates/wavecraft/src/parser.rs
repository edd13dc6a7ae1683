//! Text-to-expression parser.
//!
//! Grammar (whitespace insignificant, offsets are 1-based characters):
//!
//! ```text
//! expression := ('+'|'-')? term (('+'|'-') term)*
//! term       := factor (('*'|'/') factor)*
//! factor     := atom ('^' ('-')? integer)?
//! atom       := rational | symbol | jet-symbol | primed-symbol
//!             | fn '(' expression ')' | '(' expression ')'
//! fn         := 'exp' | 'cos' | 'sin' | 'cosh' | 'sinh' | 'sqrt'
//! jet-symbol := letter '_' [xt]+          (e.g. u_t, u_xx)
//! primed     := symbol '\''+              (e.g. u'', derivatives in xi)
//! rational   := integer ('/' positive-integer)?
//! ```
//!
//! Rationals need no dedicated lexer rule: `5/6` folds to an exact number
//! through division. `sqrt` requires a nonnegative rational argument.
//! Identifiers containing `_` that do not match the jet shape (single-letter
//! head, x/t tail) are ordinary symbols, so names like `a_m1` stay usable.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::radical::Radical;
use num::BigRational;
use std::collections::BTreeSet;

/// Parses `text` into a canonical expression. When `declared` is given,
/// every plain symbol and every jet/primed head must be a member.
pub fn parse(text: &str, declared: Option<&BTreeSet<String>>) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        declared,
    };
    let e = p.expression()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err_here("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses with every symbol accepted (round trips, internal rebuilds).
pub fn parse_any(text: &str) -> Result<Expr> {
    parse(text, None)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    declared: Option<&'a BTreeSet<String>>,
}

const FUNCTIONS: [&str; 6] = ["exp", "cos", "sin", "cosh", "sinh", "sqrt"];

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.pos + 1
    }

    fn err_here(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expression(&mut self) -> Result<Expr> {
        self.skip_ws();
        let mut terms: Vec<Expr> = vec![];
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                self.bump();
                negate = true;
            }
            Some('+') => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        terms.push(if negate { expr::neg(first) } else { first });
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    terms.push(t);
                }
                Some('-') => {
                    self.bump();
                    let t = self.term()?;
                    terms.push(expr::neg(t));
                }
                _ => break,
            }
        }
        Ok(expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let f = self.factor()?;
                    acc = expr::mul(vec![acc, f]);
                }
                Some('/') => {
                    self.bump();
                    let f = self.factor()?;
                    acc = expr::mul(vec![acc, expr::pow(f, -1)]);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let a = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let n = self.integer_exponent()?;
            return Ok(expr::pow(a, n));
        }
        Ok(a)
    }

    fn integer_exponent(&mut self) -> Result<i64> {
        let mut sign = 1i64;
        if self.peek() == Some('-') {
            self.bump();
            sign = -1;
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.err_here("expected integer exponent after '^'")),
        }
        let mut value: i64 = 0;
        while let Some(c) = self.peek() {
            if let Some(d) = c.to_digit(10) {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as i64))
                    .ok_or_else(|| self.err_here("exponent too large"))?;
                self.bump();
            } else {
                break;
            }
        }
        Ok(sign * value)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.number(),
            Some('(') => {
                self.bump();
                let e = self.expression()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(Error::Parse {
                        offset: self.pos, // already past the offending position
                        message: "expected ')'".to_string(),
                    });
                }
                Ok(e)
            }
            Some(c) if c.is_alphabetic() => self.identifier(),
            Some(_) => Err(self.err_here("expected a number, symbol, or '('")),
            None => Err(self.err_here("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let mut value: i64 = 0;
        while let Some(c) = self.peek() {
            if let Some(d) = c.to_digit(10) {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as i64))
                    .ok_or_else(|| self.err_here("number too large"))?;
                self.bump();
            } else {
                break;
            }
        }
        Ok(expr::int(value))
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.offset();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // function call?
        if FUNCTIONS.contains(&name.as_str()) {
            let save = self.pos;
            self.skip_ws();
            if self.peek() == Some('(') {
                self.bump();
                let arg = self.expression()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(Error::Parse {
                        offset: self.pos,
                        message: "expected ')'".to_string(),
                    });
                }
                return self.apply_function(&name, arg, start);
            }
            self.pos = save;
        }
        // jet symbol: single-letter head, underscore, x/t tail
        if let Some((head, tail)) = name.split_once('_') {
            let head_ok = head.chars().count() == 1
                && head.chars().next().unwrap().is_alphabetic();
            let tail_ok = !tail.is_empty() && tail.chars().all(|c| c == 'x' || c == 't');
            if head_ok && tail_ok {
                self.check_declared(head, start)?;
                return Ok(expr::der(
                    head,
                    tail.chars().map(|c| c.to_string()).collect(),
                ));
            }
        }
        // primes denote derivatives in the travelling-wave variable
        let mut primes = 0usize;
        while self.peek() == Some('\'') {
            self.bump();
            primes += 1;
        }
        self.check_declared(&name, start)?;
        if primes > 0 {
            Ok(expr::prime(&name, primes))
        } else {
            Ok(expr::sym(&name))
        }
    }

    fn apply_function(&mut self, name: &str, arg: Expr, start: usize) -> Result<Expr> {
        match name {
            "exp" => Ok(expr::exp_of(arg)),
            "cos" => Ok(expr::cos_of(arg)),
            "sin" => Ok(expr::sin_of(arg)),
            "cosh" => Ok(expr::cosh_of(arg)),
            "sinh" => Ok(expr::sinh_of(arg)),
            "sqrt" => {
                let q: Option<BigRational> = arg.as_num().and_then(|r| r.as_rational()).cloned();
                let root = q.as_ref().and_then(Radical::sqrt_rational);
                match root {
                    Some(r) => Ok(expr::num(r)),
                    None => Err(Error::Parse {
                        offset: start,
                        message: "sqrt requires a nonnegative rational argument".to_string(),
                    }),
                }
            }
            _ => unreachable!(),
        }
    }

    fn check_declared(&self, name: &str, start: usize) -> Result<()> {
        if let Some(table) = self.declared {
            if !table.contains(name) {
                return Err(Error::UndeclaredSymbol {
                    name: name.to_string(),
                    offset: start,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{add, der, int, mul, neg, pow, prime, ratio, sym};

    fn decl(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_pde_with_jets() {
        let d = decl(&["u"]);
        let e = parse("u_xx + u*(1-u)", Some(&d)).unwrap();
        let want = add(vec![
            der("u", vec!["x".into(), "x".into()]),
            mul(vec![sym("u"), add(vec![int(1), neg(sym("u"))])]),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn parses_with_declared_parameter() {
        let d = decl(&["v", "lambda"]);
        let e = parse("2*(v_x^2 - v*v_xx) + lambda", Some(&d)).unwrap();
        assert!(e.contains_symbol("lambda"));
        assert!(e.contains(&pow(der("v", vec!["x".into()]), 2)));
    }

    #[test]
    fn malformed_power_reports_offset() {
        let d = decl(&["u"]);
        match parse("u^^2", Some(&d)) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn undeclared_symbol_reports_name_and_offset() {
        let d = decl(&["u"]);
        match parse("u + q", Some(&d)) {
            Err(Error::UndeclaredSymbol { name, offset }) => {
                assert_eq!(name, "q");
                assert_eq!(offset, 5);
            }
            other => panic!("expected undeclared-symbol error, got {:?}", other),
        }
    }

    #[test]
    fn rationals_fold_exactly() {
        assert_eq!(parse_any("5/6").unwrap(), ratio(5, 6));
        assert_eq!(
            parse_any("2/3*x").unwrap(),
            mul(vec![ratio(2, 3), sym("x")])
        );
    }

    #[test]
    fn sqrt_of_rational_is_exact() {
        let e = parse_any("sqrt(25/6)").unwrap();
        assert_eq!(e.to_string(), "5/6*sqrt(6)");
        assert!(parse_any("sqrt(x)").is_err());
    }

    #[test]
    fn primes_and_leading_sign() {
        let e = parse_any("-u'' + c*u'").unwrap();
        let want = add(vec![
            neg(prime("u", 2)),
            mul(vec![sym("c"), prime("u", 1)]),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn underscore_names_that_are_not_jets_stay_symbols() {
        let e = parse_any("a_m1 + u_t").unwrap();
        assert!(e.contains_symbol("a_m1"));
        assert!(e.contains(&der("u", vec!["t".into()])));
    }

    #[test]
    fn negative_exponents() {
        let e = parse_any("u^-2").unwrap();
        assert_eq!(e, pow(sym("u"), -2));
    }

    #[test]
    fn display_round_trips_through_parser() {
        let samples = vec![
            add(vec![
                prime("u", 2),
                mul(vec![sym("c"), prime("u", 1)]),
                sym("u"),
                neg(pow(sym("u"), 2)),
            ]),
            mul(vec![ratio(5, 6), sym("c"), pow(add(vec![int(1), sym("E")]), -2)]),
            parse_any("sqrt(25/6)*x + 1/2").unwrap(),
            der("u", vec!["x".into(), "x".into(), "t".into()]),
        ];
        for e in samples {
            let text = e.to_string();
            let back = parse_any(&text).unwrap();
            assert_eq!(back, e, "round trip failed for {}", text);
        }
    }
}
