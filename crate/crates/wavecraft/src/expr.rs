//! Immutable symbolic expressions over the exact radical tower.
//!
//! Canonical form invariants maintained by the smart constructors:
//! sums and products are flattened, like terms and like factors combined,
//! operands sorted by a fixed structural order, numeric subterms folded,
//! integer powers distributed over products and merged into exponentials.
//! Derivatives are opaque markers (u_xx, u'') and are never expanded here.

use crate::error::{Error, Result};
use crate::radical::Radical;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Variable name used for travelling-wave profiles; primes in the text syntax
/// (`u''`) denote derivatives with respect to it.
pub const WAVE_VAR: &str = "xi";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Num(Radical),
    Sym(String),
    Pow(Box<Expr>, i64),
    Exp(Box<Expr>),
    Cos(Box<Expr>),
    Sin(Box<Expr>),
    Cosh(Box<Expr>),
    Sinh(Box<Expr>),
    /// Derivative marker: function symbol and the (sorted) variables it is
    /// differentiated against, e.g. Der("u", ["x","x"]) for u_xx.
    Der(String, Vec<String>),
    Prod(Vec<Expr>),
    Sum(Vec<Expr>),
}

// ---- constructors ----

pub fn num(r: Radical) -> Expr {
    Expr::Num(r)
}

pub fn int(n: i64) -> Expr {
    Expr::Num(Radical::from_integer(n))
}

pub fn ratio(n: i64, d: i64) -> Expr {
    Expr::Num(Radical::from_ratio(n, d))
}

pub fn sym(name: &str) -> Expr {
    Expr::Sym(name.to_string())
}

pub fn der(func: &str, vars: Vec<String>) -> Expr {
    let mut vs = vars;
    vs.sort();
    Expr::Der(func.to_string(), vs)
}

/// nth derivative marker with respect to the travelling-wave variable.
pub fn prime(func: &str, order: usize) -> Expr {
    der(func, vec![WAVE_VAR.to_string(); order])
}

pub fn add(terms: Vec<Expr>) -> Expr {
    let mut flat: Vec<Expr> = vec![];
    for t in terms {
        match t {
            Expr::Sum(ts) => flat.extend(ts),
            other => flat.push(other),
        }
    }
    // collect coefficients per non-numeric core
    let mut rat = Radical::zero();
    let mut coeffs: BTreeMap<Expr, Radical> = BTreeMap::new();
    for t in flat {
        let (c, core) = split_coeff(t);
        match core {
            None => rat = rat.add(&c),
            Some(core) => {
                let entry = coeffs.entry(core).or_insert_with(Radical::zero);
                *entry = entry.add(&c);
            }
        }
    }
    let mut out: Vec<Expr> = vec![];
    if !rat.is_zero() {
        out.push(Expr::Num(rat));
    }
    for (core, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        out.push(attach_coeff(c, core));
    }
    out.sort();
    match out.len() {
        0 => int(0),
        1 => out.into_iter().next().unwrap(),
        _ => Expr::Sum(out),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    add(vec![a, neg(b)])
}

pub fn neg(e: Expr) -> Expr {
    mul(vec![int(-1), e])
}

pub fn mul(factors: Vec<Expr>) -> Expr {
    let mut flat: Vec<Expr> = vec![];
    for f in factors {
        match f {
            Expr::Prod(fs) => flat.extend(fs),
            other => flat.push(other),
        }
    }
    let mut coeff = Radical::one();
    let mut exp_arg: Vec<Expr> = vec![];
    let mut bases: BTreeMap<Expr, i64> = BTreeMap::new();
    let mut kept: Vec<Expr> = vec![]; // unevaluable factors like 0^-1
    for f in flat {
        match f {
            Expr::Num(r) => coeff = coeff.mul(&r),
            Expr::Exp(a) => exp_arg.push(*a),
            Expr::Pow(b, n) => match *b {
                Expr::Num(r) if r.is_zero() => kept.push(Expr::Pow(Box::new(Expr::Num(r)), n)),
                other => *bases.entry(other).or_insert(0) += n,
            },
            other => *bases.entry(other).or_insert(0) += 1,
        }
    }
    if coeff.is_zero() {
        return int(0);
    }
    let mut out: Vec<Expr> = vec![];
    let ea = add(exp_arg);
    if !ea.is_num_zero() {
        out.push(Expr::Exp(Box::new(ea)));
    }
    for (b, n) in bases {
        if n == 0 {
            continue;
        }
        let p = pow(b, n);
        match p {
            Expr::Num(r) => coeff = coeff.mul(&r),
            Expr::Prod(fs) => out.extend(fs),
            Expr::Exp(a) => {
                // a merged exponential emerged from pow(); fold it back in
                out.push(Expr::Exp(a));
            }
            other => out.push(other),
        }
    }
    out.extend(kept);
    if coeff.is_zero() {
        return int(0);
    }
    // re-merge exponentials that may have appeared from pow()
    let exps: Vec<Expr> = out
        .iter()
        .filter(|e| matches!(e, Expr::Exp(_)))
        .cloned()
        .collect();
    if exps.len() > 1 {
        out.retain(|e| !matches!(e, Expr::Exp(_)));
        let merged = add(
            exps.into_iter()
                .map(|e| match e {
                    Expr::Exp(a) => *a,
                    _ => unreachable!(),
                })
                .collect(),
        );
        if !merged.is_num_zero() {
            out.push(Expr::Exp(Box::new(merged)));
        }
    }
    out.sort();
    if !coeff.is_one() || out.is_empty() {
        out.insert(0, Expr::Num(coeff));
    }
    match out.len() {
        0 => int(1),
        1 => out.into_iter().next().unwrap(),
        _ => Expr::Prod(out),
    }
}

pub fn pow(base: Expr, n: i64) -> Expr {
    if n == 0 {
        return int(1);
    }
    if n == 1 {
        return base;
    }
    match base {
        Expr::Num(r) => {
            if r.is_zero() {
                if n > 0 {
                    int(0)
                } else {
                    Expr::Pow(Box::new(Expr::Num(r)), n)
                }
            } else {
                Expr::Num(r.pow(n).expect("nonzero radical power"))
            }
        }
        Expr::Pow(b, m) => pow(*b, m.checked_mul(n).expect("exponent overflow")),
        Expr::Prod(fs) => mul(fs.into_iter().map(|f| pow(f, n)).collect()),
        Expr::Exp(a) => exp_of(mul(vec![int(n), *a])),
        other => Expr::Pow(Box::new(other), n),
    }
}

pub fn exp_of(arg: Expr) -> Expr {
    if arg.is_num_zero() {
        int(1)
    } else {
        Expr::Exp(Box::new(arg))
    }
}

pub fn cos_of(arg: Expr) -> Expr {
    if arg.is_num_zero() {
        int(1)
    } else {
        Expr::Cos(Box::new(arg))
    }
}

pub fn sin_of(arg: Expr) -> Expr {
    if arg.is_num_zero() {
        int(0)
    } else {
        Expr::Sin(Box::new(arg))
    }
}

pub fn cosh_of(arg: Expr) -> Expr {
    if arg.is_num_zero() {
        int(1)
    } else {
        Expr::Cosh(Box::new(arg))
    }
}

pub fn sinh_of(arg: Expr) -> Expr {
    if arg.is_num_zero() {
        int(0)
    } else {
        Expr::Sinh(Box::new(arg))
    }
}

/// Splits a canonical term into (numeric coefficient, non-numeric core).
/// Core None means the term is purely numeric.
fn split_coeff(e: Expr) -> (Radical, Option<Expr>) {
    match e {
        Expr::Num(r) => (r, None),
        Expr::Prod(fs) => {
            let mut coeff = Radical::one();
            let mut rest: Vec<Expr> = vec![];
            for f in fs {
                match f {
                    Expr::Num(r) => coeff = coeff.mul(&r),
                    other => rest.push(other),
                }
            }
            match rest.len() {
                0 => (coeff, None),
                1 => (coeff, Some(rest.into_iter().next().unwrap())),
                _ => (coeff, Some(Expr::Prod(rest))),
            }
        }
        other => (Radical::one(), Some(other)),
    }
}

fn attach_coeff(c: Radical, core: Expr) -> Expr {
    if c.is_one() {
        return core;
    }
    match core {
        Expr::Prod(mut fs) => {
            fs.insert(0, Expr::Num(c));
            Expr::Prod(fs)
        }
        other => Expr::Prod(vec![Expr::Num(c), other]),
    }
}

impl Expr {
    pub fn is_num_zero(&self) -> bool {
        matches!(self, Expr::Num(r) if r.is_zero())
    }

    pub fn is_num_one(&self) -> bool {
        matches!(self, Expr::Num(r) if r.is_one())
    }

    pub fn as_num(&self) -> Option<&Radical> {
        match self {
            Expr::Num(r) => Some(r),
            _ => None,
        }
    }

    /// Numeric coefficient and core of a canonical term.
    pub fn coeff_core(&self) -> (Radical, Option<Expr>) {
        split_coeff(self.clone())
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Sym(s) = e {
                out.insert(s.clone());
            }
        });
        out
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if let Expr::Sym(s) = e {
                if s == name {
                    found = true;
                }
            }
        });
        found
    }

    pub fn contains(&self, needle: &Expr) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if e == needle {
                found = true;
            }
        });
        found
    }

    pub fn has_derivative_markers(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if matches!(e, Expr::Der(..)) {
                found = true;
            }
        });
        found
    }

    /// Pre-order traversal over every subexpression.
    pub fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Sym(_) | Expr::Der(..) => {}
            Expr::Pow(b, _) => b.walk(f),
            Expr::Exp(a) | Expr::Cos(a) | Expr::Sin(a) | Expr::Cosh(a) | Expr::Sinh(a) => a.walk(f),
            Expr::Prod(xs) | Expr::Sum(xs) => {
                for x in xs {
                    x.walk(f);
                }
            }
        }
    }

    /// Rebuilds the expression bottom-up through the smart constructors,
    /// restoring every canonical-form invariant.
    pub fn canonicalize(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Sym(_) => self.clone(),
            Expr::Der(f, vs) => der(f, vs.clone()),
            Expr::Pow(b, n) => pow(b.canonicalize(), *n),
            Expr::Exp(a) => exp_of(a.canonicalize()),
            Expr::Cos(a) => cos_of(a.canonicalize()),
            Expr::Sin(a) => sin_of(a.canonicalize()),
            Expr::Cosh(a) => cosh_of(a.canonicalize()),
            Expr::Sinh(a) => sinh_of(a.canonicalize()),
            Expr::Prod(fs) => mul(fs.iter().map(|f| f.canonicalize()).collect()),
            Expr::Sum(ts) => add(ts.iter().map(|t| t.canonicalize()).collect()),
        }
    }

    /// Simultaneous, non-cascading substitution: any subtree structurally
    /// equal to a rule key is replaced and the replacement is not revisited.
    pub fn substitute(&self, rules: &BTreeMap<Expr, Expr>) -> Expr {
        if let Some(r) = rules.get(self) {
            return r.clone();
        }
        match self {
            Expr::Num(_) | Expr::Sym(_) | Expr::Der(..) => self.clone(),
            Expr::Pow(b, n) => pow(b.substitute(rules), *n),
            Expr::Exp(a) => exp_of(a.substitute(rules)),
            Expr::Cos(a) => cos_of(a.substitute(rules)),
            Expr::Sin(a) => sin_of(a.substitute(rules)),
            Expr::Cosh(a) => cosh_of(a.substitute(rules)),
            Expr::Sinh(a) => sinh_of(a.substitute(rules)),
            Expr::Prod(fs) => mul(fs.iter().map(|f| f.substitute(rules)).collect()),
            Expr::Sum(ts) => add(ts.iter().map(|t| t.substitute(rules)).collect()),
        }
    }

    pub fn substitute_symbol(&self, name: &str, value: &Expr) -> Expr {
        let mut rules = BTreeMap::new();
        rules.insert(sym(name), value.clone());
        self.substitute(&rules)
    }

    /// Derivative with respect to a symbol. Derivative markers of the same
    /// base variable gain one order; markers in other variables, and plain
    /// symbols other than `var`, are treated as constants.
    pub fn differentiate(&self, var: &str) -> Expr {
        match self {
            Expr::Num(_) => int(0),
            Expr::Sym(s) => {
                if s == var {
                    int(1)
                } else {
                    int(0)
                }
            }
            Expr::Der(f, vs) => {
                if vs.iter().all(|v| v == var) {
                    let mut vs2 = vs.clone();
                    vs2.push(var.to_string());
                    der(f, vs2)
                } else {
                    int(0)
                }
            }
            Expr::Pow(b, n) => mul(vec![int(*n), pow((**b).clone(), n - 1), b.differentiate(var)]),
            Expr::Exp(a) => mul(vec![a.differentiate(var), exp_of((**a).clone())]),
            Expr::Cos(a) => mul(vec![int(-1), a.differentiate(var), sin_of((**a).clone())]),
            Expr::Sin(a) => mul(vec![a.differentiate(var), cos_of((**a).clone())]),
            Expr::Cosh(a) => mul(vec![a.differentiate(var), sinh_of((**a).clone())]),
            Expr::Sinh(a) => mul(vec![a.differentiate(var), cosh_of((**a).clone())]),
            Expr::Sum(ts) => add(ts.iter().map(|t| t.differentiate(var)).collect()),
            Expr::Prod(fs) => {
                let mut terms = vec![];
                for i in 0..fs.len() {
                    let mut parts: Vec<Expr> = vec![fs[i].differentiate(var)];
                    for (j, f) in fs.iter().enumerate() {
                        if j != i {
                            parts.push(f.clone());
                        }
                    }
                    terms.push(mul(parts));
                }
                add(terms)
            }
        }
    }

    /// Fully distributes products and positive integer powers over sums.
    /// Negative powers of sums are left intact (see `as_ratio`).
    pub fn expand(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Sym(_) | Expr::Der(..) => self.clone(),
            Expr::Exp(a) => exp_of(a.expand()),
            Expr::Cos(a) => cos_of(a.expand()),
            Expr::Sin(a) => sin_of(a.expand()),
            Expr::Cosh(a) => cosh_of(a.expand()),
            Expr::Sinh(a) => sinh_of(a.expand()),
            Expr::Sum(ts) => add(ts.iter().map(|t| t.expand()).collect()),
            Expr::Pow(b, n) => {
                let eb = b.expand();
                if *n > 1 && matches!(eb, Expr::Sum(_)) {
                    let mut acc = eb.clone();
                    for _ in 1..*n {
                        acc = distribute(&acc, &eb);
                    }
                    acc
                } else {
                    pow(eb, *n)
                }
            }
            Expr::Prod(fs) => {
                let mut acc = int(1);
                for f in fs {
                    acc = distribute(&acc, &f.expand());
                }
                acc
            }
        }
    }

    /// Writes the expression as a quotient (numerator, denominator) by
    /// clearing negative integer powers. Neither part is expanded.
    pub fn as_ratio(&self) -> (Expr, Expr) {
        match self {
            Expr::Pow(b, n) if *n < 0 => {
                let (nb, db) = b.as_ratio();
                (pow(db, -n), pow(nb, -n))
            }
            Expr::Pow(b, n) => {
                let (nb, db) = b.as_ratio();
                (pow(nb, *n), pow(db, *n))
            }
            Expr::Prod(fs) => {
                let mut num_acc = int(1);
                let mut den_acc = int(1);
                for f in fs {
                    let (n, d) = f.as_ratio();
                    num_acc = mul(vec![num_acc, n]);
                    den_acc = mul(vec![den_acc, d]);
                }
                (num_acc, den_acc)
            }
            Expr::Sum(ts) => {
                // least common denominator: per distinct factor base, the
                // largest exponent seen across all term denominators
                let parts: Vec<(Expr, BTreeMap<Expr, i64>)> = ts
                    .iter()
                    .map(|t| {
                        let (n, d) = t.as_ratio();
                        (n, Self::factor_powers(&d))
                    })
                    .collect();
                let mut common: BTreeMap<Expr, i64> = BTreeMap::new();
                for (_, d) in &parts {
                    for (b, k) in d {
                        let e = common.entry(b.clone()).or_insert(0);
                        *e = (*e).max(*k);
                    }
                }
                let mut num_terms = vec![];
                for (n, d) in parts {
                    let mut fs = vec![n];
                    for (b, k) in &common {
                        let have = d.get(b).copied().unwrap_or(0);
                        if *k > have {
                            fs.push(pow(b.clone(), k - have));
                        }
                    }
                    num_terms.push(mul(fs));
                }
                let den = mul(common.into_iter().map(|(b, k)| pow(b, k)).collect());
                (add(num_terms), den)
            }
            other => (other.clone(), int(1)),
        }
    }

    /// Multiset of factor bases and positive exponents of a canonical
    /// product (used to take least common denominators).
    fn factor_powers(e: &Expr) -> BTreeMap<Expr, i64> {
        let mut out: BTreeMap<Expr, i64> = BTreeMap::new();
        let fs: Vec<&Expr> = match e {
            Expr::Prod(fs) => fs.iter().collect(),
            other => vec![other],
        };
        for f in fs {
            if f.is_num_one() {
                continue;
            }
            match f {
                Expr::Pow(b, k) if *k > 0 => *out.entry((**b).clone()).or_insert(0) += *k,
                other => *out.entry(other.clone()).or_insert(0) += 1,
            }
        }
        out
    }

    /// True when the expression is identically zero as a rational function:
    /// the expanded numerator of `as_ratio` collapses to the zero normal form.
    pub fn vanishes(&self) -> bool {
        if self.is_num_zero() {
            return true;
        }
        let (n, _) = self.as_ratio();
        n.expand().is_num_zero()
    }

    /// Numeric evaluation with a symbol binding table.
    pub fn eval(&self, bindings: &BTreeMap<String, f64>) -> Result<f64> {
        match self {
            Expr::Num(r) => Ok(r.to_f64()),
            Expr::Sym(s) => bindings
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnboundSymbol(s.clone())),
            Expr::Der(..) => Err(Error::UnexpandedDerivative(self.to_string())),
            Expr::Pow(b, n) => {
                let v = b.eval(bindings)?;
                if *n < 0 && v == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(v.powi(*n as i32))
            }
            Expr::Exp(a) => Ok(a.eval(bindings)?.exp()),
            Expr::Cos(a) => Ok(a.eval(bindings)?.cos()),
            Expr::Sin(a) => Ok(a.eval(bindings)?.sin()),
            Expr::Cosh(a) => Ok(a.eval(bindings)?.cosh()),
            Expr::Sinh(a) => Ok(a.eval(bindings)?.sinh()),
            Expr::Prod(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval(bindings)?;
                }
                Ok(acc)
            }
            Expr::Sum(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.eval(bindings)?;
                }
                Ok(acc)
            }
        }
    }

    /// Like `eval`, but reports a near-singular point whenever a negative
    /// power sees a base magnitude below `guard` (used to skip grid points
    /// next to poles instead of reporting cancellation noise).
    pub fn eval_guarded(&self, bindings: &BTreeMap<String, f64>, guard: f64) -> Result<f64> {
        match self {
            Expr::Pow(b, n) if *n < 0 => {
                let v = b.eval_guarded(bindings, guard)?;
                if v.abs() < guard {
                    return Err(Error::DivisionByZero);
                }
                Ok(v.powi(*n as i32))
            }
            Expr::Pow(b, n) => Ok(b.eval_guarded(bindings, guard)?.powi(*n as i32)),
            Expr::Exp(a) => Ok(a.eval_guarded(bindings, guard)?.exp()),
            Expr::Cos(a) => Ok(a.eval_guarded(bindings, guard)?.cos()),
            Expr::Sin(a) => Ok(a.eval_guarded(bindings, guard)?.sin()),
            Expr::Cosh(a) => Ok(a.eval_guarded(bindings, guard)?.cosh()),
            Expr::Sinh(a) => Ok(a.eval_guarded(bindings, guard)?.sinh()),
            Expr::Prod(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval_guarded(bindings, guard)?;
                }
                Ok(acc)
            }
            Expr::Sum(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.eval_guarded(bindings, guard)?;
                }
                Ok(acc)
            }
            other => other.eval(bindings),
        }
    }
}

fn distribute(a: &Expr, b: &Expr) -> Expr {
    match (a, b) {
        (Expr::Sum(ts), _) => add(ts.iter().map(|t| distribute(t, b)).collect()),
        (_, Expr::Sum(ts)) => add(ts.iter().map(|t| distribute(a, t)).collect()),
        _ => {
            let p = mul(vec![a.clone(), b.clone()]);
            // multiplication can re-create a sum via exponent merging; keep flat
            match p {
                Expr::Sum(_) => p.expand(),
                other => other,
            }
        }
    }
}

// ---- text rendering (parseable by the crate grammar) ----

#[derive(PartialEq, PartialOrd)]
enum Prec {
    Sum,
    Prod,
    Power,
}

fn write_expr(e: &Expr, prec: Prec, out: &mut String) {
    match e {
        Expr::Num(r) => {
            let s = r.to_string();
            if prec == Prec::Sum || (!s.contains(' ') && !s.starts_with('-')) {
                out.push_str(&s);
            } else {
                out.push('(');
                out.push_str(&s);
                out.push(')');
            }
        }
        Expr::Sym(s) => out.push_str(s),
        Expr::Der(f, vs) => {
            if vs.iter().all(|v| v == WAVE_VAR) {
                out.push_str(f);
                for _ in vs {
                    out.push('\'');
                }
            } else {
                out.push_str(f);
                out.push('_');
                for v in vs {
                    out.push_str(v);
                }
            }
        }
        Expr::Pow(b, n) => {
            match **b {
                Expr::Sym(_) | Expr::Der(..) | Expr::Exp(_) | Expr::Cos(_) | Expr::Sin(_) | Expr::Cosh(_) | Expr::Sinh(_) => {
                    write_expr(b, Prec::Power, out)
                }
                _ => {
                    out.push('(');
                    write_expr(b, Prec::Sum, out);
                    out.push(')');
                }
            }
            out.push('^');
            out.push_str(&n.to_string());
        }
        Expr::Exp(a) => func_call("exp", a, out),
        Expr::Cos(a) => func_call("cos", a, out),
        Expr::Sin(a) => func_call("sin", a, out),
        Expr::Cosh(a) => func_call("cosh", a, out),
        Expr::Sinh(a) => func_call("sinh", a, out),
        Expr::Prod(fs) => {
            let needs_paren = prec > Prec::Prod;
            if needs_paren {
                out.push('(');
            }
            let mut rest = &fs[..];
            if let Expr::Num(r) = &fs[0] {
                rest = &fs[1..];
                let (mag, negative) = if r.sign() == std::cmp::Ordering::Less {
                    (r.neg(), true)
                } else {
                    (r.clone(), false)
                };
                if negative {
                    out.push('-');
                }
                if !mag.is_one() || rest.is_empty() {
                    let s = mag.to_string();
                    if s.contains(' ') {
                        out.push('(');
                        out.push_str(&s);
                        out.push(')');
                    } else {
                        out.push_str(&s);
                    }
                    if !rest.is_empty() {
                        out.push('*');
                    }
                }
            }
            for (i, f) in rest.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                write_expr(f, Prec::Prod, out);
            }
            if needs_paren {
                out.push(')');
            }
        }
        Expr::Sum(ts) => {
            let needs_paren = prec > Prec::Sum;
            if needs_paren {
                out.push('(');
            }
            for (i, t) in ts.iter().enumerate() {
                let mut piece = String::new();
                write_expr(t, Prec::Sum, &mut piece);
                if i == 0 {
                    out.push_str(&piece);
                } else if let Some(rest) = piece.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(rest);
                } else {
                    out.push_str(" + ");
                    out.push_str(&piece);
                }
            }
            if needs_paren {
                out.push(')');
            }
        }
    }
}

fn func_call(name: &str, arg: &Expr, out: &mut String) {
    out.push_str(name);
    out.push('(');
    write_expr(arg, Prec::Sum, out);
    out.push(')');
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(self, Prec::Sum, &mut s);
        write!(f, "{}", s)
    }
}
