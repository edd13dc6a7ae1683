//! LaTeX rendering of expressions.
//!
//! Mirrors the plain-text printer's precedence rules but writes LaTeX:
//! greek symbol names get a backslash, subscripted coefficient names become
//! real subscripts, negative powers in products turn into fractions, and the
//! exponential renders as a power of e.

use crate::expr::{Expr, WAVE_VAR};

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "theta", "kappa", "lambda",
    "mu", "nu", "xi", "rho", "sigma", "tau", "phi", "chi", "psi", "omega",
];

fn sym_latex(name: &str) -> String {
    if GREEK.contains(&name) {
        return format!("\\{}", name);
    }
    if name.chars().count() == 1 {
        return name.to_string();
    }
    // coefficient families: b2 → b_{2}, a_m1 → a_{-1}
    let mut chars = name.chars();
    let head = chars.next().expect("nonempty symbol");
    let tail: String = chars.collect();
    if head.is_ascii_alphabetic() {
        if tail.chars().all(|c| c.is_ascii_digit()) {
            return format!("{}_{{{}}}", head, tail);
        }
        if let Some(digits) = tail.strip_prefix("_m") {
            if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                return format!("{}_{{-{}}}", head, digits);
            }
        }
    }
    format!("\\mathit{{{}}}", name)
}

/// LaTeX for an expression, suitable inside math mode.
pub fn latex(e: &Expr) -> String {
    let mut s = String::new();
    write_latex(e, Ctx::Sum, &mut s);
    s
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ctx {
    Sum,
    Prod,
    Power,
}

fn write_latex(e: &Expr, ctx: Ctx, out: &mut String) {
    match e {
        Expr::Num(r) => {
            let s = r.latex();
            let compound = s.contains('+') || s.contains(" - ");
            if ctx == Ctx::Sum || (!compound && !s.starts_with('-')) {
                out.push_str(&s);
            } else {
                out.push_str("\\left(");
                out.push_str(&s);
                out.push_str("\\right)");
            }
        }
        Expr::Sym(s) => out.push_str(&sym_latex(s)),
        Expr::Der(f, vs) => {
            if vs.iter().all(|v| v == WAVE_VAR) {
                out.push_str(&sym_latex(f));
                for _ in vs {
                    out.push('\'');
                }
            } else {
                out.push_str(&sym_latex(f));
                out.push_str("_{");
                for v in vs {
                    out.push_str(v);
                }
                out.push('}');
            }
        }
        Expr::Pow(b, n) => {
            match **b {
                Expr::Sym(_) | Expr::Der(..) | Expr::Exp(_) => write_latex(b, Ctx::Power, out),
                Expr::Cos(_) | Expr::Sin(_) | Expr::Cosh(_) | Expr::Sinh(_) => {
                    write_latex(b, Ctx::Power, out)
                }
                _ => {
                    out.push_str("\\left(");
                    write_latex(b, Ctx::Sum, out);
                    out.push_str("\\right)");
                }
            }
            out.push_str(&format!("^{{{}}}", n));
        }
        Expr::Exp(a) => {
            out.push_str("e^{");
            write_latex(a, Ctx::Sum, out);
            out.push('}');
        }
        Expr::Cos(a) => func_latex("\\cos", a, out),
        Expr::Sin(a) => func_latex("\\sin", a, out),
        Expr::Cosh(a) => func_latex("\\cosh", a, out),
        Expr::Sinh(a) => func_latex("\\sinh", a, out),
        Expr::Prod(fs) => write_product(fs, ctx, out),
        Expr::Sum(ts) => {
            let needs_paren = ctx > Ctx::Sum;
            if needs_paren {
                out.push_str("\\left(");
            }
            for (i, t) in ts.iter().enumerate() {
                let mut piece = String::new();
                write_latex(t, Ctx::Sum, &mut piece);
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
                out.push_str("\\right)");
            }
        }
    }
}

fn func_latex(name: &str, arg: &Expr, out: &mut String) {
    out.push_str(name);
    out.push_str("\\left(");
    write_latex(arg, Ctx::Sum, out);
    out.push_str("\\right)");
}

/// Products render negative powers as a fraction and join the rest by
/// juxtaposition; a leading numeric factor keeps its sign out front, and a
/// rational coefficient splits across the fraction bar when one appears.
fn write_product(fs: &[Expr], ctx: Ctx, out: &mut String) {
    let mut numerator: Vec<Expr> = vec![];
    let mut denominator: Vec<Expr> = vec![];
    let mut sign = "";
    let mut coeff: Option<crate::radical::Radical> = None;
    for (i, f) in fs.iter().enumerate() {
        match f {
            Expr::Num(r) if i == 0 => {
                let (mag, neg) = if r.sign() == std::cmp::Ordering::Less {
                    (r.neg(), true)
                } else {
                    (r.clone(), false)
                };
                if neg {
                    sign = "-";
                }
                if !mag.is_one() {
                    coeff = Some(mag);
                }
            }
            Expr::Pow(b, n) if *n < 0 => {
                if *n == -1 {
                    denominator.push((**b).clone());
                } else {
                    denominator.push(Expr::Pow(b.clone(), -*n));
                }
            }
            other => numerator.push(other.clone()),
        }
    }
    let guard = |s: String| -> String {
        if s.contains('+') || s.contains(" - ") {
            format!("\\left({}\\right)", s)
        } else {
            s
        }
    };
    // a rational p/q coefficient contributes p above the bar and q below it
    let (mut num_pre, mut den_pre) = (None::<String>, None::<String>);
    match &coeff {
        Some(mag) if !denominator.is_empty() => {
            if let Some(q) = mag.as_rational() {
                if !num::One::is_one(q.numer()) {
                    num_pre = Some(q.numer().to_string());
                }
                if !num::One::is_one(q.denom()) {
                    den_pre = Some(q.denom().to_string());
                }
            } else {
                num_pre = Some(guard(mag.latex()));
            }
        }
        Some(mag) => num_pre = Some(guard(mag.latex())),
        None => {}
    }
    let join = |parts: &[Expr], pre: &Option<String>| -> String {
        let mut s = pre.clone().unwrap_or_default();
        for p in parts {
            if !s.is_empty() {
                s.push_str("\\,");
            }
            write_latex(p, Ctx::Prod, &mut s);
        }
        if s.is_empty() {
            "1".to_string()
        } else {
            s
        }
    };
    let needs_paren = ctx > Ctx::Prod;
    if needs_paren {
        out.push_str("\\left(");
    }
    out.push_str(sign);
    if denominator.is_empty() {
        out.push_str(&join(&numerator, &num_pre));
    } else {
        out.push_str(&format!(
            "\\frac{{{}}}{{{}}}",
            join(&numerator, &num_pre),
            join(&denominator, &den_pre)
        ));
    }
    if needs_paren {
        out.push_str("\\right)");
    }
}
