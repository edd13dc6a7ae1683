//! Exact numbers of the form r0 + sum(ci * sqrt(di)) with rational r0, ci and
//! squarefree integer radicands di > 1. Closed under +, -, *, and inversion,
//! so equality is decidable by normal form.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, Integer, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact real number: rational part plus rational multiples of square roots
/// of distinct squarefree integers > 1. Terms sorted by radicand, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radical {
    rat: BigRational,
    terms: Vec<(BigUint, BigRational)>,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Splits n > 0 as k^2 * m with m squarefree, by trial division plus a
/// perfect-square check on the unfactored remainder.
fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut p = BigUint::from(2u32);
    let limit = BigUint::from(100_000u32);
    while &p * &p <= rest && p <= limit {
        let mut mult = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            mult += 1;
        }
        for _ in 0..mult / 2 {
            square *= &p;
        }
        if mult % 2 == 1 {
            free *= &p;
        }
        p += 1u32;
    }
    if !rest.is_one() {
        let root = rest.sqrt();
        if &root * &root == rest {
            square *= root;
        } else {
            free *= rest;
        }
    }
    (square, free)
}

impl Radical {
    pub fn zero() -> Self {
        Radical { rat: BigRational::zero(), terms: vec![] }
    }

    pub fn one() -> Self {
        Radical { rat: BigRational::one(), terms: vec![] }
    }

    pub fn from_integer(n: i64) -> Self {
        Radical { rat: big(n), terms: vec![] }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Radical { rat: BigRational::new(BigInt::from(num), BigInt::from(den)), terms: vec![] }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Radical { rat: q, terms: vec![] }
    }

    fn from_terms(rat: BigRational, mut terms: Vec<(BigUint, BigRational)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Radical { rat, terms }
    }

    /// sqrt of a nonnegative rational, e.g. sqrt(25/6) = 5/6 * sqrt(6).
    pub fn sqrt_rational(q: &BigRational) -> Option<Radical> {
        match q.numer().sign() {
            num::bigint::Sign::Minus => return None,
            num::bigint::Sign::NoSign => return Some(Radical::zero()),
            _ => {}
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let p = q.numer().to_biguint().unwrap();
        let d = q.denom().to_biguint().unwrap();
        let (k, m) = squarefree_split(&(&p * &d));
        let coeff = BigRational::new(BigInt::from(k), BigInt::from(d));
        if m.is_one() {
            Some(Radical::from_rational(coeff))
        } else {
            Some(Radical::from_terms(BigRational::zero(), vec![(m, coeff)]))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.terms.is_empty() {
            Some(&self.rat)
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn is_integer(&self) -> bool {
        self.terms.is_empty() && self.rat.is_integer()
    }

    pub fn neg(&self) -> Radical {
        Radical {
            rat: -self.rat.clone(),
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Radical) -> Radical {
        let mut terms = self.terms.clone();
        for (d, c) in &other.terms {
            match terms.iter_mut().find(|(e, _)| e == d) {
                Some((_, acc)) => *acc += c,
                None => terms.push((d.clone(), c.clone())),
            }
        }
        Radical::from_terms(&self.rat + &other.rat, terms)
    }

    pub fn sub(&self, other: &Radical) -> Radical {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Radical) -> Radical {
        let mut rat = &self.rat * &other.rat;
        let mut terms: Vec<(BigUint, BigRational)> = vec![];
        let mut push = |d: BigUint, c: BigRational| {
            if c.is_zero() {
                return;
            }
            match terms.iter_mut().find(|(e, _)| *e == d) {
                Some((_, acc)) => *acc += c,
                None => terms.push((d, c)),
            }
        };
        for (d, c) in &self.terms {
            push(d.clone(), c * &other.rat);
        }
        for (d, c) in &other.terms {
            push(d.clone(), c * &self.rat);
        }
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                // sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)*(d2/g)) with g = gcd
                let g = d1.gcd(d2);
                let m = (d1 / &g) * (d2 / &g);
                let c = c1 * c2 * BigRational::from_integer(BigInt::from(g));
                if m.is_one() {
                    rat += c;
                } else {
                    push(m, c);
                }
            }
        }
        Radical::from_terms(rat, terms)
    }

    /// Conjugation that flips the sign of every term whose radicand is
    /// divisible by the prime p; self * conjugate(p) has no sqrt(p) factor.
    fn conjugate(&self, p: &BigUint) -> Radical {
        Radical {
            rat: self.rat.clone(),
            terms: self
                .terms
                .iter()
                .map(|(d, c)| {
                    if (d % p).is_zero() {
                        (d.clone(), -c.clone())
                    } else {
                        (d.clone(), c.clone())
                    }
                })
                .collect(),
        }
    }

    fn smallest_prime_factor(n: &BigUint) -> BigUint {
        let mut p = BigUint::from(2u32);
        while &p * &p <= *n {
            if (n % &p).is_zero() {
                return p;
            }
            p += 1u32;
        }
        n.clone()
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self) -> Option<Radical> {
        if self.is_zero() {
            return None;
        }
        let mut num = Radical::one();
        let mut den = self.clone();
        let mut guard = 0;
        while !den.is_rational() {
            let p = Self::smallest_prime_factor(&den.terms[0].0);
            let conj = den.conjugate(&p);
            num = num.mul(&conj);
            den = den.mul(&conj);
            guard += 1;
            assert!(guard < 64, "radical inversion failed to terminate");
        }
        if den.rat.is_zero() {
            return None;
        }
        let inv_rat = Radical::from_rational(den.rat.recip());
        Some(num.mul(&inv_rat))
    }

    pub fn pow(&self, n: i64) -> Option<Radical> {
        if n < 0 {
            return self.inv().map(|i| i.pow(-n).unwrap());
        }
        let mut acc = Radical::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Some(acc)
    }

    /// Square root within the tower: exact for nonnegative rationals, and for
    /// a + b*sqrt(r) when a^2 - b^2 r is the square of a rational (denesting).
    /// None when the result would leave the representable field or be complex.
    pub fn sqrt(&self) -> Option<Radical> {
        if let Some(q) = self.as_rational() {
            return Radical::sqrt_rational(q);
        }
        if self.terms.len() == 1 {
            let a = &self.rat;
            let (r, b) = &self.terms[0];
            let r_rat = BigRational::from_integer(BigInt::from(r.clone()));
            let disc = a * a - b * b * &r_rat;
            let s = Radical::sqrt_rational(&disc)?;
            let s = s.as_rational()?.clone();
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let x = (a + &s) * &half;
            let y = (a - &s) * &half;
            let sx = Radical::sqrt_rational(&x)?;
            let sy = Radical::sqrt_rational(&y)?;
            let candidate = if b.is_negative() { sx.sub(&sy) } else { sx.add(&sy) };
            if candidate.mul(&candidate) == *self {
                return Some(candidate);
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.rat.to_f64().unwrap_or(f64::NAN);
        for (d, c) in &self.terms {
            v += c.to_f64().unwrap_or(f64::NAN) * d.to_f64().unwrap_or(f64::NAN).sqrt();
        }
        v
    }

    /// LaTeX form, e.g. `\frac{5}{6}\sqrt{6}` or `\frac{1}{2} + \sqrt{2}`.
    pub fn latex(&self) -> String {
        fn rat_latex(q: &BigRational) -> String {
            if q.is_integer() {
                q.numer().to_string()
            } else if q.is_negative() {
                format!("-\\frac{{{}}}{{{}}}", -q.numer(), q.denom())
            } else {
                format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
            }
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = vec![];
        if !self.rat.is_zero() {
            parts.push(rat_latex(&self.rat));
        }
        for (d, c) in &self.terms {
            let root = format!("\\sqrt{{{}}}", d);
            let piece = if c.is_one() {
                root
            } else if (-c.clone()).is_one() {
                format!("-{}", root)
            } else {
                format!("{}{}", rat_latex(c), root)
            };
            parts.push(piece);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    /// Sign of the number. Exact for rationals; for genuine radical values the
    /// f64 estimate is decisive at the magnitudes this crate produces.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        let v = self.to_f64();
        if v > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl fmt::Display for Radical {
    /// Exact text form, parseable by the expression grammar,
    /// e.g. "5/6*sqrt(6)" or "1/2 + sqrt(2)".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rat_str(q: &BigRational) -> String {
            if q.is_integer() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = vec![];
        if !self.rat.is_zero() {
            parts.push(rat_str(&self.rat));
        }
        for (d, c) in &self.terms {
            let root = format!("sqrt({})", d);
            let piece = if c.is_one() {
                root
            } else if (-c.clone()).is_one() {
                format!("-{}", root)
            } else {
                format!("{}*{}", rat_str(c), root)
            };
            parts.push(piece);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{}", out)
    }
}
