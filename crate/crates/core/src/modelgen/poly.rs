use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numkernel::BigComplex;

/// Exponent pair `b^b * c^c`, ordered graded-lex with `b > c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { b: 0, c: 0 };

    pub fn new(b: u32, c: u32) -> Self {
        Monomial { b, c }
    }

    pub fn degree(&self) -> u32 {
        self.b + self.c
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.b <= other.b && self.c <= other.c
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then(self.b.cmp(&other.b))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        Monomial { b: self.b + o.b, c: self.c + o.c }
    }
}

/// Sparse polynomial in two variables over Q. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct BivariatePolyQ {
    terms: BTreeMap<Monomial, Rational>,
}

impl BivariatePolyQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(r: Rational) -> Self {
        Self::term(r, 0, 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(Rational::from(v))
    }

    pub fn term(coeff: Rational, b: u32, c: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(b, c), coeff);
        p
    }

    /// The first variable.
    pub fn b() -> Self {
        Self::term(Rational::from(1), 1, 0)
    }

    /// The second variable.
    pub fn c() -> Self {
        Self::term(Rational::from(1), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, u32, u32)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (r, b, c) in it {
            p.add_term(Monomial::new(b, c), r);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, coeff: Rational) {
        if coeff == 0 {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += coeff;
                if *v == 0 {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, b: u32, c: u32) -> Rational {
        self.terms.get(&Monomial::new(b, c)).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_b(&self) -> u32 {
        self.terms.keys().map(|m| m.b).max().unwrap_or(0)
    }

    pub fn degree_c(&self) -> u32 {
        self.terms.keys().map(|m| m.c).max().unwrap_or(0)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if *r == 0 {
            return Self::zero();
        }
        BivariatePolyQ {
            terms: self.terms.iter().map(|(m, v)| (*m, Rational::from(v * r))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial, r: &Rational) -> Self {
        if *r == 0 {
            return Self::zero();
        }
        BivariatePolyQ {
            terms: self.terms.iter().map(|(k, v)| (*k * m, Rational::from(v * r))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Positive rational `k` such that `self / k` has coprime integer
    /// coefficients.
    pub fn content(&self) -> Rational {
        let mut num = Integer::new();
        let mut den = Integer::from(1);
        for v in self.terms.values() {
            num.gcd_mut(v.numer());
            den.lcm_mut(v.denom());
        }
        if num == 0 {
            return Rational::from(1);
        }
        Rational::from((num, den))
    }

    /// Content removed and sign fixed so the leading coefficient is positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut k = self.content();
        if *self.leading().unwrap().1 < 0 {
            k = -k;
        }
        self.scale(&Rational::from(k.recip_ref()))
    }

    /// Multivariate division by a single divisor in the graded-lex order.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let (ld, lc) = d.leading().map(|(m, c)| (*m, c.clone())).expect("division by zero polynomial");
        let mut q = Self::zero();
        let mut r = Self::zero();
        let mut p = self.clone();
        while let Some((m, v)) = p.leading().map(|(m, v)| (*m, v.clone())) {
            if ld.divides(&m) {
                let t = Monomial::new(m.b - ld.b, m.c - ld.c);
                let k = Rational::from(&v / &lc);
                p = &p - &d.mul_monomial(t, &k);
                q.add_term(t, k);
            } else {
                p.terms.remove(&m);
                r.add_term(m, v);
            }
        }
        (q, r)
    }

    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::DivisionFails(format!("remainder {r} after dividing by {d}")))
        }
    }

    /// Divide out the highest power of `d` that divides `self`.
    pub fn remove_factor(&self, d: &Self) -> (Self, u32) {
        let mut p = self.clone();
        let mut k = 0;
        if d.is_constant() || p.is_zero() {
            return (p, 0);
        }
        loop {
            let (q, r) = p.div_rem(d);
            if !r.is_zero() {
                return (p, k);
            }
            p = q;
            k += 1;
        }
    }

    pub fn eval_rational(&self, b: &Rational, c: &Rational) -> Rational {
        let mut acc = Rational::new();
        for (m, v) in &self.terms {
            let mut t = v.clone();
            t *= b.pow_ref_rational(m.b);
            t *= c.pow_ref_rational(m.c);
            acc += t;
        }
        acc
    }

    /// Evaluate with error propagation.
    pub fn eval_complex(&self, b: &BigComplex, c: &BigComplex) -> BigComplex {
        let prec = b.prec().max(c.prec());
        let db = self.degree_b();
        let dc = self.degree_c();
        let mut bp = vec![BigComplex::one(prec)];
        for i in 0..db as usize {
            let next = &bp[i] * b;
            bp.push(next);
        }
        let mut cp = vec![BigComplex::one(prec)];
        for i in 0..dc as usize {
            let next = &cp[i] * c;
            cp.push(next);
        }
        let mut acc = BigComplex::zero(prec);
        for (m, v) in &self.terms {
            let t = (&bp[m.b as usize] * &cp[m.c as usize]).mul_rational(v);
            acc = &acc + &t;
        }
        acc
    }

    /// Substitute polynomials for both variables.
    pub fn substitute(&self, b: &Self, c: &Self) -> Self {
        let mut bp = vec![Self::one()];
        for i in 0..self.degree_b() as usize {
            let next = &bp[i] * b;
            bp.push(next);
        }
        let mut cp = vec![Self::one()];
        for i in 0..self.degree_c() as usize {
            let next = &cp[i] * c;
            cp.push(next);
        }
        let mut acc = Self::zero();
        for (m, v) in &self.terms {
            acc = &acc + &(&bp[m.b as usize] * &cp[m.c as usize]).scale(v);
        }
        acc
    }

    /// Canonical text with the given variable names.
    pub fn to_text_with(&self, vars: [&str; 2]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, v)) in self.terms().enumerate() {
            let neg = *v < 0;
            let abs = Rational::from(v.abs_ref());
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if abs != 1 || *m == Monomial::ONE {
                factors.push(abs.to_string());
            }
            for (e, name) in [(m.b, vars[0]), (m.c, vars[1])] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.to_text_with(["b", "c"])
    }

    /// Parse the canonical text form (any term order is accepted).
    pub fn parse_with(s: &str, vars: [&str; 2]) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("polynomial '{s}': {why}"));
        let compact: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i == 0 && cur.is_empty()) {
                if cur.is_empty() {
                    return Err(bad("dangling sign"));
                }
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if ch == '-' {
                neg = true;
            } else if ch == '+' {
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad("dangling sign"));
        }
        terms.push((neg, cur));
        let mut p = Self::zero();
        for (neg, t) in terms {
            let mut coeff = Rational::from(1);
            let mut m = Monomial::ONE;
            for f in t.split('*') {
                let (base, exp) = match f.split_once('^') {
                    Some((a, e)) => (a, e.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (f, 1),
                };
                if base == vars[0] {
                    m.b += exp;
                } else if base == vars[1] {
                    m.c += exp;
                } else {
                    let r: Rational = base.parse().map_err(|_| bad("bad coefficient"))?;
                    coeff *= r.pow_ref_rational(exp);
                }
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(m, coeff);
        }
        Ok(p)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with(s, ["b", "c"])
    }

    /// `{"vars": [..], "terms": [{"coeff": "p/q", "exp": [i, j]}, ..]}` in
    /// descending order.
    pub fn to_json_with(&self, vars: [&str; 2]) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms()
            .map(|(m, v)| serde_json::json!({ "coeff": rational_string(v), "exp": [m.b, m.c] }))
            .collect();
        serde_json::json!({ "vars": vars, "terms": terms })
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.to_json_with(["b", "c"])
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("polynomial JSON: {why}"));
        let terms = v.get("terms").and_then(|t| t.as_array()).ok_or_else(|| bad("missing terms"))?;
        let mut p = Self::zero();
        for t in terms {
            let coeff: Rational = t
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| bad("missing coeff"))?
                .parse()
                .map_err(|_| bad("bad coeff"))?;
            let exp = t.get("exp").and_then(|e| e.as_array()).ok_or_else(|| bad("missing exp"))?;
            if exp.len() != 2 {
                return Err(bad("exp must have two entries"));
            }
            let e0 = exp[0].as_u64().ok_or_else(|| bad("bad exp"))? as u32;
            let e1 = exp[1].as_u64().ok_or_else(|| bad("bad exp"))? as u32;
            p.add_term(Monomial::new(e0, e1), coeff);
        }
        Ok(p)
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

trait PowRational {
    fn pow_ref_rational(&self, e: u32) -> Rational;
}

impl PowRational for Rational {
    fn pow_ref_rational(&self, e: u32) -> Rational {
        let mut acc = Rational::from(1);
        for _ in 0..e {
            acc *= self;
        }
        acc
    }
}

impl fmt::Display for BivariatePolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a BivariatePolyQ> for &'a BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn add(self, rhs: &'a BivariatePolyQ) -> BivariatePolyQ {
        let mut r = self.clone();
        for (m, v) in &rhs.terms {
            r.add_term(*m, v.clone());
        }
        r
    }
}

impl<'a> Sub<&'a BivariatePolyQ> for &'a BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn sub(self, rhs: &'a BivariatePolyQ) -> BivariatePolyQ {
        let mut r = self.clone();
        for (m, v) in &rhs.terms {
            r.add_term(*m, Rational::from(-v));
        }
        r
    }
}

impl<'a> Mul<&'a BivariatePolyQ> for &'a BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn mul(self, rhs: &'a BivariatePolyQ) -> BivariatePolyQ {
        let mut r = BivariatePolyQ::zero();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &rhs.terms {
                r.add_term(*m1 * *m2, Rational::from(v1 * v2));
            }
        }
        r
    }
}

impl Neg for &BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn neg(self) -> BivariatePolyQ {
        self.scale(&Rational::from(-1))
    }
}

impl Add for BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for BivariatePolyQ {
    type Output = BivariatePolyQ;
    fn neg(self) -> Self {
        -&self
    }
}
