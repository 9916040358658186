use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::RemRounding;
use rug::{Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numkernel::BigComplex;

/// `x + y*tau` with `tau^2 = trace*tau - norm`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KElement {
    pub x: Rational,
    pub y: Rational,
    trace: i64,
    norm: i64,
}

impl KElement {
    pub fn new(x: Rational, y: Rational, field: &ImagQuadField) -> Self {
        KElement { x, y, trace: field.tau_trace, norm: field.tau_norm }
    }

    fn with(&self, x: Rational, y: Rational) -> Self {
        KElement { x, y, trace: self.trace, norm: self.norm }
    }

    pub fn zero_like(&self) -> Self {
        self.with(Rational::new(), Rational::new())
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn conj(&self) -> Self {
        // conj(tau) = trace - tau
        self.with(&self.x + &self.y * Rational::from(self.trace) , Rational::from(-&self.y))
    }

    /// `x^2 + trace*x*y + norm*y^2`.
    pub fn norm(&self) -> Rational {
        let t = Rational::from(self.trace);
        let n = Rational::from(self.norm);
        Rational::from(self.x.square_ref()) + t * Rational::from(&self.x * &self.y) + n * Rational::from(self.y.square_ref())
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.x * 2u32) + Rational::from(&self.y * self.trace)
    }

    /// Panics on zero.
    pub fn inverse(&self) -> Self {
        let n = self.norm();
        assert!(n != 0, "inverse of zero");
        let c = self.conj();
        self.with(Rational::from(&c.x / &n), Rational::from(&c.y / &n))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.with(Rational::from(&self.x * r), Rational::from(&self.y * r))
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        self.with(Rational::from(&self.x + r), self.y.clone())
    }

    pub fn is_integral(&self) -> bool {
        *self.x.denom() == 1 && *self.y.denom() == 1
    }

    /// Coordinates as a column in the basis `(1, tau)`.
    pub fn coords(&self) -> [Rational; 2] {
        [self.x.clone(), self.y.clone()]
    }

    /// Numerical value at `prec` bits.
    pub fn to_complex(&self, prec: u32) -> BigComplex {
        let tau = tau_numeric(self.trace, self.norm, prec);
        let x = BigComplex::from_rationals(&self.x, &Rational::new(), prec);
        &x + &tau.mul_rational(&self.y)
    }
}

fn tau_numeric(trace: i64, norm: i64, prec: u32) -> BigComplex {
    // tau = (trace + sqrt(trace^2 - 4 norm)) / 2
    let disc = Rational::from(trace * trace - 4 * norm);
    let s = BigComplex::sqrt_rational(&disc, prec);
    (&BigComplex::from_i64(trace, prec) + &s).div_i64(2)
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x == 0, self.y == 0) {
            (_, true) => write!(f, "{}", self.x),
            (true, false) => write!(f, "{}*tau", self.y),
            _ => {
                if self.y < 0 {
                    write!(f, "{} - {}*tau", self.x, Rational::from(-&self.y))
                } else {
                    write!(f, "{} + {}*tau", self.x, self.y)
                }
            }
        }
    }
}

impl Serialize for KElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KElement", 2)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.end()
    }
}

impl<'a> Add<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn add(self, o: &'a KElement) -> KElement {
        self.with(Rational::from(&self.x + &o.x), Rational::from(&self.y + &o.y))
    }
}

impl<'a> Sub<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn sub(self, o: &'a KElement) -> KElement {
        self.with(Rational::from(&self.x - &o.x), Rational::from(&self.y - &o.y))
    }
}

impl<'a> Mul<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn mul(self, o: &'a KElement) -> KElement {
        // (x1 + y1 t)(x2 + y2 t) with t^2 = T t - N
        let yy = Rational::from(&self.y * &o.y);
        let x = Rational::from(&self.x * &o.x) - Rational::from(&yy * self.norm);
        let y = Rational::from(&self.x * &o.y) + Rational::from(&self.y * &o.x) + yy * Rational::from(self.trace);
        self.with(x, y)
    }
}

impl<'a> Div<&'a KElement> for &'a KElement {
    type Output = KElement;
    fn div(self, o: &'a KElement) -> KElement {
        self * &o.inverse()
    }
}

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        self.with(Rational::from(-&self.x), Rational::from(-&self.y))
    }
}

/// Q(sqrt D) with its integral basis `(1, tau)` and the generator
/// `theta = sqrt(dK)/2` or `(-1 + sqrt(dK))/2` of the maximal order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ImagQuadField {
    pub d: i64,
    pub dk: i64,
    /// `tau^2 = tau_trace*tau - tau_norm`.
    pub tau_trace: i64,
    pub tau_norm: i64,
    /// `theta^2 + b_theta*theta + c_theta = 0`.
    pub b_theta: i64,
    pub c_theta: i64,
}

pub fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    let mut q = 2u64;
    while q * q <= m {
        if m.is_multiple_of(q * q) {
            return false;
        }
        if m.is_multiple_of(q) {
            m /= q;
        }
        q += 1;
    }
    true
}

impl ImagQuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !is_squarefree(d) {
            return Err(Error::InvalidD(d));
        }
        let f = if d.rem_euclid(4) == 1 {
            ImagQuadField { d, dk: d, tau_trace: 1, tau_norm: (1 - d) / 4, b_theta: 1, c_theta: (1 - d) / 4 }
        } else {
            ImagQuadField { d, dk: 4 * d, tau_trace: 0, tau_norm: -d, b_theta: 0, c_theta: -d }
        };
        Ok(f)
    }

    pub fn elem(&self, x: impl Into<Rational>, y: impl Into<Rational>) -> KElement {
        KElement::new(x.into(), y.into(), self)
    }

    pub fn int(&self, k: i64) -> KElement {
        self.elem(k, 0)
    }

    pub fn tau(&self) -> KElement {
        self.elem(0, 1)
    }

    pub fn theta(&self) -> KElement {
        self.elem(-self.b_theta, 1)
    }

    /// `sqrt(dK)`, equal to `2*tau - trace`.
    pub fn sqrt_dk(&self) -> KElement {
        self.elem(-self.tau_trace, 2)
    }

    /// `(-b + sqrt(dK)) / (2a)` for the form `(a, b, c)`.
    pub fn theta_form(&self, a: i64, b: i64) -> KElement {
        self.sqrt_dk().add_rational(&Rational::from(-b)).scale(&Rational::from((1, 2 * a)))
    }

    /// `(a + tau) / c`.
    pub fn tau_prime(&self, a: i64, c: i64) -> KElement {
        self.elem(Rational::from((a, c)), Rational::from((1, c)))
    }
}

impl Serialize for ImagQuadField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ImagQuadField", 7)?;
        st.serialize_field("D", &self.d)?;
        st.serialize_field("dK", &self.dk)?;
        st.serialize_field("tauK", &self.tau())?;
        st.serialize_field("tauMinPoly", &[self.tau_norm, -self.tau_trace, 1])?;
        st.serialize_field("theta", &self.theta())?;
        st.serialize_field("Btheta", &self.b_theta)?;
        st.serialize_field("Ctheta", &self.c_theta)?;
        st.end()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Behaviour of `p` in the field; `p` is assumed prime.
pub fn prime_splitting(p: u64, field: &ImagQuadField) -> Splitting {
    let dk = Integer::from(field.dk);
    if dk.is_divisible(&Integer::from(p)) {
        return Splitting::Ramified;
    }
    if p == 2 {
        // dK is odd here, so dK = 1 mod 8 splits and dK = 5 mod 8 is inert
        return if field.dk.rem_euclid(8) == 1 { Splitting::Split } else { Splitting::Inert };
    }
    match dk.legendre(&Integer::from(p)) {
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

/// `v_p(r)` for nonzero `r`; `i64::MAX` for zero.
pub fn valuation(r: &Rational, p: u64) -> i64 {
    if *r == 0 {
        return i64::MAX;
    }
    let pz = Integer::from(p);
    let count = |n: &Integer| {
        let mut n = n.clone().abs();
        let mut k = 0i64;
        while n.is_divisible(&pz) {
            n /= &pz;
            k += 1;
        }
        k
    };
    count(r.numer()) - count(r.denom())
}

/// `r mod p^k` for `p`-integral `r`.
pub fn reduce_mod(r: &Rational, modulus: &Integer) -> Option<Integer> {
    let inv = r.denom().clone().invert(modulus).ok()?;
    Some((Integer::from(r.numer() * &inv)).rem_euc(modulus))
}
