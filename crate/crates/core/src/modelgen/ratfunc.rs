use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Rational;

use super::gcd::poly_gcd;
use super::poly::BivariatePolyQ;

/// Reduced fraction of polynomials; the denominator has coprime integer
/// coefficients and a positive leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFuncQ {
    num: BivariatePolyQ,
    den: BivariatePolyQ,
}

impl RatFuncQ {
    /// Panics when `den` is zero.
    pub fn new(num: BivariatePolyQ, den: BivariatePolyQ) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides numerator"), den.div_exact(&g).expect("gcd divides denominator"))
        };
        let mut k = den.content();
        if *den.leading().unwrap().1 < 0 {
            k = -k;
        }
        let inv = Rational::from(k.recip_ref());
        RatFuncQ { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: BivariatePolyQ) -> Self {
        RatFuncQ { num: p, den: BivariatePolyQ::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(BivariatePolyQ::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(BivariatePolyQ::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_poly(BivariatePolyQ::from_i64(v))
    }

    pub fn b() -> Self {
        Self::from_poly(BivariatePolyQ::b())
    }

    pub fn c() -> Self {
        Self::from_poly(BivariatePolyQ::c())
    }

    pub fn numer(&self) -> &BivariatePolyQ {
        &self.num
    }

    pub fn denom(&self) -> &BivariatePolyQ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        RatFuncQ::new(self.num.scale(&Rational::from(k)), self.den.clone())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        RatFuncQ::new(self.den.clone(), self.num.clone())
    }

    pub fn to_text(&self) -> String {
        let wrap = |p: &BivariatePolyQ| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den == BivariatePolyQ::one() {
            self.num.to_string()
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Display for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a RatFuncQ> for &'a RatFuncQ {
    type Output = RatFuncQ;
    fn add(self, o: &'a RatFuncQ) -> RatFuncQ {
        if self.den == o.den {
            return RatFuncQ::new(&self.num + &o.num, self.den.clone());
        }
        RatFuncQ::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RatFuncQ> for &'a RatFuncQ {
    type Output = RatFuncQ;
    fn sub(self, o: &'a RatFuncQ) -> RatFuncQ {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFuncQ> for &'a RatFuncQ {
    type Output = RatFuncQ;
    fn mul(self, o: &'a RatFuncQ) -> RatFuncQ {
        RatFuncQ::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatFuncQ> for &'a RatFuncQ {
    type Output = RatFuncQ;
    fn div(self, o: &'a RatFuncQ) -> RatFuncQ {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFuncQ::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RatFuncQ {
    type Output = RatFuncQ;
    fn neg(self) -> RatFuncQ {
        RatFuncQ { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePolyQ {
        BivariatePolyQ::parse(s).unwrap()
    }

    #[test]
    fn fractions_reduce() {
        let f = RatFuncQ::new(&p("b - c") * &p("b"), &p("2*b - 2*c") * &p("c"));
        assert_eq!(f.numer(), &p("1/2*b"));
        assert_eq!(f.denom(), &p("c"));
    }

    #[test]
    fn denominator_sign_is_positive() {
        let f = RatFuncQ::new(p("b"), p("-c"));
        assert_eq!(f.to_text(), "-b/c");
    }

    #[test]
    fn field_identities() {
        let x = RatFuncQ::new(p("b^2 - c"), p("b + c^2"));
        let y = RatFuncQ::new(p("c"), p("b - 1"));
        assert_eq!(&(&x + &y) - &y, x);
        assert_eq!(&(&x * &y) / &y, x);
        assert_eq!(&x * &x.recip(), RatFuncQ::one());
    }
}
