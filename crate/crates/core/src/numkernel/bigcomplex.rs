use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

/// Slack added to magnitude estimates so that upper bounds stay upper bounds
/// after the f64 round trip.
const LOG_SLACK: f64 = 1e-9;

/// log2 |x|, or -inf for zero.
pub(crate) fn log2_abs_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    e as f64 + m.abs().log2()
}

/// log2(2^a + 2^b).
pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// log2(2^a - 2^b), -inf when a <= b.
fn log2_sub(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a <= b {
        return f64::NEG_INFINITY;
    }
    a + (1.0 - (b - a).exp2()).log2()
}

/// Complex number with arbitrary-precision components and an absolute error
/// radius: the exact quantity lies in the closed disc of radius `2^err` around
/// the stored value.
#[derive(Clone, Debug)]
pub struct BigComplex {
    z: Complex,
    err: f64,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        Self::exact(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn i(prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, (0, 1)))
    }

    /// Integers below 2^prec are represented exactly.
    pub fn from_i64(v: i64, prec: u32) -> Self {
        let c = Complex::with_val(prec, (v, 0));
        let err = if (v.unsigned_abs() as f64).log2() < prec as f64 {
            f64::NEG_INFINITY
        } else {
            rounding_log2(&c, prec)
        };
        BigComplex { z: c, err }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        let c = Complex::with_val(prec, (re, im));
        let exact = c.real().to_rational().unwrap_or_default() == *re
            && c.imag().to_rational().unwrap_or_default() == *im;
        let err = if exact { f64::NEG_INFINITY } else { rounding_log2(&c, prec) };
        BigComplex { z: c, err }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, (re, im)))
    }

    pub fn from_floats(re: Float, im: Float, err_log2: f64) -> Self {
        let prec = re.prec().max(im.prec());
        BigComplex { z: Complex::with_val(prec, (re, im)), err: err_log2 }
    }

    pub fn from_complex(z: Complex, err_log2: f64) -> Self {
        BigComplex { z, err: err_log2 }
    }

    fn exact(z: Complex) -> Self {
        BigComplex { z, err: f64::NEG_INFINITY }
    }

    /// pi, rounded to `prec` bits.
    pub fn pi(prec: u32) -> Self {
        let pi = Float::with_val(prec, Constant::Pi);
        let err = log2_abs_float(&pi) - prec as f64 + 1.0;
        BigComplex { z: Complex::with_val(prec, (pi, 0)), err }
    }

    /// Principal square root of a real rational, real or purely imaginary.
    pub fn sqrt_rational(r: &Rational, prec: u32) -> Self {
        let abs = Float::with_val(prec, r.clone().abs()).sqrt();
        let err = log2_abs_float(&abs) - prec as f64 + 2.0;
        let z = if *r < 0 {
            Complex::with_val(prec, (0, abs))
        } else {
            Complex::with_val(prec, (abs, 0))
        };
        BigComplex { z, err }
    }

    pub fn prec(&self) -> u32 {
        let (a, b) = self.z.prec();
        a.max(b)
    }

    pub fn re(&self) -> &Float {
        self.z.real()
    }

    pub fn im(&self) -> &Float {
        self.z.imag()
    }

    pub fn as_complex(&self) -> &Complex {
        &self.z
    }

    /// log2 of the error radius (-inf when exact).
    pub fn err_log2(&self) -> f64 {
        self.err
    }

    /// Integer exponent of the error radius, `ceil(log2 radius)`.
    /// `i64::MIN` for exact values and `i64::MAX` for unbounded ones.
    pub fn err_exp(&self) -> i64 {
        if self.err == f64::NEG_INFINITY {
            i64::MIN
        } else if !self.err.is_finite() {
            i64::MAX
        } else {
            self.err.ceil() as i64
        }
    }

    pub fn with_err_log2(mut self, err: f64) -> Self {
        self.err = err;
        self
    }

    /// Widen the radius by `2^extra`.
    pub fn add_err_log2(mut self, extra: f64) -> Self {
        self.err = log2_add(self.err, extra);
        self
    }

    /// Change the mantissa size; shrinking adds the rounding error.
    pub fn set_prec(&mut self, prec: u32) {
        if prec < self.prec() {
            let r = rounding_log2(&self.z, prec);
            self.err = log2_add(self.err, r);
        }
        self.z.set_prec(prec);
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.set_prec(prec);
        self
    }

    /// Upper bound for log2 |z|.
    pub fn abs_log2(&self) -> f64 {
        let lr = log2_abs_float(self.z.real());
        let li = log2_abs_float(self.z.imag());
        let (hi, lo) = if lr >= li { (lr, li) } else { (li, lr) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2() + LOG_SLACK
    }

    /// Lower bound for log2 of |true value|: -inf when 0 lies in the disc.
    pub fn abs_lower_log2(&self) -> f64 {
        log2_sub(self.abs_log2() - 2.0 * LOG_SLACK, self.err)
    }

    /// Upper bound for log2 of |true value|.
    pub fn abs_upper_log2(&self) -> f64 {
        log2_add(self.abs_log2(), self.err)
    }

    /// True when zero lies inside the error disc.
    pub fn contains_zero(&self) -> bool {
        self.abs_lower_log2() == f64::NEG_INFINITY
    }

    pub fn is_exact(&self) -> bool {
        self.err == f64::NEG_INFINITY
    }

    /// log2 |self - other| of the stored centres.
    pub fn distance_log2(&self, other: &BigComplex) -> f64 {
        let prec = self.prec().max(other.prec()) + 8;
        let d = Complex::with_val(prec, &self.z - &other.z);
        abs_log2_complex(&d)
    }

    /// Whether the two discs can hold the same value, with an extra tolerance.
    pub fn overlaps(&self, other: &BigComplex, tol_log2: f64) -> bool {
        let d = self.distance_log2(other);
        d <= log2_add(log2_add(self.err, other.err), tol_log2)
    }

    pub fn conj(&self) -> Self {
        BigComplex { z: self.z.clone().conj(), err: self.err }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let prec = self.prec();
        let kf = Complex::with_val(prec, (k, 0));
        let z = Complex::with_val(prec, &self.z * &kf);
        let scale = (k.unsigned_abs() as f64).log2();
        let err = log2_add(self.err + scale, rounding_log2(&z, prec));
        BigComplex { z, err }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        let prec = self.prec();
        let z = Complex::with_val(prec, &self.z / k);
        let scale = (k.unsigned_abs() as f64).log2();
        let err = log2_add(self.err - scale, rounding_log2(&z, prec));
        BigComplex { z, err }
    }

    pub fn mul_integer(&self, k: &Integer) -> Self {
        let prec = self.prec();
        let z = Complex::with_val(prec, &self.z * k);
        let scale = if *k == 0 {
            f64::NEG_INFINITY
        } else {
            let (m, e) = k.to_f64_exp();
            e as f64 + m.abs().log2()
        };
        let err = if scale == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            log2_add(self.err + scale, rounding_log2(&z, prec))
        };
        BigComplex { z, err }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        let prec = self.prec();
        let num = self.mul_integer(r.numer());
        let den = Complex::with_val(prec, (r.denom(), 0));
        let z = Complex::with_val(prec, &num.z / &den);
        let dlog = {
            let (m, e) = r.denom().to_f64_exp();
            e as f64 + m.log2()
        };
        let err = log2_add(num.err - dlog, rounding_log2(&z, prec));
        BigComplex { z, err }
    }

    /// Multiplication by 2^k is exact.
    pub fn mul_2exp(&self, k: i32) -> Self {
        let mut z = self.z.clone();
        z <<= k;
        BigComplex { z, err: self.err + k as f64 }
    }

    pub fn mul_i(&self) -> Self {
        let z = Complex::with_val(self.prec(), self.z.mul_i_ref(false));
        BigComplex { z, err: self.err }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut acc = BigComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn recip(&self) -> Self {
        &BigComplex::one(self.prec()) / self
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let z = Complex::with_val(prec, self.z.exp_ref());
        let abs = abs_log2_complex(&z);
        let prop = if self.err == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            let e = self.err.exp2();
            abs + e.exp_m1().log2()
        };
        let err = log2_add(prop, rounding_log2(&z, prec));
        BigComplex { z, err }
    }

    /// Nearest integer to the real part.
    pub fn round_re(&self) -> Integer {
        self.z.real().clone().round().to_integer().unwrap_or_default()
    }

    /// Decimal strings for the real and imaginary parts that round-trip at
    /// this precision.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (
            self.z.real().to_string_radix(10, None),
            self.z.imag().to_string_radix(10, None),
        )
    }

    pub fn from_decimal_strings(re: &str, im: &str, prec: u32, err_log2: f64) -> Option<Self> {
        let r = Float::parse(re).ok()?;
        let i = Float::parse(im).ok()?;
        Some(BigComplex {
            z: Complex::with_val(prec, (Float::with_val(prec, r), Float::with_val(prec, i))),
            err: err_log2,
        })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.z.real().to_f64(), self.z.imag().to_f64())
    }
}

pub(crate) fn abs_log2_complex(z: &Complex) -> f64 {
    let lr = log2_abs_float(z.real());
    let li = log2_abs_float(z.imag());
    let (hi, lo) = if lr >= li { (lr, li) } else { (li, lr) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2() + LOG_SLACK
}

/// Rounding error of a correctly rounded complex result at `prec` bits.
fn rounding_log2(z: &Complex, prec: u32) -> f64 {
    abs_log2_complex(z) + 1.0 - prec as f64
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Some(((self.prec() as f64) * 0.30103) as usize + 1);
        write!(
            f,
            "({} + {}i) ± 2^{}",
            self.z.real().to_string_radix(10, digits),
            self.z.imag().to_string_radix(10, digits),
            self.err_exp()
        )
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let z = Complex::with_val(prec, &self.z + &rhs.z);
        let err = log2_add(log2_add(self.err, rhs.err), rounding_log2(&z, prec));
        BigComplex { z, err }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let z = Complex::with_val(prec, &self.z - &rhs.z);
        let err = log2_add(log2_add(self.err, rhs.err), rounding_log2(&z, prec));
        BigComplex { z, err }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let z = Complex::with_val(prec, &self.z * &rhs.z);
        let la = self.abs_log2();
        let lb = rhs.abs_log2();
        let prop = log2_add(log2_add(la + rhs.err, lb + self.err), self.err + rhs.err);
        let err = log2_add(prop, rounding_log2(&z, prec));
        BigComplex { z, err }
    }
}

/// The radius is infinite when the divisor's disc contains zero.
impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &'a BigComplex) -> BigComplex {
        let prec = self.prec().max(rhs.prec());
        let z = Complex::with_val(prec, &self.z / &rhs.z);
        let lb = rhs.abs_log2() - 2.0 * LOG_SLACK;
        let denom = log2_sub(lb, rhs.err);
        let err = if rhs.z.real().is_zero() && rhs.z.imag().is_zero() || denom == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            let lq = abs_log2_complex(&z);
            // (ea + |q| eb) / (|b| - eb)
            let prop = log2_add(self.err, lq + rhs.err) - denom;
            log2_add(prop, rounding_log2(&z, prec))
        };
        BigComplex { z, err }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { z: Complex::with_val(self.prec(), -&self.z), err: self.err }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers_are_exact() {
        let a = BigComplex::from_i64(12345, 64);
        assert!(a.is_exact());
        let b = &a * &a;
        assert_eq!(b.re().to_f64(), 152399025.0);
    }

    #[test]
    fn radius_covers_higher_precision_value() {
        let lo = 80;
        let hi = 400;
        let run = |p: u32| {
            let x = BigComplex::from_rationals(&Rational::from((1, 3)), &Rational::from((2, 7)), p);
            let mut acc = BigComplex::one(p);
            for _ in 0..50 {
                acc = &(&acc * &x) + &BigComplex::pi(p);
                acc = (&acc / &x).exp().div_i64(1000);
            }
            acc
        };
        let a = run(lo);
        let b = run(hi);
        assert!(a.err_log2() < -40.0, "radius {}", a.err_log2());
        assert!(a.distance_log2(&b) <= a.err_log2());
    }

    #[test]
    fn division_by_uncertain_zero_is_unbounded() {
        let z = BigComplex::zero(64).with_err_log2(-10.0);
        let q = &BigComplex::one(64) / &z;
        assert_eq!(q.err_exp(), i64::MAX);
    }
}
