use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Rational;
use serde::Serialize;

use crate::cmfields::{ImagQuadField, KElement};
use crate::error::{Error, Result};
use crate::modelgen::{raw_form, BivariatePolyQ};
use crate::numkernel::{wp_pair, BigComplex, LatticeBasis};

/// CM point `tau' = (a + tau_K)/c` at level `N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct CMPointSpec {
    #[serde(rename = "D")]
    pub d: i64,
    pub c: u64,
    pub a: i64,
    #[serde(rename = "N")]
    pub n: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CMPointSpec {
    pub fn new(d: i64, c: u64, a: i64, n: u32) -> Result<Self> {
        ImagQuadField::new(d)?;
        if c == 0 {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        if gcd(c, n as u64) != 1 {
            return Err(Error::InvalidInput(format!("gcd(c = {c}, N = {n}) != 1")));
        }
        Ok(CMPointSpec { d, c, a, n })
    }

    pub fn field(&self) -> ImagQuadField {
        ImagQuadField::new(self.d).expect("validated on construction")
    }

    pub fn tau_prime(&self) -> KElement {
        self.field().tau_prime(self.a, self.c as i64)
    }

    pub fn describe(&self) -> String {
        format!("(a + tauK)/c with D = {}, a = {}, c = {}", self.d, self.a, self.c)
    }
}

/// Where an evaluated point came from.
#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PointSource {
    Spec { spec: CMPointSpec },
    /// An exact element of K, described in text.
    Exact { field: i64, tau: String },
    /// A numerical tau.
    Free { tau: String },
}

/// `(b, c)` at a lattice and torsion point, with the raw-form residual when
/// the level is in range.
#[derive(Clone, Debug)]
pub struct EvaluatedPoint {
    pub b: BigComplex,
    pub c: BigComplex,
    pub source: PointSource,
    pub level: u32,
    pub prec_bits: u32,
    /// log2 upper bound of |rawForm(N)(b, c)|.
    pub residual_log2: Option<f64>,
}

impl EvaluatedPoint {
    pub fn err_exp(&self) -> i64 {
        self.b.err_exp().max(self.c.err_exp())
    }

    /// Whether both coordinates agree with `other` within the error radii
    /// plus `2^tol`.
    pub fn matches(&self, other: &EvaluatedPoint, tol_log2: f64) -> bool {
        self.b.overlaps(&other.b, tol_log2) && self.c.overlaps(&other.c, tol_log2)
    }

    /// log2 of the larger coordinate distance.
    pub fn distance_log2(&self, other: &EvaluatedPoint) -> f64 {
        self.b.distance_log2(&other.b).max(self.c.distance_log2(&other.c))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (br, bi) = self.b.to_decimal_strings();
        let (cr, ci) = self.c.to_decimal_strings();
        serde_json::json!({
            "source": self.source,
            "N": self.level,
            "precBits": self.prec_bits,
            "b": { "re": br, "im": bi },
            "cVal": { "re": cr, "im": ci },
            "errExp": self.err_exp(),
            "residualLog2": self.residual_log2,
        })
    }
}

fn raw_form_cached(n: u32) -> Option<BivariatePolyQ> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Option<BivariatePolyQ>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("raw form cache").get(&n) {
        return v.clone();
    }
    let v = raw_form(n).ok();
    cache.lock().expect("raw form cache").insert(n, v.clone());
    v
}

/// Raw-form residual bound, when a raw form exists for `n`.
pub fn raw_form_residual(b: &BigComplex, c: &BigComplex, n: u32) -> Option<f64> {
    raw_form_cached(n).map(|f| f.eval_complex(b, c).abs_upper_log2())
}

/// `b = -(wp(z) - wp(2z))^3 / wp'(z)^2` and `c = -wp'(2z)/wp'(z)` on the
/// lattice `basis`.
pub fn tate_parameters(z: &BigComplex, basis: &LatticeBasis, bits: u32) -> Result<(BigComplex, BigComplex)> {
    let (p1, d1) = wp_pair(z, basis, bits)?;
    let (p2, d2) = wp_pair(&z.mul_i64(2), basis, bits)?;
    if d1.contains_zero() {
        return Err(Error::PoleAtTorsion);
    }
    let diff = &p1 - &p2;
    let d1sq = d1.square();
    let b = -&(&(&diff.square() * &diff) / &d1sq);
    let c = -&(&d2 / &d1);
    Ok((b, c))
}

/// `(b, c)` at `tau` with the torsion point `r1*tau + r2`.
pub fn eval_at_index(
    tau: &BigComplex,
    r1: &Rational,
    r2: &Rational,
    level: u32,
    bits: u32,
    source: PointSource,
) -> Result<EvaluatedPoint> {
    if level < 4 {
        return Err(Error::DegenerateLevel(level));
    }
    let prec = bits + 64;
    let tau = tau.clone().with_prec(prec.max(tau.prec()));
    let basis = LatticeBasis::from_tau(&tau);
    let z = &tau.mul_rational(r1) + &BigComplex::from_rationals(r2, &Rational::new(), tau.prec());
    let (b, c) = tate_parameters(&z, &basis, bits)?;
    let residual_log2 = raw_form_residual(&b, &c, level);
    Ok(EvaluatedPoint { b, c, source, level, prec_bits: bits, residual_log2 })
}

/// `(b(tau), c(tau))` with the standard torsion point `1/N`.
pub fn eval_tau(tau: &BigComplex, level: u32, bits: u32, source: PointSource) -> Result<EvaluatedPoint> {
    eval_at_index(tau, &Rational::new(), &Rational::from((1, level)), level, bits, source)
}

/// `(b(tau'), c(tau'))` for a CM point given by `(D, c, a, N)`.
pub fn eval_point(spec: &CMPointSpec, bits: u32) -> Result<EvaluatedPoint> {
    if spec.n < 4 {
        return Err(Error::DegenerateLevel(spec.n));
    }
    let tau = spec.tau_prime().to_complex(bits + 64);
    eval_tau(&tau, spec.n, bits, PointSource::Spec { spec: *spec })
}

/// `(b, c)` at an exact element of K.
pub fn eval_exact(field: &ImagQuadField, tau: &KElement, level: u32, bits: u32) -> Result<EvaluatedPoint> {
    if tau.y <= 0 {
        return Err(Error::InvalidInput(format!("{tau} is not in the upper half plane")));
    }
    let t = tau.to_complex(bits + 64);
    eval_tau(&t, level, bits, PointSource::Exact { field: field.d, tau: tau.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_period_forces_c_zero() {
        let p = eval_point(&CMPointSpec::new(-2, 1, 0, 4).unwrap(), 200).unwrap();
        assert!(p.c.contains_zero() || p.c.abs_upper_log2() < -150.0);
        assert!(p.residual_log2.unwrap() < -150.0);
    }

    #[test]
    fn small_levels_rejected() {
        let s = CMPointSpec { d: -2, c: 1, a: 0, n: 3 };
        assert_eq!(eval_point(&s, 128).unwrap_err(), Error::DegenerateLevel(3));
    }

    #[test]
    fn translation_invariance() {
        let s0 = CMPointSpec::new(-7, 1, 0, 7).unwrap();
        let s1 = CMPointSpec::new(-7, 1, 1, 7).unwrap();
        let p0 = eval_point(&s0, 200).unwrap();
        let p1 = eval_point(&s1, 200).unwrap();
        assert!(p0.matches(&p1, -150.0));
        assert!(p0.residual_log2.unwrap() < -150.0);
    }
}
