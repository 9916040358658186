use serde::Serialize;

use super::poly::BivariatePolyQ;
use super::tate::tate_multiples;
use crate::error::{Error, Result};
use crate::numkernel::BigComplex;

/// Limits on the elimination.
#[derive(Clone, Debug)]
pub struct RawFormConfig {
    pub max_level: u32,
    pub max_total_degree: u32,
}

impl Default for RawFormConfig {
    fn default() -> Self {
        RawFormConfig { max_level: 13, max_total_degree: 200 }
    }
}

/// `k = floor((N-1)/2)`, the torsion identity `x(kP) = x((N-k)P)`.
pub fn default_split(n: u32) -> u32 {
    (n - 1) / 2
}

/// Loci removed from the raw numerator. A locus is kept for the level where
/// it is itself the torsion condition: `c = 0` gives 4P = O, `b = c` gives
/// 5P = O and `b = c + c^2` gives 6P = O.
fn degenerate_factors(n: u32) -> Vec<BivariatePolyQ> {
    let b = BivariatePolyQ::b();
    let c = BivariatePolyQ::c();
    let mut out = vec![b.clone()];
    if n != 4 {
        out.push(c.clone());
    }
    if n != 5 {
        out.push(&b - &c);
    }
    if n != 6 {
        out.push(&(&b - &c) - &c.pow(2));
    }
    out
}

/// Defining polynomial of X1(N) in the Tate parameters.
pub fn raw_form(n: u32) -> Result<BivariatePolyQ> {
    raw_form_with(n, default_split(n.max(1)), &RawFormConfig::default())
}

/// Raw form from the identity `x(kP) = x((N-k)P)`.
pub fn raw_form_with(n: u32, k: u32, cfg: &RawFormConfig) -> Result<BivariatePolyQ> {
    let unsupported = |reason: String| Error::UnsupportedN { n, reason };
    if n < 4 {
        return Err(unsupported("levels below 4 have no Tate-normal-form model".into()));
    }
    if n > cfg.max_level {
        return Err(unsupported(format!("level above the configured cap {}", cfg.max_level)));
    }
    if k == 0 || k >= n || 2 * k == n {
        return Err(unsupported(format!("k = {k} gives no torsion identity")));
    }
    let multiples = tate_multiples(k.max(n - k));
    let xk = multiples[k as usize - 1].x().expect("kP is affine for k < N").clone();
    let xl = multiples[(n - k) as usize - 1].x().expect("(N-k)P is affine").clone();
    let diff = &xk - &xl;
    let mut num = diff.numer().clone();
    if num.total_degree() > cfg.max_total_degree {
        return Err(unsupported(format!(
            "numerator degree {} exceeds the budget {}",
            num.total_degree(),
            cfg.max_total_degree
        )));
    }
    for f in degenerate_factors(n) {
        num = num.remove_factor(&f).0;
    }
    Ok(num.primitive())
}

/// Raw form evaluated at a numerical point.
pub fn eval_curve_equation(b: &BigComplex, c: &BigComplex, n: u32, bits: u32) -> Result<BigComplex> {
    let f = raw_form(n)?;
    Ok(f.eval_complex(&b.clone().with_prec(bits.max(b.prec())), &c.clone().with_prec(bits.max(c.prec()))))
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizedModelReport {
    pub divisible: bool,
    /// Substituted raw form in `(x, y)`.
    pub substituted: String,
    /// Quotient by `y^2 + (x^2+1)y + x` when divisible.
    pub cofactor: Option<String>,
    pub remainder: String,
}

/// `y^2 + (x^2+1)y + x`, stored with `x` in the first slot.
pub fn optimized_curve() -> BivariatePolyQ {
    BivariatePolyQ::parse_with("y^2 + x^2*y + y + x", ["x", "y"]).expect("literal polynomial")
}

/// Substitute `b = (1-x)xy(1+xy)`, `c = (1-x)xy` and divide by the
/// optimized curve.
pub fn optimized_model_check_for(raw: &BivariatePolyQ) -> OptimizedModelReport {
    let vars = ["x", "y"];
    let cs = BivariatePolyQ::parse_with("x*y - x^2*y", vars).expect("literal polynomial");
    let bs = &cs * &BivariatePolyQ::parse_with("1 + x*y", vars).expect("literal polynomial");
    let sub = raw.substitute(&bs, &cs);
    let (q, r) = sub.div_rem(&optimized_curve());
    OptimizedModelReport {
        divisible: r.is_zero(),
        substituted: sub.to_text_with(vars),
        cofactor: r.is_zero().then(|| q.to_text_with(vars)),
        remainder: r.to_text_with(vars),
    }
}

pub fn optimized_model_check() -> Result<OptimizedModelReport> {
    let report = optimized_model_check_for(&raw_form(11)?);
    if !report.divisible {
        return Err(Error::DivisionFails(format!("remainder {}", report.remainder)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BivariatePolyQ {
        BivariatePolyQ::parse(s).unwrap()
    }

    #[test]
    fn small_levels() {
        assert_eq!(raw_form(4).unwrap(), p("c"));
        assert_eq!(raw_form(5).unwrap(), p("b - c"));
        assert_eq!(raw_form(6).unwrap(), p("c^2 + c - b"));
        assert_eq!(raw_form(7).unwrap(), p("c^3 - b^2 + b*c"));
    }

    #[test]
    fn reflection_is_a_unit() {
        let cfg = RawFormConfig::default();
        for n in 7..=10 {
            let k = default_split(n);
            assert_eq!(raw_form_with(n, k, &cfg).unwrap(), raw_form_with(n, n - k, &cfg).unwrap());
        }
    }

    #[test]
    fn out_of_range_levels() {
        assert!(matches!(raw_form(3), Err(Error::UnsupportedN { .. })));
        assert!(matches!(raw_form(14), Err(Error::UnsupportedN { .. })));
    }
}
