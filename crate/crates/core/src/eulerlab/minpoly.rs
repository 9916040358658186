use std::fmt;

use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::BigComplex;

/// Integer polynomial, coefficients from the constant term up.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    /// Trailing zero coefficients are dropped; the content is divided out
    /// and the leading coefficient made positive.
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        let mut g = Integer::new();
        for c in &coeffs {
            g.gcd_mut(c);
        }
        if g > 1 {
            for c in &mut coeffs {
                c.div_exact_mut(&g);
            }
        }
        if coeffs.last().is_some_and(|c| *c < 0) {
            for c in &mut coeffs {
                *c = Integer::from(-&*c);
            }
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Bits of the largest coefficient.
    pub fn height_bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &BigComplex) -> BigComplex {
        let mut acc = BigComplex::zero(x.prec());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &BigComplex::from_complex(rug::Complex::with_val(x.prec(), c), f64::NEG_INFINITY);
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let a = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, a == 1) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// LLL reduction (delta = 3/4) of integer row vectors. Returns the reduced
/// basis and the Gram-Schmidt squared norms.
pub fn lll_reduce(mut basis: Vec<Vec<Integer>>, prec: u32) -> (Vec<Vec<Integer>>, Vec<Float>) {
    let n = basis.len();
    if n == 0 {
        return (basis, Vec::new());
    }
    let delta = Float::with_val(prec, 0.75);
    let gram_schmidt = |basis: &[Vec<Integer>]| -> (Vec<Vec<Float>>, Vec<Float>) {
        let mut mu = vec![vec![Float::new(prec); n]; n];
        let mut bstar: Vec<Vec<Float>> = Vec::with_capacity(n);
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<Float> = basis[i].iter().map(|x| Float::with_val(prec, x)).collect();
            for j in 0..i {
                let d = basis[i]
                    .iter()
                    .zip(&bstar[j])
                    .fold(Float::new(prec), |acc, (x, y)| acc + Float::with_val(prec, x * y));
                let m = if norms[j] == 0 { Float::new(prec) } else { d / &norms[j] };
                for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                    *vk -= Float::with_val(prec, &m * bk);
                }
                mu[i][j] = m;
            }
            let nv = v.iter().map(|x| Float::with_val(prec, x * x)).fold(Float::new(prec), |a, b| a + b);
            norms.push(nv);
            bstar.push(v);
        }
        (mu, norms)
    };
    let (mut mu, mut norms) = gram_schmidt(&basis);
    let mut k = 1;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].clone().round();
            if q != 0 {
                let qi = q.to_integer().expect("finite");
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= Integer::from(&qi * y);
                }
                for i in 0..j {
                    let t = Float::with_val(prec, &q * &mu[j][i]);
                    mu[k][i] -= t;
                }
                mu[k][j] -= &q;
            }
        }
        let lhs = Float::with_val(prec, &norms[k]);
        let rhs = (delta.clone() - Float::with_val(prec, mu[k][k - 1].square_ref())) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let (m, nn) = gram_schmidt(&basis);
            mu = m;
            norms = nn;
            k = (k - 1).max(1);
        }
    }
    (basis, norms)
}

/// Outcome of recognition at a single degree.
enum DegreeOutcome {
    Found(IntPoly),
    Excluded,
    Undecided,
}

fn try_degree(x: &BigComplex, deg: usize, height_bits: u32) -> DegreeOutcome {
    let prec = x.prec();
    let mut powers = vec![BigComplex::one(prec)];
    for _ in 0..deg {
        let next = powers.last().expect("nonempty") * x;
        powers.push(next);
    }
    let err = powers.iter().map(|p| p.err_log2()).fold(f64::NEG_INFINITY, f64::max);
    let err = if err.is_finite() { err } else { -(prec as f64) };
    // relation vectors then have residual parts of size about 2^height
    let scale_bits = (-err - 4.0).floor().max(1.0) as u32;
    let scale = Integer::from(1) << scale_bits;
    let to_int = |f: &Float| -> Integer {
        let v = Float::with_val(prec + scale_bits, f * &scale);
        v.round().to_integer().expect("finite")
    };
    let dim = deg + 1;
    let basis: Vec<Vec<Integer>> = (0..dim)
        .map(|i| {
            let mut row = vec![Integer::new(); dim + 2];
            row[i] = Integer::from(1);
            row[dim] = to_int(powers[i].re());
            row[dim + 1] = to_int(powers[i].im());
            row
        })
        .collect();
    let work = 2 * (scale_bits + 64) + 64;
    let (reduced, norms) = lll_reduce(basis, work);
    let hmax = Integer::from(1) << height_bits;
    for row in &reduced {
        let cand: Vec<Integer> = row[..dim].to_vec();
        if cand.iter().all(|c| *c == 0) || cand.iter().any(|c| Integer::from(c.abs_ref()) > hmax) {
            continue;
        }
        let poly = IntPoly::new(cand);
        if poly.degree() == 0 {
            continue;
        }
        let val = poly.eval(x);
        // residual bound: sum |a_i| * err(x^i) plus rounding slack
        let slack = err + height_bits as f64 + (dim as f64).log2() + 8.0;
        if val.contains_zero() || val.abs_lower_log2() <= slack {
            return DegreeOutcome::Found(poly);
        }
    }
    // Any relation of height <= H gives a lattice vector of norm at most
    // about 2 (d+1) H; if every Gram-Schmidt vector is longer, none exists.
    let bound = Float::with_val(work, 3 * dim as u64) * Float::with_val(work, &hmax);
    let bound_sq = Float::with_val(work, bound.square_ref());
    let min_norm = norms.iter().fold(None::<Float>, |m, v| match m {
        Some(m) if m <= *v => Some(m),
        _ => Some(v.clone()),
    });
    match min_norm {
        Some(m) if m > bound_sq => DegreeOutcome::Excluded,
        _ => DegreeOutcome::Undecided,
    }
}

/// Smallest-degree integer polynomial of degree `<= max_deg` and height
/// `<= 2^height_bits` vanishing at `x`, or `None` when every degree is
/// certified free of such relations.
pub fn min_poly_guess(x: &BigComplex, max_deg: usize, height_bits: u32) -> Result<Option<IntPoly>> {
    let need = -((max_deg as i64) * height_bits as i64 + 128);
    if x.err_exp() > need {
        return Err(Error::InsufficientPrecision(format!(
            "error exponent {} exceeds {need} needed for degree {max_deg} at height 2^{height_bits}",
            x.err_exp()
        )));
    }
    let mut undecided = Vec::new();
    for deg in 1..=max_deg {
        match try_degree(x, deg, height_bits) {
            DegreeOutcome::Found(p) => return Ok(Some(p)),
            DegreeOutcome::Excluded => {}
            DegreeOutcome::Undecided => undecided.push(deg),
        }
    }
    if undecided.is_empty() {
        Ok(None)
    } else {
        Err(Error::InsufficientPrecision(format!("degrees {undecided:?} neither found nor excluded")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn golden_ratio() {
        let prec = 400;
        let s5 = BigComplex::sqrt_rational(&Rational::from(5), prec);
        let phi = (&s5 + &BigComplex::one(prec)).div_i64(2);
        let p = min_poly_guess(&phi, 4, 32).unwrap().unwrap();
        assert_eq!(p.to_string(), "x^2 - x - 1");
    }

    #[test]
    fn pi_is_not_recognized() {
        let pi = BigComplex::pi(1200);
        assert_eq!(min_poly_guess(&pi, 8, 40).unwrap(), None);
    }

    #[test]
    fn precondition() {
        let pi = BigComplex::pi(300);
        assert!(matches!(min_poly_guess(&pi, 8, 64), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn poly_normalization() {
        let p = IntPoly::new(vec![Integer::from(-4), Integer::from(0), Integer::from(-2), Integer::from(0)]);
        assert_eq!(p.to_string(), "x^2 + 2");
        assert_eq!(p.degree(), 2);
    }
}
