use std::path::Path;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::wgroup::{act_index, FrickeIndex, Mat2, WMatrix};
use crate::cmfields::{ImagQuadField, KElement, QuadFormClass};
use crate::error::{Error, Result};
use crate::eulerlab::{eval_at_index, EvaluatedPoint, PointSource};

/// A W-matrix (up to sign) paired with a form class.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisElement {
    pub alpha: Mat2,
    pub form: QuadFormClass,
}

impl GaloisElement {
    pub fn principal(alpha: Mat2, field: &ImagQuadField) -> Self {
        GaloisElement { alpha, form: QuadFormClass::principal(field.dk) }
    }

    pub fn from_w(w: &WMatrix, field: &ImagQuadField) -> Self {
        Self::principal(w.matrix(), field)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalMatrix {
    pub p: u64,
    pub matrix: [[i64; 2]; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BetaQEntry {
    /// `[a, b, c]`.
    pub form: [i64; 3],
    #[serde(default)]
    pub local: Vec<LocalMatrix>,
    /// Integral lift used modulo N.
    pub lift: [[i64; 2]; 2],
}

/// Externally sourced matrices for non-principal form classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BetaQData {
    pub source: String,
    pub entries: Vec<BetaQEntry>,
}

impl BetaQData {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("parsing {}: {e}", path.display())))
    }

    pub fn lookup(&self, form: &QuadFormClass) -> Option<&BetaQEntry> {
        self.entries.iter().find(|e| e.form == [form.a, form.b, form.c])
    }
}

fn check_regime(field: &ImagQuadField) -> Result<()> {
    if field.dk > -7 {
        return Err(Error::HypothesisViolated(format!(
            "dK = {} > -7: the matrix action has a larger kernel than +-1",
            field.dk
        )));
    }
    Ok(())
}

fn eval_index(tau: &KElement, idx: &FrickeIndex, level: u32, bits: u32, source: PointSource) -> Result<EvaluatedPoint> {
    if idx.is_zero() {
        return Err(Error::PoleAtTorsion);
    }
    let t = tau.to_complex(bits + 64);
    let r1 = Rational::from((idx.k1, idx.n));
    let r2 = Rational::from((idx.k2, idx.n));
    eval_at_index(&t, &r1, &r2, level, bits, source)
}

/// `(b, c)` with the standard index moved by `alpha` (and by the lift of
/// `beta_Q` for a non-principal class, evaluated at `theta_Q`).
pub fn point_under_matrix(
    field: &ImagQuadField,
    tau: &KElement,
    g: &GaloisElement,
    level: u32,
    bits: u32,
    beta: Option<&BetaQData>,
) -> Result<EvaluatedPoint> {
    check_regime(field)?;
    let n = level as i64;
    if g.alpha.n != n {
        return Err(Error::InvalidInput(format!("matrix modulus {} differs from N = {level}", g.alpha.n)));
    }
    if !g.alpha.is_invertible() {
        return Err(Error::InvalidInput(format!("{} is not invertible", g.alpha)));
    }
    if *tau != field.theta() {
        return Err(Error::HypothesisViolated("the matrix action is evaluated only at theta".into()));
    }
    let (matrix, at) = if g.form.is_principal() {
        (g.alpha, tau.clone())
    } else {
        let f = g.form;
        let entry = beta.and_then(|d| d.lookup(&f)).ok_or(Error::MissingBetaQ { a: f.a, b: f.b, c: f.c })?;
        let l = entry.lift;
        let lift = Mat2::new(l[0][0], l[0][1], l[1][0], l[1][1], n);
        (g.alpha.mul(&lift), field.theta_form(f.a, f.b))
    };
    let idx = act_index(&FrickeIndex::standard(n), &matrix);
    let source = PointSource::Exact { field: field.d, tau: format!("{at} under {matrix}") };
    eval_index(&at, &idx, level, bits, source)
}

/// The action of a K-element `C` prime to N: `(b, c)` with the torsion
/// point `C/N` on the lattice of `tau`.
pub fn vienna_act(field: &ImagQuadField, cmul: &KElement, tau: &KElement, level: u32, bits: u32) -> Result<EvaluatedPoint> {
    let n = level as i64;
    if !cmul.is_integral() {
        return Err(Error::InvalidC { n: level });
    }
    let norm = cmul.norm();
    let nz = Integer::from(norm.numer());
    if Integer::from(nz.gcd_ref(&Integer::from(n))) != 1 {
        return Err(Error::InvalidC { n: level });
    }
    if tau.y <= 0 {
        return Err(Error::InvalidInput(format!("{tau} is not in the upper half plane")));
    }
    // C/N in the coordinates (tau, 1) of the lattice: C = u + v tauK and
    // tauK = (tau - x0)/y0 when tau = x0 + y0 tauK.
    let (x0, y0) = (tau.x.clone(), tau.y.clone());
    let u = cmul.x.clone();
    let v = cmul.y.clone();
    let r1 = Rational::from(&v / &y0) / Rational::from(n);
    let r2 = (u - Rational::from(&v * &x0) / &y0) / Rational::from(n);
    let t = tau.to_complex(bits + 64);
    let source = PointSource::Exact { field: field.d, tau: format!("{tau} with torsion point ({cmul})/{level}") };
    eval_at_index(&t, &r1, &r2, level, bits, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eulerlab::eval_exact;

    #[test]
    fn identity_reproduces_point() {
        let f = ImagQuadField::new(-7).unwrap();
        let g = GaloisElement::principal(Mat2::identity(5), &f);
        let p = point_under_matrix(&f, &f.theta(), &g, 5, 160, None).unwrap();
        let q = eval_exact(&f, &f.theta(), 5, 160).unwrap();
        assert!(p.matches(&q, -120.0));
        let v = vienna_act(&f, &f.int(6), &f.theta(), 5, 160).unwrap();
        assert!(v.matches(&q, -120.0));
    }

    #[test]
    fn non_principal_needs_data() {
        let f = ImagQuadField::new(-23).unwrap();
        let g = GaloisElement { alpha: Mat2::identity(5), form: QuadFormClass::new(2, 1, 3) };
        assert_eq!(
            point_under_matrix(&f, &f.theta(), &g, 5, 128, None).unwrap_err(),
            Error::MissingBetaQ { a: 2, b: 1, c: 3 }
        );
    }

    #[test]
    fn non_invertible_c_rejected() {
        let f = ImagQuadField::new(-2).unwrap();
        assert_eq!(vienna_act(&f, &f.int(2), &f.theta(), 4, 128).unwrap_err(), Error::InvalidC { n: 4 });
    }
}
