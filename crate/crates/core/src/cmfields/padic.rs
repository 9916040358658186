use std::collections::BTreeSet;

use rug::{Integer, Rational};
use serde::Serialize;

use super::field::{is_prime, prime_splitting, valuation, ImagQuadField, KElement, Splitting};
use crate::error::{Error, Result};

/// Which conductor-raising situation a prime is in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CaseTag {
    /// `p` inert in K and prime to the conductor.
    #[serde(rename = "inert-p-not-dividing-c")]
    InertCoprime,
    /// `p` divides the conductor.
    #[serde(rename = "p-divides-c")]
    DividesConductor,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::InertCoprime => "inert-p-not-dividing-c",
            CaseTag::DividesConductor => "p-divides-c",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "inert-p-not-dividing-c" | "inert" => Some(CaseTag::InertCoprime),
            "p-divides-c" | "divides" => Some(CaseTag::DividesConductor),
            _ => None,
        }
    }

    /// The tag implied by the arithmetic of `p`, `c` and the field.
    pub fn infer(field: &ImagQuadField, c: u64, p: u64) -> Option<Self> {
        if c.is_multiple_of(p) {
            Some(CaseTag::DividesConductor)
        } else if prime_splitting(p, field) == Splitting::Inert {
            Some(CaseTag::InertCoprime)
        } else {
            None
        }
    }
}

/// Check that `case` matches `p`, `c` and the field.
pub fn check_case(field: &ImagQuadField, c: u64, p: u64, case: CaseTag) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::CaseMismatch(format!("{p} is not prime")));
    }
    if c == 0 {
        return Err(Error::CaseMismatch("conductor must be positive".into()));
    }
    match case {
        CaseTag::InertCoprime => {
            if c.is_multiple_of(p) {
                return Err(Error::CaseMismatch(format!("p = {p} divides c = {c}")));
            }
            let s = prime_splitting(p, field);
            if s != Splitting::Inert {
                return Err(Error::CaseMismatch(format!("p = {p} is {s:?} in Q(sqrt {}), not inert", field.d)));
            }
        }
        CaseTag::DividesConductor => {
            if !c.is_multiple_of(p) {
                return Err(Error::CaseMismatch(format!("p = {p} does not divide c = {c}")));
            }
            if field.dk.rem_euclid(p as i64) == 0 {
                return Err(Error::CaseMismatch(format!("p = {p} divides dK = {}", field.dk)));
            }
        }
    }
    Ok(())
}

pub type RatMatrix = [[Rational; 2]; 2];

/// Z_p-lattice in K tensor Q_p; the columns of `matrix` are generators in the
/// basis `(1, tau)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PadicLatticeBasis {
    pub matrix: RatMatrix,
    pub p: u64,
}

impl PadicLatticeBasis {
    pub fn from_generators(g1: &KElement, g2: &KElement, p: u64) -> Self {
        let [a, c] = g1.coords();
        let [b, d] = g2.coords();
        PadicLatticeBasis { matrix: [[a, b], [c, d]], p }
    }

    pub fn at_prime(&self, p: u64) -> Self {
        PadicLatticeBasis { matrix: self.matrix.clone(), p }
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        let m = &self.matrix;
        let s = |v: &Rational| Rational::from(v * k);
        PadicLatticeBasis { matrix: [[s(&m[0][0]), s(&m[0][1])], [s(&m[1][0]), s(&m[1][1])]], p: self.p }
    }

    pub fn det(&self) -> Rational {
        det(&self.matrix)
    }
}

fn det(m: &RatMatrix) -> Rational {
    Rational::from(&m[0][0] * &m[1][1]) - Rational::from(&m[0][1] * &m[1][0])
}

fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let d = det(m);
    if d == 0 {
        return None;
    }
    let f = |v: &Rational| Rational::from(v / &d);
    Some([[f(&m[1][1]), -f(&m[0][1])], [-f(&m[1][0]), f(&m[0][0])]])
}

fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let e = |i: usize, j: usize| Rational::from(&a[i][0] * &b[0][j]) + Rational::from(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Equality of the two Z_p-spans: `B1^-1 B2` is p-integral with unit
/// determinant.
pub fn lattice_equal_at_p(b1: &PadicLatticeBasis, b2: &PadicLatticeBasis) -> Result<bool> {
    if b1.p != b2.p {
        return Err(Error::InvalidInput(format!("lattices at different primes {} and {}", b1.p, b2.p)));
    }
    let inv = inverse(&b1.matrix).ok_or(Error::SingularBasis)?;
    if det(&b2.matrix) == 0 {
        return Err(Error::SingularBasis);
    }
    let m = mat_mul(&inv, &b2.matrix);
    let p = b1.p;
    let integral = m.iter().flatten().all(|v| valuation(v, p) >= 0);
    Ok(integral && valuation(&det(&m), p) == 0)
}

fn prime_factors(n: &Integer, out: &mut BTreeSet<u64>) {
    let mut n = n.clone().abs();
    let mut q = 2u64;
    while n > 1 {
        if q * q > n {
            out.insert(n.to_u64().expect("factor fits in u64"));
            break;
        }
        if n.is_divisible_u(q as u32) {
            out.insert(q);
            while n.is_divisible_u(q as u32) {
                n /= q;
            }
        }
        q += 1;
    }
}

/// Primes at which either basis fails to be a unimodular integral basis.
fn bad_primes(bases: &[&PadicLatticeBasis]) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for b in bases {
        for v in b.matrix.iter().flatten() {
            prime_factors(v.denom(), &mut out);
        }
        let d = b.det();
        prime_factors(d.numer(), &mut out);
        prime_factors(d.denom(), &mut out);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SjEntry {
    pub j: i64,
    pub multiplier: KElement,
    pub equal_at_p: bool,
    /// Primes other than `p` where the unit-multiplier identity was checked.
    pub other_primes: Vec<u64>,
    pub equal_at_other_primes: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SjReport {
    pub case: CaseTag,
    pub p: u64,
    pub c: u64,
    pub a: i64,
    pub level: u32,
    pub tau_prime: KElement,
    pub entries: Vec<SjEntry>,
    /// `s_j` fixes `1/N` because its components above primes dividing `N`
    /// are 1, which needs `p` prime to `N`.
    pub fixes_torsion_point: bool,
    pub notes: Vec<String>,
    pub all_passed: bool,
}

impl SjReport {
    pub fn first_failure(&self) -> Option<i64> {
        self.entries.iter().find(|e| !(e.equal_at_p && e.equal_at_other_primes)).map(|e| e.j)
    }
}

/// The multiplier `s_j` for the given case.
pub fn sj_multiplier(field: &ImagQuadField, c: u64, a: i64, case: CaseTag, j: i64) -> KElement {
    let tp = field.tau_prime(a, c as i64);
    match case {
        CaseTag::InertCoprime => field.elem(a + c as i64 * j, 1),
        CaseTag::DividesConductor => &tp.add_rational(&Rational::from(j)) / &tp,
    }
}

/// Check `s_j * L_right = L_left` at `p` for every `j`, and the identity
/// with trivial multiplier at every other prime where the bases are not
/// already unimodular.
pub fn sj_lattice_report_with(
    field: &ImagQuadField,
    c: u64,
    a: i64,
    p: u64,
    case: CaseTag,
    level: u32,
    multiplier: &dyn Fn(i64) -> KElement,
) -> Result<SjReport> {
    check_case(field, c, p, case)?;
    let tp = field.tau_prime(a, c as i64);
    let inv_p = Rational::from((1, p as i64));
    let one = field.int(1);
    let mut entries = Vec::new();
    let mut notes = Vec::new();
    if case == CaseTag::DividesConductor {
        let n = field.elem(a, 1).norm();
        if valuation(&n, p) > 0 {
            notes.push(format!(
                "p = {p} divides N(a + tau) = {n}, so (a + tau)/c has a larger multiplier ring than the order of conductor {c}"
            ));
        }
    }
    for j in 0..p as i64 {
        let shifted = tp.add_rational(&Rational::from(j)).scale(&inv_p);
        let left = PadicLatticeBasis::from_generators(&one, &shifted, p);
        let right = match case {
            CaseTag::InertCoprime => PadicLatticeBasis::from_generators(&one.scale(&inv_p), &tp, p),
            CaseTag::DividesConductor => PadicLatticeBasis::from_generators(&one, &tp.scale(&inv_p), p),
        };
        let s = multiplier(j);
        if s.is_zero() {
            return Err(Error::SingularBasis);
        }
        let [g1, g2] = [0, 1].map(|k| field.elem(right.matrix[0][k].clone(), right.matrix[1][k].clone()));
        let moved = PadicLatticeBasis::from_generators(&(&s * &g1), &(&s * &g2), p);
        let equal_at_p = lattice_equal_at_p(&left, &moved)?;

        let mut others: Vec<u64> = bad_primes(&[&left, &right]).into_iter().filter(|&l| l != p).collect();
        others.sort_unstable();
        let mut equal_others = true;
        for &l in &others {
            equal_others &= lattice_equal_at_p(&left.at_prime(l), &right.at_prime(l))?;
        }
        entries.push(SjEntry { j, multiplier: s, equal_at_p, other_primes: others, equal_at_other_primes: equal_others });
    }
    let fixes = level > 0 && !(level as u64).is_multiple_of(p);
    notes.push("outside the listed primes both bases are unimodular integral bases of the maximal order, so the identity holds there".to_string());
    let all_passed = entries.iter().all(|e| e.equal_at_p && e.equal_at_other_primes) && fixes;
    Ok(SjReport { case, p, c, a, level, tau_prime: tp, entries, fixes_torsion_point: fixes, notes, all_passed })
}

pub fn sj_lattice_report(field: &ImagQuadField, c: u64, a: i64, p: u64, case: CaseTag, level: u32) -> Result<SjReport> {
    sj_lattice_report_with(field, c, a, p, case, level, &|j| sj_multiplier(field, c, a, case, j))
}

/// As `sj_lattice_report`, failing with the first offending `j`.
pub fn verify_sj_lattices(field: &ImagQuadField, c: u64, a: i64, p: u64, case: CaseTag, level: u32) -> Result<SjReport> {
    let r = sj_lattice_report(field, c, a, p, case, level)?;
    match r.first_failure() {
        Some(j) => Err(Error::Falsified { j }),
        None if !r.fixes_torsion_point => Err(Error::HypothesisViolated(format!("p = {p} divides N = {level}"))),
        None => Ok(r),
    }
}
