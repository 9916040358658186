use rug::Rational;
use serde::Serialize;

use super::point::{eval_at_index, CMPointSpec, EvaluatedPoint, PointSource};
use crate::cmfields::{check_case, prime_splitting, CaseTag, ImagQuadField, KElement, Splitting};
use crate::error::{Error, Result};

/// A CM point together with a prime raising its conductor.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct DistributionInstance {
    pub spec: CMPointSpec,
    pub p: u64,
    pub case: CaseTag,
}

impl DistributionInstance {
    pub fn new(spec: CMPointSpec, p: u64, case: CaseTag) -> Result<Self> {
        let field = spec.field();
        check_case(&field, spec.c, p, case)?;
        let n = spec.n as u64;
        match case {
            CaseTag::InertCoprime => {
                if spec.c.is_multiple_of(p) || n.is_multiple_of(p) {
                    return Err(Error::HypothesisViolated(format!("p = {p} must be prime to cN = {}", spec.c * n)));
                }
                if p % n != 1 {
                    return Err(Error::HypothesisViolated(format!("p = {p} is not 1 mod N = {n}")));
                }
                if prime_splitting(p, &field) != Splitting::Inert {
                    return Err(Error::HypothesisViolated(format!("p = {p} is not inert")));
                }
            }
            CaseTag::DividesConductor => {
                if !spec.c.is_multiple_of(p) {
                    return Err(Error::HypothesisViolated(format!("p = {p} does not divide c = {}", spec.c)));
                }
                if n.is_multiple_of(p) || field.dk.unsigned_abs().is_multiple_of(p) {
                    return Err(Error::HypothesisViolated(format!("p = {p} divides N dK")));
                }
            }
        }
        Ok(DistributionInstance { spec, p, case })
    }

    pub fn field(&self) -> ImagQuadField {
        self.spec.field()
    }

    /// Number of fiber points, excluding the diamond point.
    pub fn fiber_size(&self) -> usize {
        match self.case {
            CaseTag::InertCoprime => self.p as usize + 1,
            CaseTag::DividesConductor => self.p as usize,
        }
    }

    /// The exact CM values of the fiber with the numerator `k` of their
    /// torsion index `(0, k/N)`, followed by the diamond point in the case
    /// `p | c`.
    pub fn fiber_taus(&self) -> (Vec<(KElement, i64)>, Option<(KElement, i64)>) {
        let tp = self.spec.tau_prime();
        let p = self.p as i64;
        let inv_p = Rational::from((1, p));
        let mut taus: Vec<(KElement, i64)> =
            (0..p).map(|j| (tp.add_rational(&Rational::from(j)).scale(&inv_p), 1)).collect();
        let up = tp.scale(&Rational::from(p));
        match self.case {
            CaseTag::InertCoprime => {
                taus.push((up, 1));
                (taus, None)
            }
            CaseTag::DividesConductor => (taus, Some((up, p.rem_euclid(self.spec.n as i64)))),
        }
    }
}

/// Points of a Hecke fiber.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub points: Vec<EvaluatedPoint>,
    /// `<p> P_{p tau'}` when `p | c`.
    pub diamond: Option<EvaluatedPoint>,
}

fn eval_one(field: &ImagQuadField, tau: &KElement, k: i64, level: u32, bits: u32) -> Result<EvaluatedPoint> {
    let t = tau.to_complex(bits + 64);
    let r2 = Rational::from((k, level as i64));
    let source = PointSource::Exact { field: field.d, tau: format!("{tau} at index (0, {k}/{level})") };
    eval_at_index(&t, &Rational::new(), &r2, level, bits, source)
}

/// The Hecke fiber above `tau'`: `p + 1` points in the inert case, `p`
/// points plus the diamond point when `p | c`. Points are evaluated
/// concurrently and returned in order `j = 0..p-1`, then `p tau'`.
pub fn tp_fiber(inst: &DistributionInstance, bits: u32) -> Result<Fiber> {
    let field = inst.field();
    let level = inst.spec.n;
    let (taus, diamond) = inst.fiber_taus();
    let results: Vec<Result<EvaluatedPoint>> = std::thread::scope(|s| {
        let handles: Vec<_> = taus
            .iter()
            .map(|(t, k)| {
                let field = &field;
                s.spawn(move || eval_one(field, t, *k, level, bits))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("fiber evaluation panicked")).collect()
    });
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    let diamond = diamond.map(|(t, k)| eval_one(&field, &t, k, level, bits)).transpose()?;
    Ok(Fiber { points, diamond })
}
