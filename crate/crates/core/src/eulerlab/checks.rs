use serde_json::json;

use super::minpoly::min_poly_guess;
use super::point::{eval_tau, EvaluatedPoint, PointSource};
use super::report::{CheckRecord, VerificationReport, Verdict};
use crate::error::{Error, Result};
use crate::numkernel::{BigComplex, IntMatrix};

/// Whether `m` lies in Gamma1(N).
pub fn in_gamma1(m: &IntMatrix, n: u32) -> bool {
    let n = n as i64;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    det == 1 && m[1][0].rem_euclid(n) == 0 && m[0][0].rem_euclid(n) == 1 % n && m[1][1].rem_euclid(n) == 1 % n
}

/// `(a tau + b)/(c tau + d)`.
pub fn mobius(m: &IntMatrix, tau: &BigComplex) -> BigComplex {
    let prec = tau.prec();
    let num = &tau.mul_i64(m[0][0]) + &BigComplex::from_i64(m[0][1], prec);
    let den = &tau.mul_i64(m[1][0]) + &BigComplex::from_i64(m[1][1], prec);
    &num / &den
}

/// Compare `(b, c)` at `gamma tau` and at `tau` for every sample and matrix,
/// to within `2^-(bits - 60)`. Matrices outside Gamma1(N) are evaluated as
/// well; they serve as negative controls and are flagged in the records.
pub fn gamma1_invariance_check(level: u32, taus: &[BigComplex], matrices: &[IntMatrix], bits: u32) -> VerificationReport {
    let tol = -(bits as f64 - 60.0);
    let mut records = Vec::new();
    for (ti, tau) in taus.iter().enumerate() {
        let base = eval_tau(tau, level, bits, PointSource::Free { tau: tau.to_string() });
        for m in matrices {
            let name = format!("tau[{ti}] under (({}, {}), ({}, {}))", m[0][0], m[0][1], m[1][0], m[1][1]);
            let member = in_gamma1(m, level);
            let moved = mobius(m, tau);
            let image = eval_tau(&moved, level, bits, PointSource::Free { tau: moved.to_string() });
            let rec = match (base.as_ref(), image.as_ref()) {
                (Ok(p), Ok(q)) => {
                    let d = p.distance_log2(q);
                    let ok = d < tol || p.matches(q, tol);
                    CheckRecord::new("invariance", name, Verdict::from_bool(ok))
                        .with_error(d)
                        .with_info(json!({ "inGamma1": member }))
                }
                (Err(e), _) | (_, Err(e)) => {
                    let v = match e {
                        Error::PrecisionExhausted(_) => Verdict::Inconclusive,
                        _ => Verdict::Falsified,
                    };
                    CheckRecord::new("invariance", name, v).with_info(json!({ "inGamma1": member, "error": e.to_string() }))
                }
            };
            records.push(rec);
        }
    }
    VerificationReport::from_records(records)
}

fn recognize(name: &str, x: &BigComplex, degree_bound: usize, height_bits: u32) -> CheckRecord {
    match min_poly_guess(x, degree_bound, height_bits) {
        Ok(Some(p)) => CheckRecord::new("algebraicity", name, Verdict::Verified)
            .with_info(json!({ "poly": p.to_string(), "degree": p.degree() })),
        Ok(None) => CheckRecord::new("algebraicity", name, Verdict::Falsified)
            .with_info(json!({ "poly": null, "degreeBound": degree_bound })),
        Err(e) => CheckRecord::new("algebraicity", name, Verdict::Inconclusive).with_info(json!({ "error": e.to_string() })),
    }
}

/// Recognize both coordinates of `point` as algebraic of degree at most
/// `degree_bound` and height at most `2^height_bits`.
pub fn algebraicity_evidence(point: &EvaluatedPoint, degree_bound: usize, height_bits: u32) -> VerificationReport {
    VerificationReport::from_records(vec![
        recognize("b", &point.b, degree_bound, height_bits),
        recognize("c", &point.c, degree_bound, height_bits),
    ])
}

/// As `algebraicity_evidence`, re-evaluating through `eval` at doubling
/// precision from `bits` up to `max_bits` while the outcome is inconclusive.
pub fn algebraicity_with_escalation(
    eval: &dyn Fn(u32) -> Result<EvaluatedPoint>,
    degree_bound: usize,
    height_bits: u32,
    bits: u32,
    max_bits: u32,
) -> Result<(VerificationReport, u32)> {
    let mut b = bits;
    loop {
        let report = algebraicity_evidence(&eval(b)?, degree_bound, height_bits);
        if report.verdict != Verdict::Inconclusive || b >= max_bits {
            return Ok((report, b));
        }
        b = (b * 2).min(max_bits);
    }
}
