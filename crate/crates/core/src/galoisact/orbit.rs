use serde_json::json;

use super::action::{point_under_matrix, GaloisElement};
use super::wgroup::{w_group, WMatrix};
use crate::cmfields::ImagQuadField;
use crate::error::Result;
use crate::eulerlab::{match_points, CheckRecord, EvaluatedPoint, VerificationReport, Verdict};

/// The values at theta over the W-group together with the group.
pub struct Orbit {
    pub elements: Vec<WMatrix>,
    pub points: Vec<EvaluatedPoint>,
}

/// `(b, c)` at theta moved by every element of the W-group, in group order.
pub fn galois_orbit(field: &ImagQuadField, level: u32, bits: u32) -> Result<Orbit> {
    let elements = w_group(level, field);
    let theta = field.theta();
    let points: Vec<Result<EvaluatedPoint>> = std::thread::scope(|s| {
        let handles: Vec<_> = elements
            .iter()
            .map(|w| {
                let theta = &theta;
                s.spawn(move || point_under_matrix(field, theta, &GaloisElement::from_w(w, field), level, bits, None))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("orbit evaluation panicked")).collect()
    });
    Ok(Orbit { elements, points: points.into_iter().collect::<Result<_>>()? })
}

/// Pairwise separation of the orbit values and stability of the orbit
/// multiset under every further group element, matched within `2^tol`.
pub fn orbit_report(field: &ImagQuadField, level: u32, bits: u32, tol_log2: f64) -> Result<VerificationReport> {
    let orbit = galois_orbit(field, level, bits)?;
    let mut records = Vec::new();
    let mut closest = f64::NEG_INFINITY;
    let mut separated = true;
    for i in 0..orbit.points.len() {
        for j in (i + 1)..orbit.points.len() {
            let d = orbit.points[i].distance_log2(&orbit.points[j]);
            closest = closest.max(-d);
            separated &= d > tol_log2;
        }
    }
    records.push(
        CheckRecord::new("orbit", "values pairwise distinct", Verdict::from_bool(separated))
            .with_info(json!({ "size": orbit.points.len(), "minSeparationLog2": -closest })),
    );
    let theta = field.theta();
    for w2 in &orbit.elements {
        let moved: Vec<EvaluatedPoint> = orbit
            .elements
            .iter()
            .map(|w| {
                let g = GaloisElement::principal(w.matrix().mul(&w2.matrix()), field);
                point_under_matrix(field, &theta, &g, level, bits, None)
            })
            .collect::<Result<_>>()?;
        let m = match_points(&moved, &orbit.points, tol_log2);
        let v = if m.ambiguous { Verdict::Inconclusive } else { Verdict::from_bool(m.complete) };
        records.push(
            CheckRecord::new("orbit", format!("stable under (t, s) = ({}, {})", w2.t, w2.s), v)
                .with_error(m.max_error_log2),
        );
    }
    Ok(VerificationReport::from_records(records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_of_level_four() {
        let f = ImagQuadField::new(-2).unwrap();
        let r = orbit_report(&f, 4, 200, -66.0).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{}", serde_json::to_string_pretty(&r).unwrap());
    }
}
