use serde::Serialize;

use super::point::EvaluatedPoint;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Falsified,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Falsified => "falsified",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Falsified dominates inconclusive, which dominates verified.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Falsified, _) | (_, Falsified) => Falsified,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }

    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Falsified
        }
    }
}

/// One sub-check of a report.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub layer: String,
    pub name: String,
    pub verdict: Verdict,
    /// log2 of the mismatch, for numerical checks.
    pub error_log2: Option<f64>,
    pub info: serde_json::Value,
}

impl CheckRecord {
    pub fn new(layer: &str, name: impl Into<String>, verdict: Verdict) -> Self {
        CheckRecord { layer: layer.into(), name: name.into(), verdict, error_log2: None, info: serde_json::Value::Null }
    }

    pub fn with_error(mut self, e: f64) -> Self {
        self.error_log2 = Some(e);
        self
    }

    pub fn with_info(mut self, info: serde_json::Value) -> Self {
        self.info = info;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub verdict: Verdict,
    /// Largest log2 mismatch over numerical checks.
    pub max_match_error: Option<f64>,
    pub details: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn from_records(details: Vec<CheckRecord>) -> Self {
        let verdict = details.iter().fold(Verdict::Verified, |v, r| v.combine(r.verdict));
        let max_match_error =
            details.iter().filter_map(|r| r.error_log2).filter(|e| !e.is_nan()).reduce(f64::max);
        VerificationReport { verdict, max_match_error, details }
    }

    pub fn layer(&self, layer: &str) -> impl Iterator<Item = &CheckRecord> {
        let layer = layer.to_string();
        self.details.iter().filter(move |r| r.layer == layer)
    }

    pub fn layer_verdict(&self, layer: &str) -> Verdict {
        self.layer(layer).fold(Verdict::Verified, |v, r| v.combine(r.verdict))
    }
}

/// Result of matching two multisets of points.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Matching {
    /// `pairs[i]` is the index in the right-hand list matched to left `i`.
    pub pairs: Vec<Option<usize>>,
    pub max_error_log2: f64,
    pub ambiguous: bool,
    pub complete: bool,
}

/// Greedy bijective matching of `left` against `right` within `2^tol`. A
/// match is ambiguous when the second-nearest candidate is within a factor
/// 16 of the nearest.
pub fn match_points(left: &[EvaluatedPoint], right: &[EvaluatedPoint], tol_log2: f64) -> Matching {
    let mut used = vec![false; right.len()];
    let mut pairs = Vec::with_capacity(left.len());
    let mut max_err = f64::NEG_INFINITY;
    let mut ambiguous = false;
    for l in left {
        let mut dists: Vec<(f64, usize)> =
            right.iter().enumerate().filter(|(k, _)| !used[*k]).map(|(k, r)| (l.distance_log2(r), k)).collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        match dists.first() {
            Some(&(d, k)) if d <= tol_log2 => {
                if dists.get(1).is_some_and(|&(d2, _)| d2 - d < 4.0) {
                    ambiguous = true;
                }
                used[k] = true;
                max_err = max_err.max(d);
                pairs.push(Some(k));
            }
            Some(&(d, _)) => {
                max_err = max_err.max(d);
                pairs.push(None);
            }
            None => pairs.push(None),
        }
    }
    let complete = left.len() == right.len() && pairs.iter().all(Option::is_some);
    Matching { pairs, max_error_log2: max_err, ambiguous, complete }
}
