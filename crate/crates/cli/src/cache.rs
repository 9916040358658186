use std::fs;
use std::path::{Path, PathBuf};

use heegner1::eulerlab::{raw_form_residual, CMPointSpec, EvaluatedPoint, PointSource};
use heegner1::numkernel::BigComplex;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Decimal {
    re: String,
    im: String,
}

/// On-disk form of an evaluated CM point. The c-coordinate is stored under
/// "cVal" because "c" names the conductor.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    #[serde(rename = "D")]
    d: i64,
    #[serde(rename = "N")]
    n: u32,
    c: u64,
    a: i64,
    #[serde(rename = "tauDesc")]
    tau_desc: String,
    #[serde(rename = "precBits")]
    prec_bits: u32,
    b: Decimal,
    #[serde(rename = "cVal")]
    c_val: Decimal,
    #[serde(rename = "errExp")]
    err_exp: i64,
}

/// Largest binary precision whose shortest round-trip decimal form has as
/// many significant digits as `s`.
fn precision_of(s: &str) -> u32 {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    let digits = mantissa.chars().filter(|ch| ch.is_ascii_digit()).count().max(2);
    ((digits - 1) as f64 / std::f64::consts::LOG10_2).floor() as u32
}

/// Directory of evaluated points keyed by `(D, N, c, a, precBits)`.
pub struct PointCache {
    dir: PathBuf,
}

impl PointCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PointCache { dir: dir.into() }
    }

    pub fn key(spec: &CMPointSpec, prec_bits: u32) -> String {
        format!("D{}_N{}_c{}_a{}_p{}", spec.d, spec.n, spec.c, spec.a, prec_bits)
    }

    pub fn path(&self, spec: &CMPointSpec, prec_bits: u32) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(spec, prec_bits)))
    }

    /// `None` on a miss; `CorruptCache` when the file does not match the schema
    /// or its key.
    pub fn load(&self, spec: &CMPointSpec, prec_bits: u32) -> Result<Option<EvaluatedPoint>, CliError> {
        let path = self.path(spec, prec_bits);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |reason: String| CliError::CorruptCache { path: path.display().to_string(), reason };
        let entry: Entry = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if (entry.d, entry.n, entry.c, entry.a, entry.prec_bits) != (spec.d, spec.n, spec.c, spec.a, prec_bits) {
            return Err(corrupt("fields do not match the key".into()));
        }
        let err = entry.err_exp as f64;
        let parse = |v: &Decimal| {
            let prec = precision_of(&v.re).max(precision_of(&v.im)).max(prec_bits);
            BigComplex::from_decimal_strings(&v.re, &v.im, prec, err)
                .ok_or_else(|| corrupt(format!("bad decimal ({}, {})", v.re, v.im)))
        };
        let (b, c) = (parse(&entry.b)?, parse(&entry.c_val)?);
        let residual_log2 = raw_form_residual(&b, &c, spec.n);
        Ok(Some(EvaluatedPoint {
            b,
            c,
            source: PointSource::Spec { spec: *spec },
            level: spec.n,
            prec_bits,
            residual_log2,
        }))
    }

    /// Store a point evaluated from a spec.
    pub fn store(&self, point: &EvaluatedPoint) -> Result<PathBuf, CliError> {
        let PointSource::Spec { spec } = &point.source else {
            return Err(CliError::Usage("only points evaluated from (D, N, c, a) are cached".into()));
        };
        let decimal = |z: &BigComplex| {
            let (re, im) = z.to_decimal_strings();
            Decimal { re, im }
        };
        let entry = Entry {
            d: spec.d,
            n: spec.n,
            c: spec.c,
            a: spec.a,
            tau_desc: spec.describe(),
            prec_bits: point.prec_bits,
            b: decimal(&point.b),
            c_val: decimal(&point.c),
            err_exp: point.err_exp(),
        };
        fs::create_dir_all(&self.dir)?;
        let path = self.path(spec, point.prec_bits);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string_pretty(&entry).expect("cache entry serializes"))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}
