use clap::{Args, Parser, Subcommand, ValueEnum};
use heegner1::cmfields::{
    class_number, conductor_raise_cosets, cosets_distinct_check, field_data, prime_splitting, reduced_forms,
    sj_lattice_report, CaseTag, ImagQuadField,
};
use heegner1::eulerlab::{
    eval_point, gamma1_invariance_check, min_poly_guess, verify_distribution, CMPointSpec, CheckRecord,
    DistributionInstance, DistributionOptions, DivisorMode, EvaluatedPoint, VerificationReport, Verdict,
};
use heegner1::galoisact::{orbit_report, point_under_matrix, vienna_act, GaloisElement, WMatrix};
use heegner1::modelgen::{raw_form, tate_multiple};
use heegner1::numkernel::{BigComplex, IntMatrix};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::PointCache;
use crate::config::{ConfigFlags, OutputFormat, RunConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "heegner1", version, about = "CM points on X1(N) and distribution-relation checks")]
pub struct Cli {
    /// Working precision in bits [env: HEEGNER1_PREC_BITS] [default: 300]
    #[arg(long, global = true)]
    pub prec_bits: Option<u32>,
    /// Match tolerance as a power of two [env: HEEGNER1_TOL_LOG2] [default: -100]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_log2: Option<i64>,
    /// Point cache directory [env: HEEGNER1_CACHE_DIR]
    #[arg(long, global = true)]
    pub cache_dir: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn flags(&self) -> ConfigFlags {
        ConfigFlags {
            prec_bits: self.prec_bits,
            tol_log2: self.tol_log2,
            cache_dir: self.cache_dir.clone(),
            output_format: self.format,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PointArgs {
    #[arg(long = "D", allow_negative_numbers = true)]
    pub d: i64,
    #[arg(long = "N")]
    pub n: u32,
    /// Conductor
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub a: i64,
}

impl PointArgs {
    fn spec(&self) -> Result<CMPointSpec, CliError> {
        Ok(CMPointSpec::new(self.d, self.c, self.a, self.n)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum ModeArg {
    /// Orbit matching when c = 1 and dK <= -7, symmetric functions otherwise.
    Auto,
    SymmetricFunctions,
    OrbitMatching,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate (b, c) at (a + tauK)/c.
    EvalPoint(PointArgs),
    /// Defining polynomial of X1(N) in (b, c).
    Rawform {
        #[arg(long = "N")]
        n: u32,
    },
    /// Coordinates of nP on the Tate normal form.
    Nmult {
        #[arg(long)]
        n: u32,
    },
    /// Reduced forms and class number of a negative discriminant.
    Classgroup {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
    },
    /// Splitting type of p in Q(sqrt D).
    Splitting {
        #[arg(long = "D", allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        p: u64,
    },
    /// Coset representatives for raising the conductor by p.
    Cosets {
        #[arg(long = "D", allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = 1)]
        c: u64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        a: i64,
        #[arg(long)]
        p: u64,
        /// inert or divides; inferred when omitted
        #[arg(long)]
        case: Option<String>,
    },
    /// Exact lattice identities for the s_j.
    VerifySj {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        case: Option<String>,
    },
    /// Layered check of the distribution relation at p.
    VerifyDistribution {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        case: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long)]
        degree_bound: Option<usize>,
        #[arg(long, default_value_t = 64)]
        height_bits: u32,
        #[arg(long, default_value_t = 1200)]
        max_bits: u32,
        /// Replace the b-value of this fiber point by a pseudo-random value
        #[arg(long)]
        replace_b: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// (b, c) with the torsion point C/N for C = t + s theta, compared with
    /// the matrix W(t, s) when that action is available.
    Vienna {
        #[arg(long = "D", allow_negative_numbers = true)]
        d: i64,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        s: i64,
    },
    /// Orbit of (b, c) at theta under the W-group.
    GaloisOrbit {
        #[arg(long = "D", allow_negative_numbers = true)]
        d: i64,
        #[arg(long = "N")]
        n: u32,
    },
    /// Search for an integer polynomial vanishing at a decimal number.
    Minpoly {
        #[arg(long, allow_negative_numbers = true)]
        re: String,
        #[arg(long, default_value = "0", allow_negative_numbers = true)]
        im: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 64)]
        height_bits: u32,
        /// Error radius of the input; defaults to one unit in the last digit
        #[arg(long, allow_negative_numbers = true)]
        err_log2: Option<f64>,
    },
    /// Gamma1(N) invariance of (b, c) at a sample tau.
    Invariance {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        tau_re: String,
        #[arg(long)]
        tau_im: String,
        /// a,b,c,d; defaults to (1,1;0,1) and (1,0;N,1)
        #[arg(long, allow_negative_numbers = true)]
        matrix: Vec<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EvalPoint(_) => "eval-point",
            Command::Rawform { .. } => "rawform",
            Command::Nmult { .. } => "nmult",
            Command::Classgroup { .. } => "classgroup",
            Command::Splitting { .. } => "splitting",
            Command::Cosets { .. } => "cosets",
            Command::VerifySj { .. } => "verify-sj",
            Command::VerifyDistribution { .. } => "verify-distribution",
            Command::Vienna { .. } => "vienna",
            Command::GaloisOrbit { .. } => "galois-orbit",
            Command::Minpoly { .. } => "minpoly",
            Command::Invariance { .. } => "invariance",
        }
    }
}

/// The single document a run emits.
#[derive(Serialize, Debug)]
#[serde(rename_all = "camelCase")]
pub struct Envelope {
    pub command: String,
    pub verdict: Verdict,
    pub max_match_error: Option<f64>,
    pub details: Vec<CheckRecord>,
    pub result: Value,
}

impl Envelope {
    fn plain(command: &str, result: Value) -> Self {
        Envelope { command: command.into(), verdict: Verdict::Verified, max_match_error: None, details: vec![], result }
    }

    fn from_report(command: &str, report: VerificationReport, result: Value) -> Self {
        Envelope {
            command: command.into(),
            verdict: report.verdict,
            max_match_error: report.max_match_error,
            details: report.details,
            result,
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.verdict)
    }
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Verified => 0,
        Verdict::Falsified => 1,
        Verdict::Inconclusive => 2,
    }
}

fn case_for(field: &ImagQuadField, c: u64, p: u64, case: &Option<String>) -> Result<CaseTag, CliError> {
    match case {
        Some(s) => CaseTag::parse(s).ok_or_else(|| CliError::Usage(format!("unknown case {s:?}"))),
        None => CaseTag::infer(field, c, p)
            .ok_or_else(|| CliError::Usage(format!("p = {p} is neither inert nor a divisor of c = {c}"))),
    }
}

fn parse_matrix(s: &str) -> Result<IntMatrix, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("matrix {s:?} is not a,b,c,d")))?;
    match v[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(CliError::Usage(format!("matrix {s:?} is not a,b,c,d"))),
    }
}

/// One unit in the last given digit as a log2 error radius; integer
/// literals are exact.
fn implied_err_log2(s: &str) -> f64 {
    let mut parts = s.split(['e', 'E']);
    let mantissa = parts.next().unwrap_or(s);
    let exp = parts.next();
    let Some(frac) = mantissa.split('.').nth(1) else {
        if exp.is_none() {
            return f64::NEG_INFINITY;
        }
        return exp.and_then(|e| e.parse::<f64>().ok()).unwrap_or(0.0) * std::f64::consts::LOG2_10;
    };
    let exp: f64 = exp.and_then(|e| e.parse().ok()).unwrap_or(0.0);
    -(frac.len() as f64 - exp) * std::f64::consts::LOG2_10
}

/// Parse a decimal number at `bits`, widening `err_log2` by the rounding
/// error of the conversion.
fn parse_decimal(re: &str, im: &str, bits: u32, err_log2: f64) -> Result<BigComplex, CliError> {
    let bad = || CliError::Usage(format!("cannot parse ({re}, {im})"));
    let magnitude = re.parse::<f64>().map_err(|_| bad())?.abs().max(im.parse::<f64>().map_err(|_| bad())?.abs());
    let rounding = magnitude.max(1.0).log2() - bits as f64 + 1.0;
    BigComplex::from_decimal_strings(re, im, bits, err_log2.max(rounding)).ok_or_else(bad)
}

fn eval_cached(spec: &CMPointSpec, cfg: &RunConfig, notes: &mut Vec<String>) -> Result<EvaluatedPoint, CliError> {
    let Some(dir) = &cfg.cache_dir else {
        return Ok(eval_point(spec, cfg.prec_bits)?);
    };
    let cache = PointCache::new(dir);
    match cache.load(spec, cfg.prec_bits) {
        Ok(Some(p)) => {
            notes.push(format!("loaded from {}", cache.path(spec, cfg.prec_bits).display()));
            return Ok(p);
        }
        Ok(None) => {}
        Err(e @ CliError::CorruptCache { .. }) => {
            eprintln!("warning: {e}; entry ignored");
            notes.push(e.to_string());
        }
        Err(e) => return Err(e),
    }
    let p = eval_point(spec, cfg.prec_bits)?;
    let path = cache.store(&p)?;
    notes.push(format!("stored to {}", path.display()));
    Ok(p)
}

/// Run one subcommand. Usage and input errors are returned as errors;
/// precision failures and falsified exact checks become verdicts.
pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Envelope, CliError> {
    let name = cmd.name();
    match run_inner(cmd, cfg) {
        Err(CliError::Core(e @ (heegner1::Error::PrecisionExhausted(_) | heegner1::Error::InsufficientPrecision(_)))) => {
            let mut env = Envelope::plain(name, json!({ "error": e.to_string() }));
            env.verdict = Verdict::Inconclusive;
            Ok(env)
        }
        Err(CliError::Core(e @ heegner1::Error::Falsified { .. })) => {
            let mut env = Envelope::plain(name, json!({ "error": e.to_string() }));
            env.verdict = Verdict::Falsified;
            Ok(env)
        }
        other => other,
    }
}

fn run_inner(cmd: &Command, cfg: &RunConfig) -> Result<Envelope, CliError> {
    let name = cmd.name();
    let bits = cfg.prec_bits;
    let tol = cfg.tol_log2 as f64;
    Ok(match cmd {
        Command::EvalPoint(args) => {
            let spec = args.spec()?;
            let mut notes = Vec::new();
            let p = eval_cached(&spec, cfg, &mut notes)?;
            let mut result = p.to_json();
            result["cache"] = json!(notes);
            Envelope::plain(name, result)
        }
        Command::Rawform { n } => {
            let f = raw_form(*n)?;
            Envelope::plain(name, json!({ "N": n, "terms": f.len(), "poly": f.to_text(), "coefficients": f.to_json() }))
        }
        Command::Nmult { n } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be positive".into()));
            }
            let pt = tate_multiple(*n);
            let result = match (pt.x(), pt.y()) {
                (Some(x), Some(y)) => json!({ "n": n, "x": x.to_text(), "y": y.to_text() }),
                _ => json!({ "n": n, "point": "infinity" }),
            };
            Envelope::plain(name, result)
        }
        Command::Classgroup { disc } => {
            let forms = reduced_forms(*disc)?;
            Envelope::plain(name, json!({ "disc": disc, "h": class_number(*disc)?, "forms": forms }))
        }
        Command::Splitting { d, p } => {
            if !heegner1::cmfields::is_prime(*p) {
                return Err(CliError::Usage(format!("{p} is not prime")));
            }
            let f = field_data(*d)?;
            Envelope::plain(name, json!({ "D": d, "dK": f.dk, "p": p, "splitting": prime_splitting(*p, &f) }))
        }
        Command::Cosets { d, c, a, p, case } => {
            let f = field_data(*d)?;
            let case = case_for(&f, *c, *p, case)?;
            let reps = conductor_raise_cosets(&f, *c, *p, case, &f.tau_prime(*a, *c as i64))?;
            let expected = match case {
                CaseTag::InertCoprime => *p as usize + 1,
                CaseTag::DividesConductor => *p as usize,
            };
            let distinct = cosets_distinct_check(&reps, *p, case, &f, *c);
            let rec = CheckRecord::new("coset", "representatives distinct", Verdict::from_bool(distinct))
                .with_info(json!({ "count": reps.len(), "expected": expected }));
            let count = CheckRecord::new("coset", "count", Verdict::from_bool(reps.len() == expected));
            let result = json!({ "case": case, "representatives": reps.iter().map(|r| r.to_string()).collect::<Vec<_>>() });
            Envelope::from_report(name, VerificationReport::from_records(vec![rec, count]), result)
        }
        Command::VerifySj { point, p, case } => {
            let spec = point.spec()?;
            let f = spec.field();
            let case = case_for(&f, spec.c, *p, case)?;
            let r = sj_lattice_report(&f, spec.c, spec.a, *p, case, spec.n)?;
            let records = vec![
                CheckRecord::new("lattice", "s_j lattice identities", Verdict::from_bool(r.first_failure().is_none()))
                    .with_info(json!({ "firstFailure": r.first_failure() })),
                CheckRecord::new("lattice", "s_j fixes 1/N", Verdict::from_bool(r.fixes_torsion_point)),
            ];
            Envelope::from_report(name, VerificationReport::from_records(records), serde_json::to_value(&r).unwrap())
        }
        Command::VerifyDistribution { point, p, case, mode, degree_bound, height_bits, max_bits, replace_b, seed } => {
            let spec = point.spec()?;
            let f = spec.field();
            let case = case_for(&f, spec.c, *p, case)?;
            let inst = DistributionInstance::new(spec, *p, case)?;
            let mode = match mode {
                ModeArg::SymmetricFunctions => DivisorMode::SymmetricFunctions,
                ModeArg::OrbitMatching => DivisorMode::OrbitMatching,
                ModeArg::Auto if spec.c == 1 && f.dk <= -7 => DivisorMode::OrbitMatching,
                ModeArg::Auto => DivisorMode::SymmetricFunctions,
            };
            let opts = DistributionOptions {
                mode,
                degree_bound: *degree_bound,
                height_bits: *height_bits,
                max_bits: (*max_bits).max(bits),
                replace_b: replace_b.map(|k| (k, *seed)),
            };
            let r = verify_distribution(&inst, bits, tol, &opts)?;
            Envelope::from_report(name, r, json!({ "instance": inst, "mode": mode, "precBits": bits }))
        }
        Command::Vienna { d, n, t, s } => {
            let f = field_data(*d)?;
            let cmul = &f.int(*t) + &f.theta().scale(&(*s).into());
            let v = vienna_act(&f, &cmul, &f.theta(), *n, bits)?;
            let w = WMatrix::new(*t, *s, *n as i64, &f);
            let mut records = Vec::new();
            match point_under_matrix(&f, &f.theta(), &GaloisElement::from_w(&w, &f), *n, bits, None) {
                Ok(m) => {
                    let dist = v.distance_log2(&m);
                    records.push(
                        CheckRecord::new("vienna", "agrees with W(t, s)", Verdict::from_bool(dist < tol || v.matches(&m, tol)))
                            .with_error(dist)
                            .with_info(json!({ "matrix": w.matrix().to_string() })),
                    );
                }
                Err(heegner1::Error::HypothesisViolated(why)) => {
                    records.push(
                        CheckRecord::new("vienna", "matrix action unavailable", Verdict::Verified)
                            .with_info(json!({ "reason": why })),
                    );
                }
                Err(e) => return Err(e.into()),
            }
            let result = json!({ "C": cmul.to_string(), "point": v.to_json() });
            Envelope::from_report(name, VerificationReport::from_records(records), result)
        }
        Command::GaloisOrbit { d, n } => {
            let f = field_data(*d)?;
            let r = orbit_report(&f, *n, bits, tol)?;
            Envelope::from_report(name, r, json!({ "D": d, "N": n }))
        }
        Command::Minpoly { re, im, degree, height_bits, err_log2 } => {
            let err = err_log2.unwrap_or_else(|| implied_err_log2(re).max(implied_err_log2(im)));
            let x = parse_decimal(re, im, bits, err)?;
            let found = min_poly_guess(&x, *degree, *height_bits)?;
            let verdict = Verdict::from_bool(found.is_some());
            let rec = CheckRecord::new("algebraicity", "minimal polynomial", verdict)
                .with_info(json!({ "degreeBound": degree, "heightBits": height_bits, "errLog2": err }));
            let result = json!({ "poly": found.as_ref().map(|p| p.to_string()), "degree": found.as_ref().map(|p| p.degree()) });
            Envelope::from_report(name, VerificationReport::from_records(vec![rec]), result)
        }
        Command::Invariance { n, tau_re, tau_im, matrix } => {
            // the sample is taken as exact
            let tau = parse_decimal(tau_re, tau_im, bits + 64, f64::NEG_INFINITY)?;
            let matrices: Vec<IntMatrix> = if matrix.is_empty() {
                vec![[[1, 1], [0, 1]], [[1, 0], [*n as i64, 1]]]
            } else {
                matrix.iter().map(|m| parse_matrix(m)).collect::<Result<_, _>>()?
            };
            let r = gamma1_invariance_check(*n, &[tau], &matrices, bits);
            Envelope::from_report(name, r, json!({ "N": n, "tolLog2": -(bits as f64 - 60.0) }))
        }
    })
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Plain-text rendering: header, one line per check record, then the result
/// fields.
pub fn render_text(env: &Envelope) -> String {
    let mut out = format!("command  {}\nverdict  {}\n", env.command, env.verdict.as_str());
    if let Some(e) = env.max_match_error {
        out += &format!("maxMatchError  2^{e:.1}\n");
    }
    for r in &env.details {
        let err = r.error_log2.map_or("-".to_string(), |e| format!("2^{e:.1}"));
        out += &format!("{:<12} {:<40} {:<12} {}\n", r.layer, r.name, r.verdict.as_str(), err);
    }
    match &env.result {
        Value::Object(m) => {
            for (k, v) in m {
                out += &format!("{k}  {}\n", text_value(v));
            }
        }
        other => out += &format!("{}\n", text_value(other)),
    }
    out
}

pub fn render(env: &Envelope, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(env).expect("envelope serializes"),
        OutputFormat::Text => render_text(env),
    }
}
