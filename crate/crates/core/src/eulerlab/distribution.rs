use rug::ops::{Pow, RemRounding};
use rug::{Integer, Rational};
use serde::Serialize;
use serde_json::json;

use super::fiber::{tp_fiber, DistributionInstance, Fiber};
use super::minpoly::min_poly_guess;
use super::point::{raw_form_residual, tate_parameters, EvaluatedPoint, PointSource};
use super::report::{match_points, CheckRecord, VerificationReport, Verdict};
use crate::cmfields::{
    class_number, conductor_raise_cosets, cosets_distinct_check, sj_lattice_report, valuation, CaseTag, ImagQuadField,
    KElement,
};
use crate::error::{Error, Result};
use crate::galoisact::w_group;
use crate::numkernel::{BigComplex, LatticeBasis};

/// How the numerical divisor layer is checked.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisorMode {
    /// Elementary symmetric functions of the fiber are algebraic of base
    /// degree while a single member is not.
    SymmetricFunctions,
    /// The fiber is matched against the conjugates of one member.
    OrbitMatching,
}

#[derive(Clone, Debug)]
pub struct DistributionOptions {
    pub mode: DivisorMode,
    /// Defaults to the degree of the base field over Q.
    pub degree_bound: Option<usize>,
    pub height_bits: u32,
    pub max_bits: u32,
    /// Replace the b-value of fiber point `k` by a pseudo-random value.
    pub replace_b: Option<(usize, u64)>,
}

impl Default for DistributionOptions {
    fn default() -> Self {
        DistributionOptions {
            mode: DivisorMode::SymmetricFunctions,
            degree_bound: None,
            height_bits: 64,
            max_bits: 1200,
            replace_b: None,
        }
    }
}

/// `2 h(O_c) |W_N / +-1|`: the degree over Q of the field generated by the
/// values at conductor `c` and level `N`.
pub fn base_degree_bound(field: &ImagQuadField, c: u64, level: u32) -> Result<usize> {
    let disc = field.dk * (c as i64) * (c as i64);
    Ok(2 * class_number(disc)? * w_group(level, field).len())
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `exp(u + v i)` for pseudo-random rationals `u, v` in `[0, 1)`.
pub fn pseudo_random_value(seed: u64, prec: u32) -> BigComplex {
    let mut st = seed;
    let u = Rational::from((splitmix(&mut st) >> 11, 1u64 << 53));
    let v = Rational::from((splitmix(&mut st) >> 11, 1u64 << 53));
    BigComplex::from_rationals(&u, &v, prec).exp()
}

fn elementary_symmetric(values: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let mut e = vec![BigComplex::one(prec)];
    e.extend((0..values.len()).map(|_| BigComplex::zero(prec)));
    for (i, v) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let t = &e[k - 1] * v;
            e[k] = &e[k] + &t;
        }
    }
    e.remove(0);
    e
}

fn lattice_layer(inst: &DistributionInstance) -> Result<CheckRecord> {
    let s = &inst.spec;
    let report = sj_lattice_report(&inst.field(), s.c, s.a, inst.p, inst.case, s.n)?;
    let v = Verdict::from_bool(report.all_passed);
    Ok(CheckRecord::new("lattice", "s_j lattice identities", v)
        .with_info(json!({ "firstFailure": report.first_failure(), "report": report })))
}

fn coset_layer(inst: &DistributionInstance) -> Result<CheckRecord> {
    let field = inst.field();
    let s = &inst.spec;
    let reps = conductor_raise_cosets(&field, s.c, inst.p, inst.case, &s.tau_prime())?;
    let distinct = cosets_distinct_check(&reps, inst.p, inst.case, &field, s.c);
    let count_ok = reps.len() == inst.fiber_size();
    Ok(CheckRecord::new("coset", "coset representatives", Verdict::from_bool(distinct && count_ok)).with_info(json!({
        "count": reps.len(),
        "expected": inst.fiber_size(),
        "distinct": distinct,
        "representatives": reps.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })))
}

fn apply_replacement(fiber: &mut Fiber, opts: &DistributionOptions, bits: u32) {
    if let Some((k, seed)) = opts.replace_b {
        if let Some(p) = fiber.points.get_mut(k) {
            p.b = pseudo_random_value(seed, bits + 64);
            p.residual_log2 = raw_form_residual(&p.b, &p.c, p.level);
        }
    }
}

/// Outcome of the symmetric-function layer at one precision.
struct SymOutcome {
    records: Vec<CheckRecord>,
    undecided: bool,
}

fn symmetric_at(fiber: &Fiber, degree_bound: usize, height_bits: u32, prec: u32) -> SymOutcome {
    let mut records = Vec::new();
    let mut undecided = false;
    for (coord, vals) in [
        ("b", fiber.points.iter().map(|p| p.b.clone()).collect::<Vec<_>>()),
        ("c", fiber.points.iter().map(|p| p.c.clone()).collect::<Vec<_>>()),
    ] {
        for (k, e) in elementary_symmetric(&vals, prec).iter().enumerate() {
            let name = format!("e{}({coord})", k + 1);
            let rec = match min_poly_guess(e, degree_bound, height_bits) {
                Ok(Some(p)) => CheckRecord::new("divisor", name, Verdict::Verified)
                    .with_info(json!({ "poly": p.to_string(), "degree": p.degree(), "errExp": e.err_exp() })),
                Ok(None) => CheckRecord::new("divisor", name, Verdict::Falsified)
                    .with_info(json!({ "poly": null, "errExp": e.err_exp() })),
                Err(err) => {
                    undecided = true;
                    CheckRecord::new("divisor", name, Verdict::Inconclusive).with_info(json!({ "error": err.to_string() }))
                }
            };
            records.push(rec);
        }
    }
    let single = &fiber.points[0].b;
    let rec = match min_poly_guess(single, degree_bound, height_bits) {
        Ok(None) => CheckRecord::new("divisor", "single b-value not of base degree", Verdict::Verified),
        Ok(Some(p)) => CheckRecord::new("divisor", "single b-value not of base degree", Verdict::Inconclusive)
            .with_info(json!({ "poly": p.to_string() })),
        Err(err) => {
            undecided = true;
            CheckRecord::new("divisor", "single b-value not of base degree", Verdict::Inconclusive)
                .with_info(json!({ "error": err.to_string() }))
        }
    };
    records.push(rec);
    SymOutcome { records, undecided }
}

/// Coordinates of `e` in the basis `(w1, w2)` of K over Q.
fn coords_in(e: &KElement, w1: &KElement, w2: &KElement) -> [Rational; 2] {
    let [a1, b1] = w1.coords();
    let [a2, b2] = w2.coords();
    let [x, y] = e.coords();
    let det = Rational::from(&a1 * &b2) - Rational::from(&a2 * &b1);
    let u = (Rational::from(&x * &b2) - Rational::from(&a2 * &y)) / &det;
    let v = (Rational::from(&a1 * &y) - Rational::from(&x * &b1)) / &det;
    [u, v]
}

fn p_part(d: &Integer, p: u64) -> u32 {
    valuation(&Rational::from(d.clone()), p).max(0) as u32
}

/// Basis of the integer lattice generated by `gens` in Z^2.
fn hnf2(mut gens: Vec<[i128; 2]>) -> [[i128; 2]; 2] {
    loop {
        gens.retain(|g| g[0] != 0 || g[1] != 0);
        let nz: Vec<usize> = (0..gens.len()).filter(|&i| gens[i][0] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| gens[i][0].abs()).expect("nonempty");
        let pv = gens[piv];
        for &i in &nz {
            if i != piv {
                let q = gens[i][0].div_euclid(pv[0]);
                gens[i] = [gens[i][0] - q * pv[0], gens[i][1] - q * pv[1]];
            }
        }
    }
    let first = gens.iter().find(|g| g[0] != 0).copied().unwrap_or([0, 0]);
    let g2 = gens.iter().filter(|g| g[0] == 0).fold(0i128, |acc, g| gcd128(acc, g[1]));
    [first, [0, g2]]
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The lattice equal to `s * L` at `p` and to `L` at every other prime,
/// for `L` spanned by `w1, w2`.
pub fn conjugate_lattice(w1: &KElement, w2: &KElement, s: &KElement, p: u64) -> Result<(KElement, KElement)> {
    if s.is_zero() {
        return Err(Error::SingularBasis);
    }
    // rows: s w_i in the basis (w1, w2)
    let m = [coords_in(&(s * w1), w1, w2), coords_in(&(s * w2), w1, w2)];
    let det = Rational::from(&m[0][0] * &m[1][1]) - Rational::from(&m[0][1] * &m[1][0]);
    let inv = [
        [Rational::from(&m[1][1] / &det), Rational::from(-&m[0][1]) / &det],
        [Rational::from(-&m[1][0]) / &det, Rational::from(&m[0][0] / &det)],
    ];
    let k = m.iter().flatten().map(|r| (-valuation(r, p)).max(0)).max().unwrap_or(0) as u32;
    let pk = Integer::from(p).pow(k);
    // w = u / p^k lies in s L_p iff u * inv / p^k is p-integral
    let scaled: Vec<Rational> = inv.iter().flatten().map(|r| Rational::from(r / &pk)).collect();
    let den = scaled.iter().fold(Integer::from(1), |acc, r| acc.lcm(r.denom()));
    let m_exp = p_part(&den, p);
    let modulus = Integer::from(p).pow(m_exp);
    let modulus_i = modulus.to_i128().filter(|&v| v <= 1 << 12).ok_or_else(|| {
        Error::InvalidInput(format!("conjugate lattice needs a search modulo {modulus}"))
    })?;
    let a: Vec<i128> = scaled
        .iter()
        .map(|r| {
            let v = Rational::from(r * &den).numer().clone();
            v.rem_euc(&modulus).to_i128().expect("small")
        })
        .collect();
    let mut gens = vec![[modulus_i, 0], [0, modulus_i]];
    for u1 in 0..modulus_i {
        for u2 in 0..modulus_i {
            let c1 = (u1 * a[0] + u2 * a[2]).rem_euclid(modulus_i);
            let c2 = (u1 * a[1] + u2 * a[3]).rem_euclid(modulus_i);
            if c1 == 0 && c2 == 0 {
                gens.push([u1, u2]);
            }
        }
    }
    let basis = hnf2(gens);
    let inv_pk = Rational::from((Integer::from(1), pk));
    let elem = |u: [i128; 2]| -> KElement {
        let a = &w1.scale(&Rational::from(u[0])) + &w2.scale(&Rational::from(u[1]));
        a.scale(&inv_pk)
    };
    Ok((elem(basis[0]), elem(basis[1])))
}

/// `(b, c)` with the torsion point `1/N` on the lattice spanned by `w1, w2`.
pub fn eval_on_lattice(field: &ImagQuadField, w1: &KElement, w2: &KElement, level: u32, bits: u32) -> Result<EvaluatedPoint> {
    let prec = bits + 64;
    let basis = LatticeBasis::new(w1.to_complex(prec), w2.to_complex(prec));
    let z = BigComplex::from_rationals(&Rational::from((1, level)), &Rational::new(), prec);
    let (b, c) = tate_parameters(&z, &basis, bits)?;
    let residual_log2 = raw_form_residual(&b, &c, level);
    let source = PointSource::Exact { field: field.d, tau: format!("lattice ({w1}, {w2}) at 1/{level}") };
    Ok(EvaluatedPoint { b, c, source, level, prec_bits: bits, residual_log2 })
}

/// The base lattice whose conjugates by the coset representatives are the
/// fiber lattices, and the representatives.
fn orbit_data(inst: &DistributionInstance) -> Result<((KElement, KElement), Vec<KElement>)> {
    let field = inst.field();
    let s = &inst.spec;
    let tp = s.tau_prime();
    let inv_p = Rational::from((1, inst.p as i64));
    let base = match inst.case {
        CaseTag::InertCoprime => (field.int(1).scale(&inv_p), tp.clone()),
        CaseTag::DividesConductor => (field.int(1), tp.scale(&inv_p)),
    };
    let reps = conductor_raise_cosets(&field, s.c, inst.p, inst.case, &tp)?;
    Ok((base, reps))
}

fn orbit_layer(inst: &DistributionInstance, fiber: &Fiber, bits: u32, tol_log2: f64) -> Result<Vec<CheckRecord>> {
    let field = inst.field();
    if inst.spec.c != 1 || field.dk > -7 {
        return Err(Error::HypothesisViolated("orbit matching needs c = 1 and dK <= -7".into()));
    }
    let ((w1, w2), reps) = orbit_data(inst)?;
    let mut conj = Vec::with_capacity(reps.len());
    for s in &reps {
        let (l1, l2) = conjugate_lattice(&w1, &w2, s, inst.p)?;
        conj.push(eval_on_lattice(&field, &l1, &l2, inst.spec.n, bits)?);
    }
    let m = match_points(&fiber.points, &conj, tol_log2);
    let v = if m.ambiguous {
        Verdict::Inconclusive
    } else {
        Verdict::from_bool(m.complete)
    };
    Ok(vec![CheckRecord::new("divisor", "fiber equals the conjugates of one member", v)
        .with_error(m.max_error_log2)
        .with_info(json!({ "matching": m }))])
}

/// Layered check of the distribution relation: exact lattice identities,
/// exact coset distinctness, then the numerical divisor layer.
pub fn verify_distribution(
    inst: &DistributionInstance,
    bits: u32,
    tol_log2: f64,
    opts: &DistributionOptions,
) -> Result<VerificationReport> {
    let field = inst.field();
    let mut records = vec![lattice_layer(inst)?, coset_layer(inst)?];
    match opts.mode {
        DivisorMode::SymmetricFunctions => {
            let bound = match opts.degree_bound {
                Some(b) => b,
                None => base_degree_bound(&field, inst.spec.c, inst.spec.n)?,
            };
            let mut b = bits;
            loop {
                let mut fiber = tp_fiber(inst, b)?;
                apply_replacement(&mut fiber, opts, b);
                let out = symmetric_at(&fiber, bound, opts.height_bits, b + 64);
                if !out.undecided || b >= opts.max_bits {
                    records.extend(out.records);
                    records.push(fiber_record(&fiber, b, tol_log2, bound));
                    break;
                }
                b = (b * 2).min(opts.max_bits);
            }
        }
        DivisorMode::OrbitMatching => {
            let mut fiber = tp_fiber(inst, bits)?;
            apply_replacement(&mut fiber, opts, bits);
            records.extend(orbit_layer(inst, &fiber, bits, tol_log2)?);
            records.push(fiber_record(&fiber, bits, tol_log2, 0));
        }
    }
    Ok(VerificationReport::from_records(records))
}

fn fiber_record(fiber: &Fiber, bits: u32, tol_log2: f64, bound: usize) -> CheckRecord {
    let worst = fiber
        .points
        .iter()
        .chain(&fiber.diamond)
        .filter_map(|p| p.residual_log2)
        .fold(f64::NEG_INFINITY, f64::max);
    let on_model = worst < tol_log2 || !worst.is_finite();
    CheckRecord::new("divisor", "fiber points on the model", Verdict::from_bool(on_model))
        .with_error(worst)
        .with_info(json!({
            "precBits": bits,
            "degreeBound": bound,
            "points": fiber.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "diamond": fiber.diamond.as_ref().map(|p| p.to_json()),
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eulerlab::CMPointSpec;

    #[test]
    fn symmetric_functions() {
        let prec = 128;
        let v: Vec<BigComplex> = [1, 2, 3].iter().map(|&k| BigComplex::from_i64(k, prec)).collect();
        let e = elementary_symmetric(&v, prec);
        let got: Vec<f64> = e.iter().map(|x| x.to_f64_pair().0).collect();
        assert_eq!(got, vec![6.0, 11.0, 6.0]);
    }

    #[test]
    fn degree_bound_default_instance() {
        let f = ImagQuadField::new(-2).unwrap();
        assert_eq!(base_degree_bound(&f, 1, 4).unwrap(), 8);
    }

    #[test]
    fn conjugate_by_unit_is_identity() {
        let f = ImagQuadField::new(-2).unwrap();
        let (w1, w2) = (f.int(1), f.tau());
        let (l1, l2) = conjugate_lattice(&w1, &w2, &f.int(3), 5).unwrap();
        let det = |a: &KElement, b: &KElement| {
            let [a1, b1] = a.coords();
            let [a2, b2] = b.coords();
            Rational::from(&a1 * &b2) - Rational::from(&a2 * &b1)
        };
        assert_eq!(det(&l1, &l2).abs(), det(&w1, &w2).abs());
        // scaling by p changes the lattice at p only
        let (m1, m2) = conjugate_lattice(&w1, &w2, &f.int(5), 5).unwrap();
        assert_eq!(det(&m1, &m2).abs(), Rational::from(25) * det(&w1, &w2).abs());
    }

    #[test]
    fn orbit_mode_default_instance() {
        let inst = DistributionInstance::new(CMPointSpec::new(-2, 1, 0, 4).unwrap(), 5, CaseTag::InertCoprime).unwrap();
        let opts = DistributionOptions { mode: DivisorMode::OrbitMatching, ..Default::default() };
        let r = verify_distribution(&inst, 160, -100.0, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{}", serde_json::to_string_pretty(&r).unwrap());
    }
}
