use std::time::{Duration, Instant};

use heegner1::cmfields::*;
use heegner1::eulerlab::*;
use heegner1::galoisact::*;
use heegner1::modelgen::*;
use heegner1::numkernel::{lattice_invariants, wp_pair, BigComplex, LatticeBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn p(s: &str) -> RatFuncQ {
    RatFuncQ::from_poly(BivariatePolyQ::parse(s).unwrap())
}

fn frac(num: &[&str], den: &[&str]) -> RatFuncQ {
    let prod = |fs: &[&str]| fs.iter().fold(RatFuncQ::one(), |acc, f| &acc * &p(f));
    &prod(num) / &prod(den)
}

fn multiples_table() -> Outcome {
    let table = [
        (p("b"), p("b*c")),
        (p("c"), p("b - c")),
        (frac(&["b", "b - c"], &["c", "c"]), -&frac(&["b", "b", "b - c - c^2"], &["c", "c", "c"])),
        (
            -&frac(&["b", "c", "b - c - c^2"], &["b - c", "b - c"]),
            frac(&["b", "c", "c", "b^2 - b*c - c^3"], &["b - c", "b - c", "b - c"]),
        ),
        (
            frac(&["b - c", "b^2 - b*c - c^3"], &["b - c - c^2", "b - c - c^2"]),
            frac(&["c", "2*b^2 - 3*b*c - b*c^2 + c^2", "b - c", "b - c"], &["b - c - c^2", "b - c - c^2", "b - c - c^2"]),
        ),
    ];
    let got = tate_multiples(6);
    for (i, (x, y)) in table.iter().enumerate() {
        let pt = &got[i + 1];
        ensure(pt.x() == Some(x) && pt.y() == Some(y), format!("{}P differs", i + 2))?;
    }
    Ok("2P..6P equal".into())
}

fn raw_form_eleven() -> Outcome {
    let expected = BivariatePolyQ::parse(
        "-b^2*c^3 - 6*b*c^5 + 3*b^3*c^2 + 9*b^2*c^4 - 3*b*c^6 - 3*b^4*c - 4*b^3*c^3 + 3*b^2*c^5 - b*c^7 + c^6 + b^5",
    )
    .unwrap();
    let got = raw_form(11).map_err(|e| e.to_string())?;
    ensure(got == expected || got == -&expected, format!("got {}", got.to_text()))?;
    Ok(format!("{} terms", got.len()))
}

fn optimized_model() -> Outcome {
    let r = optimized_model_check().map_err(|e| e.to_string())?;
    ensure(r.divisible, "remainder is nonzero")?;
    Ok("divisible".into())
}

fn wp_identities() -> Outcome {
    const BITS: u32 = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let tau = BigComplex::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.6..2.0), BITS);
        let basis = LatticeBasis::from_tau(&tau);
        let (u, v) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
        let z = &tau.mul_rational(&Rational::from_f64(u).unwrap()) + &BigComplex::from_f64(v, 0.0, BITS);
        let (pz, dpz) = wp_pair(&z, &basis, BITS).map_err(|e| e.to_string())?;
        let (g2, g3) = lattice_invariants(&basis, BITS).map_err(|e| e.to_string())?;
        let de = &(&(&(&pz.square() * &pz).mul_i64(4) - &(&g2 * &pz)) - &g3) - &dpz.square();
        let (pn, dpn) = wp_pair(&-&z, &basis, BITS).map_err(|e| e.to_string())?;
        let shifted = &z + &basis.point(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let (ps, dps) = wp_pair(&shifted, &basis, BITS).map_err(|e| e.to_string())?;
        let x = BigComplex::from_f64(rng.gen_range(0.3..3.0), rng.gen_range(-3.0..3.0), BITS);
        let (px, dpx) = wp_pair(&(&z * &x), &basis.scaled(&x), BITS).map_err(|e| e.to_string())?;
        let residuals = [
            de,
            &pz - &pn,
            &dpz + &dpn,
            &pz - &ps,
            &dpz - &dps,
            &(&px * &x.square()) - &pz,
            &(&dpx * &x.pow_u32(3)) - &dpz,
        ];
        for r in residuals {
            worst = worst.max(r.abs_log2());
        }
    }
    ensure(worst < -250.0, format!("worst residual 2^{worst:.1}"))?;
    Ok(format!("100 samples, worst residual 2^{worst:.1}"))
}

fn modularity() -> Outcome {
    const BITS: u32 = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    for n in [4u32, 5, 7, 11] {
        let taus: Vec<BigComplex> = (0..5)
            .map(|_| BigComplex::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..1.5), BITS + 20))
            .collect();
        let gens = [[[1, 1], [0, 1]], [[1, 0], [n as i64, 1]]];
        let r = gamma1_invariance_check(n, &taus, &gens, BITS);
        ensure(r.verdict == Verdict::Verified, format!("N = {n}: {}", r.verdict.as_str()))?;
        let err = r.max_match_error.unwrap_or(f64::NEG_INFINITY);
        ensure(err < -200.0, format!("N = {n}: residual 2^{err:.1}"))?;
        worst = worst.max(err);
        let control = gamma1_invariance_check(n, &taus[..1], &[[[1, 0], [1, 1]]], BITS);
        ensure(control.verdict == Verdict::Falsified, format!("N = {n}: non-member control not falsified"))?;
    }
    Ok(format!("worst residual 2^{worst:.1}, controls falsified"))
}

fn cm_membership() -> Outcome {
    let f = ImagQuadField::new(-7).unwrap();
    let pt = eval_exact(&f, &f.theta(), 11, 300).map_err(|e| e.to_string())?;
    let r = pt.residual_log2.ok_or("no residual")?;
    ensure(r < -200.0, format!("residual 2^{r:.1}"))?;
    Ok(format!("residual 2^{r:.1}"))
}

fn coset_lemmas() -> Outcome {
    let mut counts = Vec::new();
    for (d, c, p, case, a) in [
        (-2, 1, 5, CaseTag::InertCoprime, 0),
        (-7, 1, 3, CaseTag::InertCoprime, 0),
        (-2, 3, 3, CaseTag::DividesConductor, 0),
    ] {
        let f = field_data(d).unwrap();
        let tp = f.tau_prime(a, c as i64);
        let reps = conductor_raise_cosets(&f, c, p, case, &tp).map_err(|e| e.to_string())?;
        let expected = match case {
            CaseTag::InertCoprime => p as usize + 1,
            CaseTag::DividesConductor => p as usize,
        };
        ensure(reps.len() == expected, format!("(D, c, p) = ({d}, {c}, {p}): {} classes", reps.len()))?;
        ensure(cosets_distinct_check(&reps, p, case, &f, c), format!("(D, c, p) = ({d}, {c}, {p}): not distinct"))?;
        counts.push(reps.len().to_string());
    }
    Ok(format!("{} distinct classes", counts.join(", ")))
}

fn sj_instance(c: u64, a: i64, p: u64, case: CaseTag) -> Result<(), String> {
    let f = field_data(-2).unwrap();
    verify_sj_lattices(&f, c, a, p, case, 4).map(|_| ()).map_err(|e| format!("(c, a, p) = ({c}, {a}, {p}): {e}"))
}

fn lattice_identities() -> Outcome {
    let f = field_data(-2).unwrap();
    let bad = sj_lattice_report_with(&f, 1, 0, 5, CaseTag::InertCoprime, 4, &|_| f.tau()).map_err(|e| e.to_string())?;
    ensure(bad.first_failure().is_some(), "corrupted multiplier passed")?;
    sj_instance(1, 0, 5, CaseTag::InertCoprime)?;
    sj_instance(3, 1, 3, CaseTag::DividesConductor)?;
    Ok("both instances pass, corrupted multiplier fails".into())
}

fn lattice_identities_variant() -> Outcome {
    sj_instance(3, 0, 3, CaseTag::DividesConductor)?;
    Ok("p | c instance with a = 0 passes".into())
}

fn divisor_distribution(height_bits: u32) -> Outcome {
    let inst = DistributionInstance::new(CMPointSpec::new(-2, 1, 0, 4).unwrap(), 5, CaseTag::InertCoprime)
        .map_err(|e| e.to_string())?;
    let opts = DistributionOptions { height_bits, max_bits: 1200, ..Default::default() };
    let r = verify_distribution(&inst, 300, -100.0, &opts).map_err(|e| e.to_string())?;
    let failing: Vec<String> = r
        .layer("divisor")
        .filter(|d| d.verdict != Verdict::Verified)
        .map(|d| format!("{} {}", d.name, d.verdict.as_str()))
        .collect();
    ensure(r.verdict == Verdict::Verified, format!("height 2^{height_bits}: {}", failing.join(", ")))?;
    let control = DistributionOptions { replace_b: Some((3, 17)), ..opts };
    let rc = verify_distribution(&inst, 300, -100.0, &control).map_err(|e| e.to_string())?;
    ensure(rc.verdict == Verdict::Falsified, format!("replaced point gives {}", rc.verdict.as_str()))?;
    Ok(format!("height 2^{height_bits}: symmetric functions recognized, single value not, control falsified"))
}

fn vienna_consistency() -> Outcome {
    const BITS: u32 = 300;
    let f = ImagQuadField::new(-2).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut compared = 0;
    for w in w_group(4, &f) {
        let by_matrix = point_under_matrix(&f, &f.theta(), &GaloisElement::from_w(&w, &f), 4, BITS, None)
            .map_err(|e| e.to_string())?;
        if w.is_scalar() {
            for d in [w.t, w.t + 4, w.t - 4, -w.t] {
                let g = GaloisElement::principal(Mat2::diag(1, d, 4), &f);
                let by_index = point_under_matrix(&f, &f.theta(), &g, 4, BITS, None).map_err(|e| e.to_string())?;
                let by_vienna = vienna_act(&f, &f.int(d), &f.theta(), 4, BITS).map_err(|e| e.to_string())?;
                worst = worst.max(by_index.distance_log2(&by_vienna));
                compared += 1;
            }
        }
        let cmul = &f.int(w.t) + &f.theta().scale(&Rational::from(w.s));
        let by_vienna = vienna_act(&f, &cmul, &f.theta(), 4, BITS).map_err(|e| e.to_string())?;
        worst = worst.max(by_matrix.distance_log2(&by_vienna));
        compared += 1;
    }
    ensure(worst < -240.0, format!("worst distance 2^{worst:.1}"))?;
    let base = eval_exact(&f, &f.theta(), 4, BITS).map_err(|e| e.to_string())?;
    for d in [1, 5, -3, 13] {
        let v = vienna_act(&f, &f.int(d), &f.theta(), 4, BITS).map_err(|e| e.to_string())?;
        let tol = (v.err_exp().max(base.err_exp()) + 1) as f64;
        ensure(v.distance_log2(&base) <= tol, format!("C = {d} moves the point"))?;
    }
    Ok(format!("{compared} comparisons, worst distance 2^{worst:.1}"))
}

fn class_field_premises() -> Outcome {
    let f = field_data(-2).unwrap();
    let got = ramification_profile(&f, 1, 5, 4).map_err(|e| e.to_string())?;
    ensure(got == (true, 6), format!("got {got:?}"))?;
    ensure(ramification_profile(&f, 1, 3, 4).is_err(), "split p = 3 accepted")?;
    ensure(ramification_profile(&f, 1, 17, 4).is_err(), "split p = 17 accepted")?;
    ensure(ramification_profile(&f, 1, 7, 4).is_err(), "p = 7 (not 1 mod 4) accepted")?;
    Ok("(true, 6); split and p != 1 mod N rejected".into())
}

fn main() {
    let criteria: Vec<(&str, &str, Duration, fn() -> Outcome)> = vec![
        ("1", "multiples table", Duration::from_secs(5), multiples_table),
        ("2", "raw form of level 11", Duration::from_secs(60), raw_form_eleven),
        ("3", "optimized model", Duration::from_secs(10), optimized_model),
        ("4", "wp identities", Duration::from_secs(60), wp_identities),
        ("5", "modularity", Duration::from_secs(120), modularity),
        ("6", "CM model membership", Duration::from_secs(30), cm_membership),
        ("7", "coset lemmas", Duration::from_secs(10), coset_lemmas),
        ("8", "lattice identities", Duration::from_secs(10), lattice_identities),
        ("8*", "lattice identities, a = 0", Duration::from_secs(10), lattice_identities_variant),
        ("9", "divisor distribution", Duration::from_secs(1800), || divisor_distribution(64)),
        ("9*", "divisor distribution, height 2^96", Duration::from_secs(1800), || divisor_distribution(96)),
        ("10", "vienna and matrix action", Duration::from_secs(60), vienna_consistency),
        ("11", "class-field premises", Duration::from_secs(1), class_field_premises),
    ];
    let (mut passed, mut total) = (0, 0);
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= limit {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {elapsed:.1?}, limit {limit:?}"))
            }
        });
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        if id.ends_with('*') {
            println!("variant {id} {tag} {name}: {msg} ({elapsed:.2?})");
        } else {
            total += 1;
            passed += outcome.is_ok() as u32;
            println!("criterion {id} {tag} {name}: {msg} ({elapsed:.2?})");
        }
    }
    println!("{passed}/{total} criteria passed");
}
