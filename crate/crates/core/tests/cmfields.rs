use heegner1::cmfields::*;
use heegner1::Error;
use proptest::prelude::*;
use rug::Rational;

fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).take(count).collect()
}

/// Roots of the minimal polynomial of tau_K in F_p: two distinct, one
/// double, or none.
fn splitting_by_roots(f: &ImagQuadField, p: u64) -> Splitting {
    let (t, n) = (f.tau_trace.rem_euclid(p as i64) as u64, f.tau_norm.rem_euclid(p as i64) as u64);
    let roots: Vec<u64> = (0..p).filter(|&x| (x * x + p * p - t * x + n).is_multiple_of(p)).collect();
    match roots.len() {
        0 => Splitting::Inert,
        1 => Splitting::Ramified,
        _ => Splitting::Split,
    }
}

#[test]
fn field_data_examples() {
    let f = field_data(-7).unwrap();
    assert_eq!((f.dk, f.b_theta, f.c_theta), (-7, 1, 2));
    assert_eq!(f.theta().to_string(), ImagQuadField::new(-7).unwrap().elem(-1, 1).to_string());
    let f = field_data(-2).unwrap();
    assert_eq!((f.dk, f.b_theta, f.c_theta), (-8, 0, 2));
    assert_eq!(f.theta(), f.tau());
    let f = field_data(-1).unwrap();
    assert_eq!(f.dk, -4);
    assert_eq!(&f.theta() * &f.theta(), f.int(-1));
    assert_eq!(field_data(-4).unwrap_err(), Error::InvalidD(-4));
    assert_eq!(field_data(3).unwrap_err(), Error::InvalidD(3));
}

#[test]
fn theta_satisfies_its_minimal_polynomial() {
    for d in [-1, -2, -3, -5, -6, -7, -11, -15, -19, -23, -163] {
        let f = field_data(d).unwrap();
        let t = f.theta();
        let v = &(&(&t * &t) + &t.scale(&Rational::from(f.b_theta))) + &f.int(f.c_theta);
        assert!(v.is_zero(), "D = {d}");
        assert_eq!(f.b_theta * f.b_theta - 4 * f.c_theta, f.dk);
    }
}

#[test]
fn splitting_matches_root_counting() {
    for d in [-1, -2, -3, -7, -23, -163] {
        let f = field_data(d).unwrap();
        for p in first_primes(100) {
            assert_eq!(prime_splitting(p, &f), splitting_by_roots(&f, p), "D = {d}, p = {p}");
        }
    }
    let f = field_data(-2).unwrap();
    assert_eq!(prime_splitting(3, &f), Splitting::Split);
    assert_eq!(prime_splitting(5, &f), Splitting::Inert);
    assert_eq!(prime_splitting(2, &f), Splitting::Ramified);
}

#[test]
fn class_groups() {
    assert_eq!(reduced_forms(-4).unwrap(), vec![QuadFormClass::new(1, 0, 1)]);
    assert_eq!(reduced_forms(-8).unwrap(), vec![QuadFormClass::new(1, 0, 2)]);
    let mut f23 = reduced_forms(-23).unwrap();
    f23.sort_by_key(|f| (f.a, f.b));
    assert_eq!(f23, vec![QuadFormClass::new(1, 1, 6), QuadFormClass::new(2, -1, 3), QuadFormClass::new(2, 1, 3)]);
    // known class numbers
    for (disc, h) in [(-3, 1), (-20, 2), (-47, 5), (-71, 7), (-72, 2), (-200, 6), (-163, 1)] {
        assert_eq!(class_number(disc).unwrap(), h, "disc {disc}");
    }
    assert!(reduced_forms(-6).is_err());
}

#[test]
fn coset_lemmas() {
    let f = field_data(-2).unwrap();
    let reps = conductor_raise_cosets(&f, 1, 5, CaseTag::InertCoprime, &f.tau()).unwrap();
    assert_eq!(reps.len(), 6);
    assert!(reps.contains(&f.int(1)));
    assert!(cosets_distinct_check(&reps, 5, CaseTag::InertCoprime, &f, 1));
    let mut dup = reps.clone();
    dup.push(reps[1].clone());
    assert!(!cosets_distinct_check(&dup, 5, CaseTag::InertCoprime, &f, 1));

    let f7 = field_data(-7).unwrap();
    let reps = conductor_raise_cosets(&f7, 1, 3, CaseTag::InertCoprime, &f7.tau()).unwrap();
    assert_eq!(reps.len(), 4);
    assert!(cosets_distinct_check(&reps, 3, CaseTag::InertCoprime, &f7, 1));

    let tp = f.tau_prime(0, 3);
    let reps = conductor_raise_cosets(&f, 3, 3, CaseTag::DividesConductor, &tp).unwrap();
    assert_eq!(reps.len(), 3);
    assert!(cosets_distinct_check(&reps, 3, CaseTag::DividesConductor, &f, 3));
}

#[test]
fn case_tags_are_checked() {
    let f = field_data(-2).unwrap();
    assert!(matches!(check_case(&f, 1, 3, CaseTag::InertCoprime), Err(Error::CaseMismatch(_))));
    assert!(matches!(check_case(&f, 1, 5, CaseTag::DividesConductor), Err(Error::CaseMismatch(_))));
    assert!(matches!(check_case(&f, 1, 4, CaseTag::InertCoprime), Err(Error::CaseMismatch(_))));
    assert_eq!(CaseTag::infer(&f, 1, 5), Some(CaseTag::InertCoprime));
    assert_eq!(CaseTag::infer(&f, 3, 3), Some(CaseTag::DividesConductor));
    assert_eq!(CaseTag::infer(&f, 1, 3), None);
}

#[test]
fn sj_identities() {
    let f = field_data(-2).unwrap();
    let r = verify_sj_lattices(&f, 1, 0, 5, CaseTag::InertCoprime, 4).unwrap();
    assert_eq!(r.entries.len(), 5);
    let r = verify_sj_lattices(&f, 3, 0, 3, CaseTag::DividesConductor, 4).unwrap();
    assert_eq!(r.entries.len(), 3);
    // tau' = (1 + sqrt -2)/3 has multiplier ring O_K, so the order-c
    // multipliers do not carry the lattices onto each other
    let r = sj_lattice_report(&f, 3, 1, 3, CaseTag::DividesConductor, 4).unwrap();
    assert!(!r.all_passed);
    assert!(r.notes.iter().any(|n| n.contains("divides N(a + tau)")));
    // wrong multiplier
    let bad = sj_lattice_report_with(&f, 1, 0, 5, CaseTag::InertCoprime, 4, &|_| f.tau()).unwrap();
    assert!(bad.first_failure().is_some());
    // p dividing the level breaks the torsion statement
    assert!(matches!(
        verify_sj_lattices(&f, 1, 0, 5, CaseTag::InertCoprime, 10),
        Err(Error::HypothesisViolated(_))
    ));
}

#[test]
fn lattice_equality_examples() {
    let f = field_data(-2).unwrap();
    let tp = f.tau();
    let inv5 = Rational::from((1, 5));
    for j in 0..5i64 {
        let b1 = PadicLatticeBasis::from_generators(&f.int(1), &tp.add_rational(&Rational::from(j)).scale(&inv5), 5);
        let s = f.elem(j, 1);
        let b2 = PadicLatticeBasis::from_generators(&(&s * &f.int(1).scale(&inv5)), &(&s * &tp), 5);
        assert!(lattice_equal_at_p(&b1, &b2).unwrap(), "j = {j}");
    }
    let b = PadicLatticeBasis::from_generators(&f.int(1), &tp, 5);
    assert!(lattice_equal_at_p(&b, &b).unwrap());
    assert!(!lattice_equal_at_p(&b, &b.scaled(&Rational::from(5))).unwrap());
}

#[test]
fn ramification_premises() {
    let f = field_data(-2).unwrap();
    assert_eq!(ramification_profile(&f, 1, 5, 4).unwrap(), (true, 6));
    assert!(matches!(ramification_profile(&f, 1, 3, 4), Err(Error::HypothesisViolated(_))));
    assert!(matches!(ramification_profile(&f, 1, 7, 4), Err(Error::HypothesisViolated(_))));
    assert!(matches!(ramification_profile(&f, 5, 5, 4), Err(Error::HypothesisViolated(_))));
}

fn elem(f: &ImagQuadField, x: (i64, i64), y: (i64, i64)) -> KElement {
    f.elem(Rational::from(x), Rational::from(y))
}

/// Generators moved by an integer matrix whose determinant is a unit at p.
fn moved(g: &(KElement, KElement), m: [[i64; 2]; 2]) -> (KElement, KElement) {
    let s = |k: i64| Rational::from(k);
    let a = &g.0.scale(&s(m[0][0])) + &g.1.scale(&s(m[1][0]));
    let b = &g.0.scale(&s(m[0][1])) + &g.1.scale(&s(m[1][1]));
    (a, b)
}

fn unit_matrix(p: i64) -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::array::uniform4(-20i64..20)
        .prop_filter("determinant prime to p", move |v| (v[0] * v[3] - v[1] * v[2]).rem_euclid(p) != 0)
        .prop_map(|v| [[v[0], v[1]], [v[2], v[3]]])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn lattice_equality_is_an_equivalence(
        x1 in 1i64..30, y1 in -30i64..30, x2 in -30i64..30, y2 in 1i64..30, den in 1i64..30,
        u in unit_matrix(5), v in unit_matrix(5),
    ) {
        let f = field_data(-2).unwrap();
        let g = (elem(&f, (x1, den), (y1, 1)), elem(&f, (x2, 1), (y2, den)));
        prop_assume!(!PadicLatticeBasis::from_generators(&g.0, &g.1, 5).det().is_zero());
        let g2 = moved(&g, u);
        let g3 = moved(&g2, v);
        let b1 = PadicLatticeBasis::from_generators(&g.0, &g.1, 5);
        let b2 = PadicLatticeBasis::from_generators(&g2.0, &g2.1, 5);
        let b3 = PadicLatticeBasis::from_generators(&g3.0, &g3.1, 5);
        prop_assert!(lattice_equal_at_p(&b1, &b1).unwrap());
        prop_assert_eq!(lattice_equal_at_p(&b1, &b2).unwrap(), lattice_equal_at_p(&b2, &b1).unwrap());
        prop_assert!(lattice_equal_at_p(&b1, &b2).unwrap());
        prop_assert!(lattice_equal_at_p(&b2, &b3).unwrap());
        prop_assert!(lattice_equal_at_p(&b1, &b3).unwrap());
        prop_assert!(!lattice_equal_at_p(&b1, &b1.scaled(&Rational::from(5))).unwrap());
    }

    #[test]
    fn conjugation_and_norm(x in -50i64..50, y in -50i64..50, d in 1i64..20) {
        let f = field_data(-7).unwrap();
        let a = elem(&f, (x, d), (y, 1));
        let n = &a * &a.conj();
        prop_assert_eq!(n.clone(), f.elem(a.norm(), 0));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse(), f.int(1));
        }
    }
}
