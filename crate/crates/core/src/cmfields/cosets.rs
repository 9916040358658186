use rug::ops::{Pow, RemRounding};
use rug::{Integer, Rational};

use super::field::{reduce_mod, valuation, ImagQuadField, KElement};
use super::padic::{check_case, CaseTag};
use crate::error::{Error, Result};

/// Coset representatives for the conductor raise at `p`:
/// `{a + cj + tau} + {1}` in the inert case, `{(tau' + j)/tau'}` when `p | c`.
pub fn conductor_raise_cosets(
    field: &ImagQuadField,
    c: u64,
    p: u64,
    case: CaseTag,
    tau_prime: &KElement,
) -> Result<Vec<KElement>> {
    check_case(field, c, p, case)?;
    let cr = Rational::from(c);
    // tau' = (a + tau)/c
    if Rational::from(&tau_prime.y * &cr) != 1 {
        return Err(Error::CaseMismatch(format!("tau' = {tau_prime} is not of the form (a + tau)/{c}")));
    }
    let a = Rational::from(&tau_prime.x * &cr);
    if *a.denom() != 1 {
        return Err(Error::CaseMismatch(format!("tau' = {tau_prime} has non-integral a")));
    }
    let a = a.numer().to_i64().ok_or_else(|| Error::InvalidInput("a out of range".into()))?;
    let reps = match case {
        CaseTag::InertCoprime => {
            let mut v: Vec<KElement> = (0..p as i64).map(|j| field.elem(a + c as i64 * j, 1)).collect();
            v.push(field.int(1));
            v
        }
        CaseTag::DividesConductor => {
            (0..p as i64).map(|j| &tau_prime.add_rational(&Rational::from(j)) / tau_prime).collect()
        }
    };
    Ok(reps)
}

/// Residues `(x, y) mod m` of a p-integral element.
fn residues(e: &KElement, m: &Integer) -> Option<(Integer, Integer)> {
    Some((reduce_mod(&e.x, m)?, reduce_mod(&e.y, m)?))
}

/// `(x1 + y1 t)(x2 + y2 t) mod m` with `t^2 = T t - N`.
fn mul_mod(a: &(Integer, Integer), b: &(Integer, Integer), field: &ImagQuadField, m: &Integer) -> (Integer, Integer) {
    let yy = Integer::from(&a.1 * &b.1);
    let x = Integer::from(&a.0 * &b.0) - Integer::from(&yy * field.tau_norm);
    let y = Integer::from(&a.0 * &b.1) + Integer::from(&a.1 * &b.0) + yy * field.tau_trace;
    (x.rem_euc(m), y.rem_euc(m))
}

/// Pairwise distinctness of the representatives in the relevant finite
/// quotient, by exhaustive search over the subgroup being divided out.
///
/// Inert case: `(O_K/p)^*` modulo `F_p^*`. Case `p | c` with `p^n || c`:
/// `(O_K/p^(n+2))^*` modulo the units `x + y tau` with `p^(n+1) | y`.
pub fn cosets_distinct_check(reps: &[KElement], p: u64, case: CaseTag, field: &ImagQuadField, c: u64) -> bool {
    let (modulus, subgroup): (Integer, Vec<(Integer, Integer)>) = match case {
        CaseTag::InertCoprime => {
            let m = Integer::from(p);
            let sub = (1..p).map(|l| (Integer::from(l), Integer::new())).collect();
            (m, sub)
        }
        CaseTag::DividesConductor => {
            let n = valuation(&Rational::from(c), p).max(0) as u32;
            let m = Integer::from(p).pow(n + 2);
            let step = Integer::from(p).pow(n + 1);
            let mut sub = Vec::new();
            let mut x = Integer::from(1);
            while x < m {
                if !x.is_divisible_u(p as u32) {
                    let mut y = Integer::new();
                    while y < m {
                        sub.push((x.clone(), y.clone()));
                        y += &step;
                    }
                }
                x += 1;
            }
            (m, sub)
        }
    };
    let mut res = Vec::with_capacity(reps.len());
    for r in reps {
        let Some(v) = residues(r, &modulus) else { return false };
        // units only: the norm must be prime to p
        let nr = r.norm();
        if valuation(&nr, p) != 0 {
            return false;
        }
        res.push(v);
    }
    for i in 0..res.len() {
        for j in (i + 1)..res.len() {
            if subgroup.iter().any(|u| mul_mod(&res[j], u, field, &modulus) == res[i]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inert_counts() {
        let f = ImagQuadField::new(-2).unwrap();
        let reps = conductor_raise_cosets(&f, 1, 5, CaseTag::InertCoprime, &f.tau()).unwrap();
        assert_eq!(reps.len(), 6);
        assert!(reps.contains(&f.int(1)));
        assert!(cosets_distinct_check(&reps, 5, CaseTag::InertCoprime, &f, 1));
        let mut dup = reps.clone();
        dup.push(reps[2].scale(&Rational::from(3)));
        assert!(!cosets_distinct_check(&dup, 5, CaseTag::InertCoprime, &f, 1));
    }

    #[test]
    fn conductor_case_counts() {
        let f = ImagQuadField::new(-2).unwrap();
        let tp = f.tau_prime(0, 3);
        let reps = conductor_raise_cosets(&f, 3, 3, CaseTag::DividesConductor, &tp).unwrap();
        assert_eq!(reps.len(), 3);
        // j = 0 gives 1 itself; there is no extra representative
        assert_eq!(reps[0], f.int(1));
        assert!(cosets_distinct_check(&reps, 3, CaseTag::DividesConductor, &f, 3));
    }
}
