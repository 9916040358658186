use super::field::{is_prime, prime_splitting, ImagQuadField, Splitting};
use crate::error::{Error, Result};

/// Class-field premises for a prime `p` at conductor `c` and level `N`.
///
/// Returns whether `p O_K` splits completely in the level-`N` extended ring
/// class field of conductor `c`, and the relative degree `p + 1` of the
/// conductor raise from `c` to `cp`.
pub fn ramification_profile(field: &ImagQuadField, c: u64, p: u64, n: u32) -> Result<(bool, u64)> {
    let fail = |why: String| Err(Error::HypothesisViolated(why));
    if !is_prime(p) {
        return fail(format!("{p} is not prime"));
    }
    if c == 0 || c.is_multiple_of(p) {
        return fail(format!("p = {p} is not prime to c = {c}"));
    }
    let s = prime_splitting(p, field);
    if s != Splitting::Inert {
        return fail(format!("p = {p} is {s:?} in Q(sqrt {}), not inert", field.d));
    }
    if n == 0 || p % n as u64 != 1 % n as u64 {
        return fail(format!("p = {p} is not 1 mod N = {n}"));
    }
    // p O_K is generated by p, a rational integer that is 1 mod N, so its
    // class in I_K(cN)/P_{K,Z,N}(cN) is trivial.
    Ok((true, p + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile() {
        let f = ImagQuadField::new(-2).unwrap();
        assert_eq!(ramification_profile(&f, 1, 5, 4).unwrap(), (true, 6));
        assert!(ramification_profile(&f, 1, 3, 2).is_err());
        assert!(ramification_profile(&f, 1, 13, 4).is_ok());
        assert!(ramification_profile(&f, 1, 5, 3).is_err());
    }
}
