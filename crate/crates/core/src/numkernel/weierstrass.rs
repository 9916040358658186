//! Eisenstein invariants, the Weierstrass function and its derivative, and
//! the j-invariant, all through q-expansions on a reduced lattice.

use rug::Float;

use super::bigcomplex::BigComplex;
use super::lattice::{lattice_reduce, LatticeBasis, ReducedLattice};
use crate::error::{Error, Result};

const INITIAL_GUARD: u32 = 64;
const MAX_ATTEMPTS: usize = 6;

/// Absolute error every public evaluation must reach at `bits` bits.
pub fn target_err_log2(bits: u32) -> f64 {
    -((bits as f64) - 32.0)
}

/// Re-run `f` at growing working precision until its error radius meets the
/// target.
fn with_guard<T>(
    bits: u32,
    what: &str,
    f: impl Fn(u32) -> Result<T>,
    err_of: impl Fn(&T) -> f64,
) -> Result<T> {
    let target = target_err_log2(bits);
    let mut guard = INITIAL_GUARD;
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ATTEMPTS {
        let r = f(bits + guard)?;
        let e = err_of(&r);
        if e <= target {
            return Ok(r);
        }
        last = e;
        if !e.is_finite() {
            guard *= 2;
        } else {
            guard += ((e - target).ceil() as u32).max(32) + 32;
        }
        if guard > 8 * bits + 8192 {
            break;
        }
    }
    Err(Error::PrecisionExhausted(format!(
        "{what}: error 2^{last:.1} above target 2^{target}"
    )))
}

fn two_pi_i(prec: u32) -> BigComplex {
    BigComplex::pi(prec).mul_2exp(1).mul_i()
}

/// `exp(2 pi i x)`.
fn e2pii(x: &BigComplex) -> BigComplex {
    (&two_pi_i(x.prec()) * x).exp()
}

fn log2_abs_upper(x: &BigComplex) -> f64 {
    x.abs_upper_log2()
}

/// Truncation point for `sum n^k q^n/(1-q^n)` with tail below `2^target`.
/// Returns `(M, log2 tail bound)`; the bound
/// `2 (M+1)^k |q|^(M+1) * 4/3` holds once `(1+1/M)^k |q| <= 1/2` and `|q| <= 1/4`.
fn eisenstein_terms(lq: f64, k: u32, target: f64) -> Option<(usize, f64)> {
    if lq > -2.0 {
        return None;
    }
    for m in 1..100_000usize {
        let mf = m as f64;
        if k as f64 * (1.0 + 1.0 / mf).log2() + lq > -1.0 {
            continue;
        }
        let tail = 1.0 + k as f64 * (mf + 1.0).log2() + (mf + 1.0) * lq + (4.0f64 / 3.0).log2();
        if tail <= target {
            return Some((m, tail));
        }
    }
    None
}

/// `E4(q)` and `E6(q)` from their Lambert series.
fn eisenstein_e4_e6(q: &BigComplex, target: f64) -> Result<(BigComplex, BigComplex)> {
    let prec = q.prec();
    let lq = log2_abs_upper(q);
    let (m4, t4) = eisenstein_terms(lq, 3, target - 8.0)
        .ok_or_else(|| Error::PrecisionExhausted("|q| too large for the Eisenstein series".into()))?;
    let (m6, t6) = eisenstein_terms(lq, 5, target - 9.0)
        .ok_or_else(|| Error::PrecisionExhausted("|q| too large for the Eisenstein series".into()))?;
    let m = m4.max(m6);
    let one = BigComplex::one(prec);
    let mut s3 = BigComplex::zero(prec);
    let mut s5 = BigComplex::zero(prec);
    let mut qn = one.clone();
    for n in 1..=m {
        qn = &qn * q;
        let t = &qn / &(&one - &qn);
        let n = n as i64;
        let n3 = t.mul_i64(n * n * n);
        if n as usize <= m4 {
            s3 = &s3 + &n3;
        }
        if n as usize <= m6 {
            s5 = &s5 + &n3.mul_i64(n * n);
        }
    }
    let e4 = (&one + &s3.mul_i64(240)).add_err_log2(t4 + 240f64.log2());
    let e6 = (&one - &s5.mul_i64(504)).add_err_log2(t6 + 504f64.log2());
    Ok((e4, e6))
}

/// `g2`, `g3` of the lattice `(tau, 1)`, for reduced `tau`.
fn g2_g3_reduced(tau: &BigComplex, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let tau = tau.clone().with_prec(prec);
    let q = e2pii(&tau);
    let (e4, e6) = eisenstein_e4_e6(&q, -(prec as f64))?;
    let pi = BigComplex::pi(prec);
    let pi2 = pi.square();
    let pi4 = pi2.square();
    let pi6 = &pi4 * &pi2;
    let g2 = (&pi4.mul_i64(4) * &e4).div_i64(3);
    let g3 = (&pi6.mul_i64(8) * &e6).div_i64(27);
    Ok((g2, g3))
}

fn scale_invariants(
    red: &ReducedLattice,
    g2: BigComplex,
    g3: BigComplex,
) -> (BigComplex, BigComplex) {
    let s2 = red.scale.square();
    let s4 = s2.square();
    let s6 = &s4 * &s2;
    (&g2 / &s4, &g3 / &s6)
}

/// `g2`, `g3` of an arbitrary lattice.
pub fn lattice_invariants(basis: &LatticeBasis, bits: u32) -> Result<(BigComplex, BigComplex)> {
    with_guard(
        bits,
        "lattice invariants",
        |prec| {
            let b = LatticeBasis::new(basis.w1.clone().with_prec(prec), basis.w2.clone().with_prec(prec));
            let red = lattice_reduce(&b)?;
            let (g2, g3) = g2_g3_reduced(&red.tau, prec)?;
            Ok(scale_invariants(&red, g2, g3))
        },
        |(a, b)| a.err_log2().max(b.err_log2()),
    )
}

/// `g2 = 60 G4` and `g3 = 140 G6` of the lattice `(tau, 1)`.
pub fn eisenstein_invariants(tau: &BigComplex, bits: u32) -> Result<(BigComplex, BigComplex)> {
    lattice_invariants(&LatticeBasis::from_tau(tau), bits)
}

/// `j(tau) = 1728 g2^3 / (g2^3 - 27 g3^2)`.
pub fn j_invariant(tau: &BigComplex, bits: u32) -> Result<BigComplex> {
    with_guard(
        bits,
        "j-invariant",
        |prec| {
            let t = tau.clone().with_prec(prec);
            let red = lattice_reduce(&LatticeBasis::from_tau(&t))?;
            let (g2, g3) = g2_g3_reduced(&red.tau, prec)?;
            let g23 = &g2.square() * &g2;
            let den = &g23 - &g3.square().mul_i64(27);
            Ok(&g23.mul_i64(1728) / &den)
        },
        |j| j.err_log2(),
    )
}

/// `w/(1-w)^2`.
fn f_term(w: &BigComplex, one: &BigComplex) -> BigComplex {
    let d = one - w;
    w / &d.square()
}

/// `w(1+w)/(1-w)^3`.
fn g_term(w: &BigComplex, one: &BigComplex) -> BigComplex {
    let d = one - w;
    &(w * &(one + w)) / &(&d.square() * &d)
}

/// Nearest lattice translate: returns `z - m tau - n` with `|x|, |y| <= 1/2`
/// in the coordinates `z = x tau + y`.
fn reduce_z(z: &BigComplex, tau: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let x = Float::with_val(prec, z.im() / tau.im());
    let m = x.round().to_f64() as i64;
    let z1 = z - &tau.mul_i64(m);
    let n = Float::with_val(prec, z1.re().round_ref()).to_f64() as i64;
    &z1 - &BigComplex::from_i64(n, prec)
}

/// `(wp, wp')` for `z` in the reduced cell of `(tau, 1)`.
fn wp_pair_reduced(z: &BigComplex, tau: &BigComplex, prec: u32) -> Result<(BigComplex, BigComplex)> {
    if z.contains_zero() {
        return Err(Error::PoleAtZ);
    }
    let one = BigComplex::one(prec);
    let q = e2pii(tau);
    let u = e2pii(z);
    let u_inv = e2pii(&-z);
    let lq = log2_abs_upper(&q);
    if lq > -2.0 {
        return Err(Error::PrecisionExhausted("|q| too large for the Weierstrass series".into()));
    }
    // tail <= 64 |q|^(M + 1/2)
    let target = -(prec as f64) - 8.0;
    let m = (((target - 6.0) / lq) - 0.5).ceil().max(1.0) as usize;
    let tail = 6.0 + (m as f64 + 0.5) * lq;

    let mut sf = &f_term(&u, &one) + &BigComplex::from_rationals(&rug::Rational::from((1, 12)), &rug::Rational::new(), prec);
    let mut sg = g_term(&u, &one);
    let mut qn = one.clone();
    for _ in 1..=m {
        qn = &qn * &q;
        let a = &qn * &u;
        let b = &qn * &u_inv;
        sf = &sf + &(&(&f_term(&a, &one) + &f_term(&b, &one)) - &f_term(&qn, &one).mul_i64(2));
        sg = &sg + &(&g_term(&a, &one) - &g_term(&b, &one));
    }
    let sf = sf.add_err_log2(tail);
    let sg = sg.add_err_log2(tail);
    let tpi = two_pi_i(prec);
    let tpi2 = tpi.square();
    Ok((&tpi2 * &sf, &(&tpi2 * &tpi) * &sg))
}

fn wp_pair_at(z: &BigComplex, basis: &LatticeBasis, prec: u32) -> Result<(BigComplex, BigComplex)> {
    let b = LatticeBasis::new(basis.w1.clone().with_prec(prec), basis.w2.clone().with_prec(prec));
    let red = lattice_reduce(&b)?;
    let z0 = &z.clone().with_prec(prec) / &red.scale;
    let zr = reduce_z(&z0, &red.tau);
    let (p, dp) = wp_pair_reduced(&zr, &red.tau, prec)?;
    let s2 = red.scale.square();
    let s3 = &s2 * &red.scale;
    Ok((&p / &s2, &dp / &s3))
}

/// `(wp(z), wp'(z))` for the lattice spanned by `basis`.
pub fn wp_pair(z: &BigComplex, basis: &LatticeBasis, bits: u32) -> Result<(BigComplex, BigComplex)> {
    with_guard(
        bits,
        "Weierstrass function",
        |prec| wp_pair_at(z, basis, prec),
        |(a, b)| a.err_log2().max(b.err_log2()),
    )
}

pub fn wp(z: &BigComplex, basis: &LatticeBasis, bits: u32) -> Result<BigComplex> {
    with_guard(bits, "wp", |prec| Ok(wp_pair_at(z, basis, prec)?.0), |a| a.err_log2())
}

pub fn wp_prime(z: &BigComplex, basis: &LatticeBasis, bits: u32) -> Result<BigComplex> {
    with_guard(bits, "wp'", |prec| Ok(wp_pair_at(z, basis, prec)?.1), |a| a.err_log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn rat(re: (i64, i64), im: (i64, i64), prec: u32) -> BigComplex {
        BigComplex::from_rationals(&Rational::from(re), &Rational::from(im), prec)
    }

    fn hexagonal(prec: u32) -> BigComplex {
        let s = BigComplex::sqrt_rational(&Rational::from(-3), prec);
        (&BigComplex::one(prec) + &s).div_i64(2)
    }

    #[test]
    fn square_lattice_g3_vanishes() {
        let (_, g3) = eisenstein_invariants(&BigComplex::i(300), 300).unwrap();
        assert!(g3.abs_log2() < -260.0, "{}", g3.abs_log2());
        assert!(g3.err_exp() <= -268);
    }

    #[test]
    fn hexagonal_lattice_g2_vanishes() {
        let (g2, _) = eisenstein_invariants(&hexagonal(300), 300).unwrap();
        assert!(g2.abs_log2() < -260.0);
    }

    #[test]
    fn j_at_i_and_rho() {
        let j = j_invariant(&BigComplex::i(300), 300).unwrap();
        assert!(j.distance_log2(&BigComplex::from_i64(1728, 300)) < -100.0);
        let j = j_invariant(&hexagonal(300), 300).unwrap();
        assert!(j.abs_log2() < -100.0);
    }

    #[test]
    fn j_is_periodic() {
        let t = rat((1, 7), (5, 4), 200);
        let a = j_invariant(&t, 200).unwrap();
        let b = j_invariant(&(&t + &BigComplex::one(200)), 200).unwrap();
        assert!(a.overlaps(&b, -150.0));
    }

    #[test]
    fn parity_and_differential_equation() {
        let bits = 200;
        let tau = rat((-1, 5), (11, 10), bits);
        let basis = LatticeBasis::from_tau(&tau);
        let z = rat((2, 7), (1, 3), bits);
        let (p, dp) = wp_pair(&z, &basis, bits).unwrap();
        let (pm, dpm) = wp_pair(&-&z, &basis, bits).unwrap();
        assert!(p.overlaps(&pm, -180.0));
        assert!(dp.overlaps(&-&dpm, -180.0));
        let (g2, g3) = lattice_invariants(&basis, bits).unwrap();
        let rhs = &(&p.square() * &p).mul_i64(4) - &(&(&g2 * &p) + &g3);
        let res = &dp.square() - &rhs;
        assert!(res.abs_upper_log2() < -(bits as f64 - 50.0));
    }

    #[test]
    fn lattice_point_is_a_pole() {
        let tau = rat((0, 1), (3, 2), 128);
        let basis = LatticeBasis::from_tau(&tau);
        let z = &tau.mul_i64(2) + &BigComplex::from_i64(-1, 128);
        assert_eq!(wp(&z, &basis, 128).unwrap_err(), Error::PoleAtZ);
    }
}
