use rug::Float;

use super::bigcomplex::BigComplex;
use crate::error::{Error, Result};

/// Ordered pair of periods `(w1, w2)` with `Im(w1/w2) > 0`.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    pub w1: BigComplex,
    pub w2: BigComplex,
}

impl LatticeBasis {
    pub fn new(w1: BigComplex, w2: BigComplex) -> Self {
        LatticeBasis { w1, w2 }
    }

    /// The lattice `(tau, 1)`.
    pub fn from_tau(tau: &BigComplex) -> Self {
        LatticeBasis { w1: tau.clone(), w2: BigComplex::one(tau.prec()) }
    }

    pub fn scaled(&self, x: &BigComplex) -> Self {
        LatticeBasis { w1: &self.w1 * x, w2: &self.w2 * x }
    }

    /// `m*w1 + n*w2`.
    pub fn point(&self, m: i64, n: i64) -> BigComplex {
        &self.w1.mul_i64(m) + &self.w2.mul_i64(n)
    }
}

/// Integer 2x2 matrix acting on column vectors of periods.
pub type IntMatrix = [[i64; 2]; 2];

pub fn int_matrix_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut r = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn int_matrix_det(a: &IntMatrix) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// A lattice written as `scale * (tau, 1)` with `tau` in the standard
/// fundamental domain.
#[derive(Clone, Debug)]
pub struct ReducedLattice {
    pub tau: BigComplex,
    pub scale: BigComplex,
    /// `(tau*scale, scale)^T = unimodular * (w1, w2)^T`.
    pub unimodular: IntMatrix,
}

const MAX_STEPS: usize = 10_000;

fn nearest_integer(x: &Float) -> i64 {
    x.clone().round().to_f64() as i64
}

/// Gauss reduction of the period ratio into the fundamental domain.
pub fn lattice_reduce(basis: &LatticeBasis) -> Result<ReducedLattice> {
    let ratio = &basis.w1 / &basis.w2;
    if !ratio.err_log2().is_finite() && ratio.err_log2() > 0.0 {
        return Err(Error::DegenerateLattice);
    }
    let im_abs = super::bigcomplex::log2_abs_float(ratio.im());
    if im_abs <= ratio.err_log2() {
        return Err(Error::DegenerateLattice);
    }
    // orientation: negate w1 when Im(w1/w2) < 0
    let mut m: IntMatrix = if ratio.im().is_sign_negative() { [[-1, 0], [0, 1]] } else { [[1, 0], [0, 1]] };
    let mut tau = if ratio.im().is_sign_negative() { -&ratio } else { ratio };

    let half = Float::with_val(tau.prec(), 0.5);
    for _ in 0..MAX_STEPS {
        let n = nearest_integer(tau.re());
        if n != 0 {
            tau = &tau - &BigComplex::from_i64(n, tau.prec());
            m = int_matrix_mul(&[[1, -n], [0, 1]], &m);
        }
        let norm = Float::with_val(tau.prec(), tau.as_complex().norm_ref());
        if norm < 1 {
            // tau -> -1/tau, (w1, w2) -> (-w2, w1)
            tau = -&tau.recip();
            m = int_matrix_mul(&[[0, -1], [1, 0]], &m);
            continue;
        }
        let re_ok = Float::with_val(tau.prec(), tau.re().abs_ref()) <= half;
        if re_ok {
            break;
        }
    }

    // recompute from the integer matrix for a clean error radius
    let w1p = &basis.w1.mul_i64(m[0][0]) + &basis.w2.mul_i64(m[0][1]);
    let w2p = &basis.w1.mul_i64(m[1][0]) + &basis.w2.mul_i64(m[1][1]);
    let tau = &w1p / &w2p;
    Ok(ReducedLattice { tau, scale: w2p, unimodular: m })
}
