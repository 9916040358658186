use std::fmt;

use serde::Serialize;

use crate::cmfields::ImagQuadField;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// 2x2 matrix over Z/N, entries kept in `0..N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub n: i64,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64, n: i64) -> Self {
        let r = |v: i64| v.rem_euclid(n);
        Mat2 { a: r(a), b: r(b), c: r(c), d: r(d), n }
    }

    pub fn identity(n: i64) -> Self {
        Mat2::new(1, 0, 0, 1, n)
    }

    pub fn diag(x: i64, y: i64, n: i64) -> Self {
        Mat2::new(x, 0, 0, y, n)
    }

    pub fn det(&self) -> i64 {
        (self.a * self.d - self.b * self.c).rem_euclid(self.n)
    }

    pub fn is_invertible(&self) -> bool {
        gcd(self.det(), self.n) == 1
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        assert_eq!(self.n, o.n, "moduli differ");
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.n,
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d, self.n)
    }

    /// Equality up to sign.
    pub fn eq_pm(&self, o: &Mat2) -> bool {
        self == o || *self == o.neg()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {})) mod {}", self.a, self.b, self.c, self.d, self.n)
    }
}

/// `((t - B s, -C s), (s, t))` mod N for the minimal polynomial
/// `x^2 + B x + C` of theta.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct WMatrix {
    pub t: i64,
    pub s: i64,
    pub n: i64,
    pub b_theta: i64,
    pub c_theta: i64,
}

impl WMatrix {
    pub fn new(t: i64, s: i64, n: i64, field: &ImagQuadField) -> Self {
        WMatrix { t: t.rem_euclid(n), s: s.rem_euclid(n), n, b_theta: field.b_theta, c_theta: field.c_theta }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.t - self.b_theta * self.s, -self.c_theta * self.s, self.s, self.t, self.n)
    }

    pub fn det(&self) -> i64 {
        self.matrix().det()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix().eq_pm(&Mat2::identity(self.n))
    }

    /// Whether the matrix is scalar, i.e. comes from a rational integer.
    pub fn is_scalar(&self) -> bool {
        self.s == 0
    }
}

/// Invertible W-matrices mod N, one per `{M, -M}`, identity first.
pub fn w_group(n: u32, field: &ImagQuadField) -> Vec<WMatrix> {
    let n = n as i64;
    let mut out: Vec<WMatrix> = Vec::new();
    let push = |w: WMatrix, out: &mut Vec<WMatrix>| {
        if w.matrix().is_invertible() && !out.iter().any(|o| o.matrix().eq_pm(&w.matrix())) {
            out.push(w);
        }
    };
    push(WMatrix::new(1 % n, 0, n, field), &mut out);
    for t in 0..n {
        for s in 0..n {
            push(WMatrix::new(t, s, n, field), &mut out);
        }
    }
    out
}

/// Row index `(k1/N, k2/N)` in `(1/N)Z^2 / Z^2`, naming the torsion point
/// `(k1 tau + k2)/N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FrickeIndex {
    pub k1: i64,
    pub k2: i64,
    pub n: i64,
}

impl FrickeIndex {
    pub fn new(k1: i64, k2: i64, n: i64) -> Self {
        FrickeIndex { k1: k1.rem_euclid(n), k2: k2.rem_euclid(n), n }
    }

    /// The standard index `(0, 1/N)`.
    pub fn standard(n: i64) -> Self {
        FrickeIndex::new(0, 1, n)
    }

    pub fn is_zero(&self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }

    pub fn scale(&self, k: i64) -> Self {
        FrickeIndex::new(self.k1 * k, self.k2 * k, self.n)
    }
}

/// `r * alpha` as row vector times matrix, mod 1.
pub fn act_index(r: &FrickeIndex, alpha: &Mat2) -> FrickeIndex {
    assert_eq!(r.n, alpha.n, "moduli differ");
    FrickeIndex::new(r.k1 * alpha.a + r.k2 * alpha.c, r.k1 * alpha.b + r.k2 * alpha.d, r.n)
}
