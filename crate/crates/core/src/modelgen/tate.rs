use super::poly::BivariatePolyQ;
use super::ratfunc::RatFuncQ;

/// A point of `y^2 + (1-c)xy - by = x^3 - bx^2` over Q(b, c).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TatePoint {
    Infinity,
    Affine { x: RatFuncQ, y: RatFuncQ },
}

/// Weierstrass coefficients `(a1, a2, a3)`; `a4 = a6 = 0`.
fn coefficients() -> (RatFuncQ, RatFuncQ, RatFuncQ) {
    let a1 = &RatFuncQ::one() - &RatFuncQ::c();
    let a2 = -&RatFuncQ::b();
    let a3 = -&RatFuncQ::b();
    (a1, a2, a3)
}

impl TatePoint {
    /// The marked point `(0, 0)`.
    pub fn base() -> Self {
        TatePoint::Affine { x: RatFuncQ::zero(), y: RatFuncQ::zero() }
    }

    pub fn affine(x: RatFuncQ, y: RatFuncQ) -> Self {
        TatePoint::Affine { x, y }
    }

    pub fn x(&self) -> Option<&RatFuncQ> {
        match self {
            TatePoint::Affine { x, .. } => Some(x),
            TatePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&RatFuncQ> {
        match self {
            TatePoint::Affine { y, .. } => Some(y),
            TatePoint::Infinity => None,
        }
    }

    /// Whether the point satisfies the curve equation identically.
    pub fn on_curve(&self) -> bool {
        match self {
            TatePoint::Infinity => true,
            TatePoint::Affine { x, y } => cleared_residual(x, y).is_zero(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            TatePoint::Infinity => TatePoint::Infinity,
            TatePoint::Affine { x, y } => {
                let (a1, _, a3) = coefficients();
                let ny = &(&(-y) - &(&a1 * x)) - &a3;
                TatePoint::Affine { x: x.clone(), y: ny }
            }
        }
    }
}

/// `y^2 + a1 xy + a3 y - x^3 - a2 x^2`.
pub fn curve_residual(x: &RatFuncQ, y: &RatFuncQ) -> RatFuncQ {
    let (a1, a2, a3) = coefficients();
    let lhs = &(&y.square() + &(&(&a1 * x) * y)) + &(&a3 * y);
    let x2 = x.square();
    let rhs = &(&x2 * x) + &(&a2 * &x2);
    &lhs - &rhs
}

/// The curve equation with denominators cleared; vanishes exactly when
/// `curve_residual` does.
fn cleared_residual(x: &RatFuncQ, y: &RatFuncQ) -> BivariatePolyQ {
    let (xn, xd, yn, yd) = (x.numer(), x.denom(), y.numer(), y.denom());
    let b = BivariatePolyQ::b();
    let a1 = &BivariatePolyQ::one() - &BivariatePolyQ::c();
    let xd2 = xd * xd;
    let xd3 = &xd2 * xd;
    let yd2 = yd * yd;
    let t1 = &(yn * yn) * &xd3;
    let t2 = &(&(&a1 * xn) * yn) * &(&xd2 * yd);
    let t3 = &(&b * yn) * &(&xd3 * yd);
    let t4 = &(&(xn * xn) * xn) * &yd2;
    let t5 = &(&(&b * xn) * xn) * &(xd * &yd2);
    &(&(&(&t1 + &t2) - &t3) - &t4) + &t5
}

/// Chord-tangent addition.
pub fn tate_add(p: &TatePoint, q: &TatePoint) -> TatePoint {
    let (x1, y1, x2, y2) = match (p, q) {
        (TatePoint::Infinity, _) => return q.clone(),
        (_, TatePoint::Infinity) => return p.clone(),
        (TatePoint::Affine { x: x1, y: y1 }, TatePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    let (a1, a2, a3) = coefficients();
    let (lambda, nu) = if x1 == x2 {
        let s = &(&(y1 + y2) + &(&a1 * x2)) + &a3;
        if s.is_zero() {
            return TatePoint::Infinity;
        }
        // tangent
        let den = &(&y1.mul_i64(2) + &(&a1 * x1)) + &a3;
        let x1sq = x1.square();
        let lnum = &(&x1sq.mul_i64(3) + &(&a2 * x1).mul_i64(2)) - &(&a1 * y1);
        let nnum = &(-&(&x1sq * x1)) - &(&a3 * y1);
        (&lnum / &den, &nnum / &den)
    } else {
        let dx = x2 - x1;
        let lambda = &(y2 - y1) / &dx;
        let nu = &(&(y1 * x2) - &(y2 * x1)) / &dx;
        (lambda, nu)
    };
    let x3 = &(&(&(&lambda.square() + &(&a1 * &lambda)) - &a2) - x1) - x2;
    let y3 = &(&(-&(&(&lambda + &a1) * &x3)) - &nu) - &a3;
    TatePoint::Affine { x: x3, y: y3 }
}

/// `n` times the marked point.
pub fn tate_multiple(n: u32) -> TatePoint {
    tate_multiples(n).pop().unwrap_or(TatePoint::Infinity)
}

/// `[P, 2P, ..., nP]`.
pub fn tate_multiples(n: u32) -> Vec<TatePoint> {
    let p = TatePoint::base();
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = TatePoint::Infinity;
    for _ in 0..n {
        acc = tate_add(&acc, &p);
        out.push(acc.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &str, den: &str) -> RatFuncQ {
        RatFuncQ::new(BivariatePolyQ::parse(num).unwrap(), BivariatePolyQ::parse(den).unwrap())
    }

    #[test]
    fn small_multiples() {
        let m = tate_multiples(3);
        assert_eq!(m[0], TatePoint::base());
        assert_eq!(m[1], TatePoint::affine(rf("b", "1"), rf("b*c", "1")));
        assert_eq!(m[2], TatePoint::affine(rf("c", "1"), rf("b - c", "1")));
    }

    #[test]
    fn identity_and_inverse() {
        let p = tate_multiple(2);
        assert_eq!(tate_add(&p, &TatePoint::Infinity), p);
        assert_eq!(tate_add(&p, &p.neg()), TatePoint::Infinity);
    }

    #[test]
    fn multiples_lie_on_curve() {
        for p in tate_multiples(6) {
            assert!(p.on_curve());
        }
        let p = tate_multiple(3);
        assert!(curve_residual(p.x().unwrap(), p.y().unwrap()).is_zero());
        let off = TatePoint::affine(p.x().unwrap().clone(), RatFuncQ::one());
        assert!(!off.on_curve());
    }
}
