//! Greatest common divisors in Q[b, c], viewed as polynomials in `c` with
//! coefficients in Q[b].

use rug::Rational;

use super::poly::{BivariatePolyQ, Monomial};

/// Dense univariate polynomial over Q, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
struct UPoly(Vec<Rational>);

impl UPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|v| *v == 0) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("zero polynomial")
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut r = vec![Rational::new(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += Rational::from(a * b);
            }
        }
        UPoly(r).trim()
    }

    fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut r = vec![Rational::new(); n];
        for (i, a) in self.0.iter().enumerate() {
            r[i] += a;
        }
        for (i, b) in o.0.iter().enumerate() {
            r[i] -= b;
        }
        UPoly(r).trim()
    }

    fn rem_quo(&self, d: &UPoly) -> (UPoly, UPoly) {
        let mut r = self.clone();
        let mut q = vec![Rational::new(); self.0.len().saturating_sub(d.0.len()) + 1];
        let dl = d.lead().clone();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let k = Rational::from(r.lead() / &dl);
            for (i, v) in d.0.iter().enumerate() {
                r.0[i + shift] -= Rational::from(v * &k);
            }
            q[shift] = k;
            r = r.trim();
        }
        (r, UPoly(q).trim())
    }

    fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        UPoly(self.0.iter().map(|v| Rational::from(v / &l)).collect())
    }

    fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (r, _) = a.rem_quo(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    fn div_exact(&self, d: &UPoly) -> UPoly {
        let (r, q) = self.rem_quo(d);
        debug_assert!(r.is_zero());
        q
    }
}

/// Coefficients of powers of `c`, each a polynomial in `b`.
#[derive(Clone, Debug)]
struct Recursive(Vec<UPoly>);

impl Recursive {
    fn from_poly(p: &BivariatePolyQ) -> Self {
        let dc = p.degree_c() as usize;
        let db = p.degree_b() as usize;
        let mut rows = vec![vec![Rational::new(); db + 1]; dc + 1];
        for (m, v) in p.terms() {
            rows[m.c as usize][m.b as usize] = v.clone();
        }
        Recursive(rows.into_iter().map(|r| UPoly(r).trim()).collect()).trim()
    }

    fn to_poly(&self) -> BivariatePolyQ {
        let mut p = BivariatePolyQ::zero();
        for (j, row) in self.0.iter().enumerate() {
            for (i, v) in row.0.iter().enumerate() {
                p.add_term(Monomial::new(i as u32, j as u32), v.clone());
            }
        }
        p
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|v| v.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn content(&self) -> UPoly {
        let mut g = UPoly::default();
        for row in &self.0 {
            g = UPoly::gcd(&g, row);
            if g.degree() == 0 && !g.is_zero() {
                break;
            }
        }
        g
    }

    fn primitive(&self) -> Recursive {
        let g = self.content();
        Recursive(self.0.iter().map(|r| r.div_exact(&g)).collect()).trim()
    }

    /// Pseudo-remainder with respect to `c`.
    fn prem(&self, d: &Recursive) -> Recursive {
        let mut r = self.clone();
        let lc = d.0.last().expect("zero divisor").clone();
        while !r.is_zero() && r.degree() >= d.degree() {
            let shift = r.degree() - d.degree();
            let lr = r.0.last().unwrap().clone();
            let mut next: Vec<UPoly> = r.0.iter().map(|v| v.mul(&lc)).collect();
            for (i, v) in d.0.iter().enumerate() {
                next[i + shift] = next[i + shift].sub(&v.mul(&lr));
            }
            r = Recursive(next).trim();
            // scale rows down to keep coefficients small
            if !r.is_zero() {
                let g = r.content();
                if g.degree() > 0 {
                    r = Recursive(r.0.iter().map(|v| v.div_exact(&g)).collect()).trim();
                }
            }
        }
        r
    }
}

/// Monic-in-the-grlex-sense greatest common divisor, normalized by
/// `BivariatePolyQ::primitive`.
pub fn poly_gcd(a: &BivariatePolyQ, b: &BivariatePolyQ) -> BivariatePolyQ {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let ra = Recursive::from_poly(a);
    let rb = Recursive::from_poly(b);
    let cont = UPoly::gcd(&ra.content(), &rb.content());
    let (mut x, mut y) = (ra.primitive(), rb.primitive());
    if y.degree() > x.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        if y.degree() == 0 {
            x = Recursive(vec![UPoly(vec![Rational::from(1)])]);
            break;
        }
        let r = x.prem(&y);
        x = y;
        y = if r.is_zero() { r } else { r.primitive() };
    }
    let g = x.primitive();
    let g = Recursive(g.0.iter().map(|v| v.mul(&cont)).collect()).trim();
    g.to_poly().primitive()
}
