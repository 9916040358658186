use serde::Serialize;

use crate::error::{Error, Result};

/// Positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct QuadFormClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl QuadFormClass {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadFormClass { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let QuadFormClass { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_principal(&self) -> bool {
        self.a == 1
    }

    /// The reduced form of discriminant `disc` representing 1.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        QuadFormClass { a: 1, b, c: (b * b - disc) / 4 }
    }
}

fn check_disc(disc: i64) -> Result<()> {
    if disc >= 0 || !(disc.rem_euclid(4) == 0 || disc.rem_euclid(4) == 1) {
        return Err(Error::InvalidInput(format!("{disc} is not a negative discriminant")));
    }
    Ok(())
}

/// All reduced primitive forms of discriminant `disc`, in `(a, b)` order.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadFormClass>> {
    check_disc(disc)?;
    let by_a = enumerate_by_a(disc);
    debug_assert_eq!(by_a.len(), enumerate_by_c(disc).len());
    Ok(by_a)
}

pub fn class_number(disc: i64) -> Result<usize> {
    Ok(reduced_forms(disc)?.len())
}

/// Scan `|b| <= a <= sqrt(|disc|/3)` and solve for `c`.
fn enumerate_by_a(disc: i64) -> Vec<QuadFormClass> {
    let mut out = Vec::new();
    let bound = ((-disc) as f64 / 3.0).sqrt().floor() as i64 + 1;
    for a in 1..=bound {
        if 3 * a * a > -disc {
            break;
        }
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadFormClass::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
    }
    out
}

/// Independent scan over `(b, c)` pairs with `a` solved from the
/// discriminant, used as a cross-check.
pub fn enumerate_by_c(disc: i64) -> Vec<QuadFormClass> {
    let mut out = Vec::new();
    let n = -disc;
    let mut b = 0i64;
    while b * b <= n / 3 + 1 {
        let signs: &[i64] = if b == 0 { &[0] } else { &[1, -1] };
        for sb in signs.iter().map(|s| s * b) {
            let num = sb * sb - disc;
            if num % 4 != 0 {
                continue;
            }
            let ac = num / 4;
            for a in 1..=ac {
                if ac % a != 0 {
                    continue;
                }
                let f = QuadFormClass::new(a, sb, ac / a);
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
        }
        b += 1;
    }
    out.sort_by_key(|f| (f.a, f.b));
    out
}
