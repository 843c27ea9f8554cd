//! Positive definite binary quadratic forms `a x^2 + b xy + c y^2` of negative
//! discriminant: reduction, the form class group, prime forms and the norm
//! equation `x^2 + n y^2 = m`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{integer_sqrt, is_prime, is_square, legendre, sqrt_mod_prime};
use crate::error::{arg_err, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Reduced forms of one discriminant, sorted by `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassGroupData {
    pub discriminant: i64,
    pub reduced_forms: Vec<QuadForm>,
    pub class_number: usize,
}

pub fn check_discriminant(d: i64) -> Result<()> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return arg_err(format!("{d} is not a negative discriminant (need D < 0, D = 0,1 mod 4)"));
    }
    Ok(())
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d) / 4)
    }

    pub fn is_principal(&self) -> bool {
        self.reduce() == QuadForm::principal(self.discriminant())
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c).reduce()
    }

    /// The unique reduced form properly equivalent to `self`.
    pub fn reduce(&self) -> Self {
        let d = self.discriminant() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            // Bring b into (-a, a].
            if b <= -a || b > a {
                let two_a = 2 * a;
                let mut nb = b.rem_euclid(two_a);
                if nb > a {
                    nb -= two_a;
                }
                b = nb;
                c = (b * b - d) / (4 * a);
            }
            if a > c {
                (a, b, c) = (c, -b, a);
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            break;
        }
        QuadForm::new(a as i64, b as i64, c as i64)
    }

    /// Value of the form at `(x, y)`.
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

/// Every reduced primitive form of discriminant `d`; their number is `h(d)`.
pub fn reduced_forms(d: i64) -> Result<ClassGroupData> {
    check_discriminant(d)?;
    let mut forms = Vec::new();
    let amax = integer_sqrt((-d) as u128 / 3) as i64;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                forms.push(f);
            }
        }
    }
    Ok(ClassGroupData {
        discriminant: d,
        class_number: forms.len(),
        reduced_forms: forms,
    })
}

pub fn class_number(d: i64) -> Result<usize> {
    Ok(reduced_forms(d)?.class_number)
}

/// `(g, x, y)` with `g = gcd(a, b) = x a + y b`, `g >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Gauss composition followed by reduction.
pub fn compose_reduce(f1: &QuadForm, f2: &QuadForm) -> Result<QuadForm> {
    let d = f1.discriminant();
    if f2.discriminant() != d {
        return arg_err(format!(
            "cannot compose forms of discriminants {} and {}",
            d,
            f2.discriminant()
        ));
    }
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (dd, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (g, u, _) = ext_gcd(a2, a1);
        (g, u)
    };
    let (d1, x2, y2) = if s % dd == 0 {
        (dd, 0, -1)
    } else {
        let (g, x, y) = ext_gcd(s, dd);
        (g, x, -y)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - d as i128) / (4 * a3);
    Ok(QuadForm::new(a3 as i64, b3 as i64, c3 as i64).reduce())
}

/// Reduced class of a form `(q, b, c)` of discriminant `d` together with a
/// principality flag, or `None` when `q` is inert.
pub fn prime_form_class(d: i64, q: u64) -> Result<Option<(QuadForm, bool)>> {
    check_discriminant(d)?;
    if q < 3 || !is_prime(q) {
        return arg_err(format!("{q} is not an odd prime"));
    }
    if d.rem_euclid(q as i64) == 0 {
        return arg_err(format!("{q} divides the discriminant {d}"));
    }
    if legendre(d, q)? != 1 {
        return Ok(None);
    }
    let qi = q as i64;
    let mut b = sqrt_mod_prime(d, q)?.expect("split prime has a square root") as i64;
    if (b - d).rem_euclid(2) != 0 {
        b = qi - b;
    }
    let c = (b * b - d) / (4 * qi);
    let f = QuadForm::new(qi, b, c).reduce();
    let principal = f == QuadForm::principal(d);
    Ok(Some((f, principal)))
}

/// All solutions of `x^2 + n y^2 = m` with `x, y >= 0`.
pub fn solve_norm_eq(n: u64, m: u64) -> Vec<(u64, u64)> {
    let (n, m) = (n as u128, m as u128);
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let ymax = integer_sqrt(m / n);
    for y in 0..=ymax {
        let rest = m - n * y * y;
        if is_square(rest) {
            out.push((integer_sqrt(rest) as u64, y as u64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_class_number(d: i64) -> usize {
        let mut count = 0;
        let mut a = 1;
        while 3 * a * a <= -d {
            for b in -a..=a {
                for c in a..=(b * b - d) / (4 * a) {
                    let f = QuadForm::new(a, b, c);
                    if f.discriminant() == d && f.is_reduced() && f.is_primitive() {
                        count += 1;
                    }
                }
            }
            a += 1;
        }
        count
    }

    fn kronecker(d: i64, n: i64) -> i64 {
        // (d/n) for n > 0 via factorization of n.
        let mut n = n;
        let mut out = 1;
        let mut p = 2;
        while n > 1 {
            if n % p == 0 {
                n /= p;
                let s = if p == 2 {
                    match d.rem_euclid(8) {
                        1 | 7 => 1,
                        3 | 5 => -1,
                        _ => 0,
                    }
                } else {
                    legendre(d, p as u64).unwrap() as i64
                };
                out *= s;
            } else {
                p += 1;
            }
        }
        out
    }

    fn squarefree(n: i64) -> bool {
        (2..).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0)
    }

    fn is_fundamental(d: i64) -> bool {
        let n = -d;
        match d.rem_euclid(4) {
            1 => squarefree(n),
            0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(n / 4),
            _ => false,
        }
    }

    #[test]
    fn small_class_numbers() {
        assert_eq!(reduced_forms(-3).unwrap().reduced_forms, vec![QuadForm::new(1, 1, 1)]);
        assert_eq!(reduced_forms(-4).unwrap().reduced_forms, vec![QuadForm::new(1, 0, 1)]);
        assert_eq!(class_number(-404).unwrap(), 14);
        assert_eq!(class_number(-12).unwrap(), 1);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert!(reduced_forms(-5).is_err());
        assert!(reduced_forms(8).is_err());
    }

    #[test]
    fn class_numbers_match_brute_sweep() {
        for n in 3..2000i64 {
            let d = -n;
            if d.rem_euclid(4) > 1 {
                continue;
            }
            let data = reduced_forms(d).unwrap();
            assert_eq!(data.class_number, data.reduced_forms.len());
            assert_eq!(data.class_number, brute_class_number(d), "D = {d}");
        }
    }

    #[test]
    fn class_numbers_match_analytic_formula() {
        for n in 5..2000i64 {
            let d = -n;
            if !is_fundamental(d) {
                continue;
            }
            let s: i64 = (1..n).map(|k| kronecker(d, k) * k).sum();
            assert_eq!(class_number(d).unwrap() as i64, -s / n, "D = {d}");
        }
    }

    #[test]
    fn reduction_is_canonical() {
        for f in reduced_forms(-404).unwrap().reduced_forms {
            assert!(f.is_reduced());
            let (a, b, c) = (f.a, f.b, f.c);
            let t = QuadForm::new(a, b + 2 * a, a + b + c);
            let s = QuadForm::new(c, -b, a);
            let st = QuadForm::new(s.a, s.b - 2 * s.a, s.a - s.b + s.c);
            assert_eq!(t.reduce(), f);
            assert_eq!(s.reduce(), f);
            assert_eq!(st.reduce(), f);
        }
    }

    #[test]
    fn composition_group_laws() {
        for n in [23i64, 47, 56, 71, 104, 404, 407, 524, 971] {
            let d = -n;
            let forms = reduced_forms(d).unwrap().reduced_forms;
            let e = QuadForm::principal(d);
            for f in &forms {
                assert_eq!(compose_reduce(f, &e).unwrap(), *f);
                assert_eq!(compose_reduce(f, &f.inverse()).unwrap(), e);
                for g in &forms {
                    let fg = compose_reduce(f, g).unwrap();
                    assert!(fg.is_reduced());
                    assert_eq!(fg, compose_reduce(g, f).unwrap());
                    for k in forms.iter().take(6) {
                        let l = compose_reduce(&fg, k).unwrap();
                        let r = compose_reduce(f, &compose_reduce(g, k).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
            for f in &forms {
                let mut acc = e;
                for _ in 0..forms.len() {
                    acc = compose_reduce(&acc, f).unwrap();
                }
                assert_eq!(acc, e);
            }
        }
        assert!(compose_reduce(&QuadForm::principal(-3), &QuadForm::principal(-4)).is_err());
    }

    #[test]
    fn composition_represents_products() {
        // f1 represents a1, f2 represents a2, gcd(a1, a2) = 1: f1*f2 represents a1*a2.
        let forms = reduced_forms(-404).unwrap().reduced_forms;
        let represents = |h: &QuadForm, m: i128| {
            (-40..=40i64).any(|x| (-40..=40i64).any(|y| h.eval(x, y) == m))
        };
        for f in &forms {
            for g in &forms {
                if f.a.gcd(&g.a) != 1 {
                    continue;
                }
                let h = compose_reduce(f, g).unwrap();
                assert!(represents(&h, (f.a * g.a) as i128), "{f} * {g} = {h}");
            }
        }
        let f = QuadForm::new(3, 2, 34);
        let sq = compose_reduce(&f, &f).unwrap();
        assert!(sq.is_reduced() && sq.discriminant() == -404);
        assert!(represents(&sq, 9));
        assert!(!sq.is_principal());
    }

    #[test]
    fn prime_forms() {
        assert!(prime_form_class(-3, 7).unwrap().unwrap().1);
        let (f, principal) = prime_form_class(-404, 11).unwrap().unwrap();
        assert!(!principal);
        assert!(f == QuadForm::new(10, 6, 11) || f == QuadForm::new(10, -6, 11));
        assert_eq!(legendre(-404, 19).unwrap(), -1);
        assert!(prime_form_class(-404, 19).unwrap().is_none());
        assert!(prime_form_class(-404, 101).is_err());
    }

    #[test]
    fn norm_equation() {
        assert!(solve_norm_eq(404, 33).is_empty());
        assert_eq!(solve_norm_eq(4, 8), vec![(2, 1)]);
        assert!(solve_norm_eq(311, 4 * 67 * 419).is_empty());
        for n in 1..30u64 {
            for m in 1..300u64 {
                let mut brute: Vec<(u64, u64)> = (0..=m)
                    .flat_map(|y| (0..=m).map(move |x| (x, y)))
                    .filter(|&(x, y)| x * x + n * y * y == m)
                    .collect();
                brute.sort_by_key(|&(x, y)| (y, x));
                assert_eq!(solve_norm_eq(n, m), brute);
            }
        }
    }
}
