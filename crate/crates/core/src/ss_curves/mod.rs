//! Short Weierstrass curves in characteristic `p > 3`: supersingularity via
//! the Hasse invariant, the supersingular `j`-invariants in F_p, and an
//! isogeny-neighbor oracle built from division polynomials and Velu's
//! formulas.

mod velu;

use serde::Serialize;

use crate::arith::{legendre, Field, Fp2, Fp2Element, PrimeField};
use crate::error::{arg_err, Result};

pub use velu::{division_polynomial, velu_neighbors, MAX_VELU_ELL};

/// `y^2 = x^3 + A x + B` over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Curve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl Curve {
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        let f = PrimeField::new(p)?;
        let c = Curve {
            p,
            a: f.elem(a),
            b: f.elem(b),
        };
        if c.discriminant_vanishes() {
            return arg_err(format!("y^2 = x^3 + {a}x + {b} is singular over F_{p}"));
        }
        Ok(c)
    }

    fn discriminant_vanishes(&self) -> bool {
        let f = PrimeField::new(self.p).unwrap();
        let a3 = f.mul(&self.a, &f.mul(&self.a, &self.a));
        let b2 = f.mul(&self.b, &self.b);
        f.add(&f.mul(&4, &a3), &f.mul(&27, &b2)) == 0
    }

    pub fn j_invariant(&self) -> u64 {
        let f = PrimeField::new(self.p).unwrap();
        let four_a3 = f.mul(&4, &f.mul(&self.a, &f.mul(&self.a, &self.a)));
        let den = f.add(&four_a3, &f.mul(&27, &f.mul(&self.b, &self.b)));
        f.mul(&f.mul(&1728, &four_a3), &f.inv(&den).unwrap())
    }

    /// Number of points over F_p, including the point at infinity.
    pub fn point_count(&self) -> u64 {
        let f = PrimeField::new(self.p).unwrap();
        let mut total = self.p as i64 + 1;
        for x in 0..self.p {
            let rhs = f.add(&f.mul(&x, &f.add(&f.mul(&x, &x), &self.a)), &self.b);
            total += legendre(rhs as i64, self.p).unwrap() as i64;
        }
        total as u64
    }
}

/// `(A, B)` of the canonical curve with invariant `j` over any field of
/// characteristic `p > 3`.
pub fn curve_coeffs_from_j<F: Field>(field: &F, j: &F::Elem) -> (F::Elem, F::Elem) {
    let zero = field.zero();
    let c1728 = field.from_i64(1728);
    if *j == zero {
        return (zero, field.one());
    }
    if *j == c1728 {
        return (field.one(), zero);
    }
    let k = field.sub(&c1728, j);
    let jk = field.mul(j, &k);
    let a = field.mul(&field.from_i64(3), &jk);
    let b = field.mul(&field.from_i64(2), &field.mul(&jk, &k));
    (a, b)
}

/// A curve over F_p with the given `j`.
pub fn curve_from_j(j: u64, p: u64) -> Result<Curve> {
    let f = PrimeField::new(p)?;
    if p <= 3 {
        return arg_err("characteristic must exceed 3");
    }
    let (a, b) = curve_coeffs_from_j(&f, &(j % p));
    Ok(Curve { p, a, b })
}

/// `j = 1728 * 4A^3 / (4A^3 + 27B^2)` over any field; `None` if singular.
pub fn j_from_coeffs<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Option<F::Elem> {
    let four_a3 = field.mul(&field.from_i64(4), &field.mul(a, &field.square(a)));
    let den = field.add(&four_a3, &field.mul(&field.from_i64(27), &field.square(b)));
    let inv = field.inv(&den)?;
    Some(field.mul(&field.mul(&field.from_i64(1728), &four_a3), &inv))
}

/// Coefficient of `x^(p-1)` in `(x^3 + A x + B)^((p-1)/2)`.
pub fn hasse_invariant<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> F::Elem {
    let p = field.characteristic();
    let n = (p - 1) / 2;
    let target = (p - 1) as usize;
    if field.is_zero(b) {
        // (x^3 + A x)^n = x^n (x^2 + A)^n: need x^n from (x^2 + A)^n.
        if n % 2 == 1 {
            return field.zero();
        }
        let k = n / 2;
        let mut binom = field.one();
        for i in 0..k {
            binom = field.mul(&binom, &field.from_i64((n - i) as i64));
            binom = field.div(&binom, &field.from_i64((i + 1) as i64)).unwrap();
        }
        return field.mul(&binom, &field.pow_u64(a, k));
    }
    // g = f^n satisfies f g' = n f' g; solve coefficientwise for g_{k+1}.
    let fc = [b.clone(), a.clone(), field.zero(), field.one()];
    let nf = field.from_i64(n as i64);
    let b_inv = field.inv(b).unwrap();
    let mut g = vec![field.pow_u64(b, n)];
    for k in 0..target {
        let mut acc = field.zero();
        for (i, fi) in fc.iter().enumerate().skip(1) {
            if k + 1 < i || field.is_zero(fi) {
                continue;
            }
            let gi = &g[k + 1 - i];
            let c = field.sub(
                &field.from_i64((k + 1 - i) as i64),
                &field.mul(&nf, &field.from_i64(i as i64)),
            );
            acc = field.add(&acc, &field.mul(fi, &field.mul(gi, &c)));
        }
        let denom = field.from_i64((k + 1) as i64);
        let next = field.neg(&field.mul(&acc, &field.mul(&b_inv, &field.inv(&denom).unwrap())));
        g.push(next);
    }
    g[target].clone()
}

pub fn is_supersingular(e: &Curve) -> Result<bool> {
    if e.p <= 3 {
        return arg_err("characteristic must exceed 3");
    }
    if e.discriminant_vanishes() {
        return arg_err("singular curve");
    }
    let f = PrimeField::new(e.p)?;
    Ok(hasse_invariant(&f, &e.a, &e.b) == 0)
}

/// Whether `j` in F_{p^2} is a supersingular invariant.
pub fn is_supersingular_j(field: &Fp2, j: &Fp2Element) -> bool {
    let (a, b) = curve_coeffs_from_j(field, j);
    field.is_zero(&hasse_invariant(field, &a, &b))
}

/// The supersingular `j`-invariants lying in F_p, ascending.
pub fn supersingular_j_list(p: u64) -> Result<Vec<u64>> {
    if p <= 3 {
        return arg_err("characteristic must exceed 3");
    }
    let f = PrimeField::new(p)?;
    Ok((0..p)
        .filter(|&j| {
            let (a, b) = curve_coeffs_from_j(&f, &j);
            hasse_invariant(&f, &a, &b) == 0
        })
        .collect())
}

/// Every supersingular `j` in F_{p^2}, sorted.
pub fn supersingular_j_list_fp2(p: u64) -> Result<Vec<Fp2Element>> {
    let field = Fp2::new(p)?;
    let mut out: Vec<Fp2Element> = field
        .elements()
        .filter(|j| is_supersingular_j(&field, j))
        .collect();
    out.sort();
    Ok(out)
}

/// Predicted number of supersingular `j` in F_p from the class number of
/// `Q(sqrt(-p))`.
pub fn supersingular_count_formula(p: u64) -> Result<usize> {
    use crate::quad_class::class_number;
    let pi = p as i64;
    Ok(match p % 8 {
        1 | 5 => class_number(-4 * pi)? / 2,
        7 => class_number(-pi)?,
        3 => 2 * class_number(-pi)?,
        _ => return arg_err(format!("{p} is not an odd prime")),
    })
}
