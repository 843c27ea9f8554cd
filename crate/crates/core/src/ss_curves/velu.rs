use std::collections::HashMap;

use super::{curve_coeffs_from_j, j_from_coeffs};
use crate::arith::{is_prime, ExtField, Field, Fp2, Fp2Element, Poly, PolyRing};
use crate::error::{arg_err, Error, Result};

/// Largest isogeny degree the division-polynomial oracle accepts.
pub const MAX_VELU_ELL: u64 = 13;

/// Division-polynomial values `f_n` at one point, with `y^2` replaced by
/// `F = x^3 + A x + B` (`f_n = psi_n` for odd `n`, `psi_n / 2y` for even `n`).
struct DivisionValues<'a, R, T> {
    ops: &'a R,
    memo: HashMap<u64, T>,
    sixteen_f2: T,
}

/// Ring operations the division-polynomial recurrence needs, so the same code
/// serves polynomials and extension-field elements.
trait RingOps<T> {
    fn add(&self, a: &T, b: &T) -> T;
    fn sub(&self, a: &T, b: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
}

impl<F: Field> RingOps<Poly<F::Elem>> for PolyRing<F> {
    fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        PolyRing::add(self, a, b)
    }
    fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        PolyRing::sub(self, a, b)
    }
    fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        PolyRing::mul(self, a, b)
    }
}

struct FieldOps<'a, F>(&'a F);

impl<F: Field> RingOps<F::Elem> for FieldOps<'_, F> {
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }
}

impl<'a, R: RingOps<T>, T: Clone> DivisionValues<'a, R, T> {
    /// `base` holds `f_0 .. f_4`.
    fn new(ops: &'a R, base: [T; 5], big_f: &T) -> Self {
        let f2 = ops.mul(big_f, big_f);
        let mut sixteen_f2 = f2.clone();
        for _ in 0..4 {
            sixteen_f2 = ops.add(&sixteen_f2, &sixteen_f2);
        }
        let memo = base.into_iter().enumerate().map(|(i, v)| (i as u64, v)).collect();
        DivisionValues {
            ops,
            memo,
            sixteen_f2,
        }
    }

    fn get(&mut self, n: u64) -> T {
        if let Some(v) = self.memo.get(&n) {
            return v.clone();
        }
        let o = self.ops;
        let m = n / 2;
        let v = if n % 2 == 1 {
            let a = self.get(m + 2);
            let b = self.get(m);
            let c = self.get(m - 1);
            let d = self.get(m + 1);
            let b3 = o.mul(&b, &o.mul(&b, &b));
            let d3 = o.mul(&d, &o.mul(&d, &d));
            let first = o.mul(&a, &b3);
            let second = o.mul(&c, &d3);
            if m % 2 == 0 {
                o.sub(&o.mul(&self.sixteen_f2, &first), &second)
            } else {
                o.sub(&first, &o.mul(&self.sixteen_f2, &second))
            }
        } else {
            let fm = self.get(m);
            let a = self.get(m + 2);
            let b = self.get(m - 1);
            let c = self.get(m - 2);
            let d = self.get(m + 1);
            let inner = o.sub(&o.mul(&a, &o.mul(&b, &b)), &o.mul(&c, &o.mul(&d, &d)));
            o.mul(&fm, &inner)
        };
        self.memo.insert(n, v.clone());
        v
    }
}

fn base_values<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, x: &F::Elem) -> [F::Elem; 5] {
    let c = |v: i64| f.from_i64(v);
    let x2 = f.square(x);
    let x3 = f.mul(&x2, x);
    let x4 = f.square(&x2);
    let x6 = f.mul(&x4, &x2);
    let a2 = f.square(a);
    let a3 = f.mul(&a2, a);
    let b2 = f.square(b);
    let f3 = [
        f.mul(&c(3), &x4),
        f.mul(&c(6), &f.mul(a, &x2)),
        f.mul(&c(12), &f.mul(b, x)),
        f.neg(&a2),
    ]
    .iter()
    .fold(f.zero(), |s, t| f.add(&s, t));
    let f4 = [
        x6,
        f.mul(&c(5), &f.mul(a, &x4)),
        f.mul(&c(20), &f.mul(b, &x3)),
        f.neg(&f.mul(&c(5), &f.mul(&a2, &x2))),
        f.neg(&f.mul(&c(4), &f.mul(&f.mul(a, b), x))),
        f.neg(&f.mul(&c(8), &b2)),
        f.neg(&a3),
    ]
    .iter()
    .fold(f.zero(), |s, t| f.add(&s, t));
    [f.zero(), f.one(), f.one(), f3, f.mul(&c(2), &f4)]
}

/// The division polynomial `f_n(x)` of `y^2 = x^3 + A x + B` over F_{p^2}.
pub fn division_polynomial(
    ring: &PolyRing<Fp2>,
    a: &Fp2Element,
    b: &Fp2Element,
    n: u64,
) -> Poly<Fp2Element> {
    let f = ring.field();
    let ca = ring.constant(*a);
    let cb = ring.constant(*b);
    let x = ring.x();
    let pa = |c: i64, p: &Poly<Fp2Element>| ring.scale(p, &f.from_i64(c));
    let x2 = ring.mul(&x, &x);
    let x3 = ring.mul(&x2, &x);
    let x4 = ring.mul(&x2, &x2);
    let x6 = ring.mul(&x4, &x2);
    let a2 = ring.mul(&ca, &ca);
    let big_f = ring.add(&ring.add(&x3, &ring.mul(&ca, &x)), &cb);
    let f3 = [
        pa(3, &x4),
        pa(6, &ring.mul(&ca, &x2)),
        pa(12, &ring.mul(&cb, &x)),
        ring.neg(&a2),
    ]
    .iter()
    .fold(ring.zero(), |s, t| ring.add(&s, t));
    let f4 = [
        x6,
        pa(5, &ring.mul(&ca, &x4)),
        pa(20, &ring.mul(&cb, &x3)),
        pa(-5, &ring.mul(&a2, &x2)),
        pa(-4, &ring.mul(&ring.mul(&ca, &cb), &x)),
        pa(-8, &ring.mul(&cb, &cb)),
        ring.neg(&ring.mul(&a2, &ca)),
    ]
    .iter()
    .fold(ring.zero(), |s, t| ring.add(&s, t));
    let base = [ring.zero(), ring.one(), ring.one(), f3, pa(2, &f4)];
    DivisionValues::new(ring, base, &big_f).get(n)
}

/// `x([k]P)` for `k = 1 .. (l-1)/2`, where `P = (x0, y)` has order `l`.
fn kernel_abscissas<F: Field>(
    f: &F,
    a: &F::Elem,
    b: &F::Elem,
    x0: &F::Elem,
    l: u64,
) -> Result<Vec<F::Elem>> {
    let big_f = f.add(&f.add(&f.mul(x0, &f.square(x0)), &f.mul(a, x0)), b);
    let four_f = f.mul(&f.from_i64(4), &big_f);
    let ops = FieldOps(f);
    let mut vals = DivisionValues::new(&ops, base_values(f, a, b, x0), &big_f);
    let mut out = Vec::new();
    for k in 1..=(l - 1) / 2 {
        let prev = vals.get(k - 1);
        let next = vals.get(k + 1);
        let cur = vals.get(k);
        let cur2 = f.square(&cur);
        let num = f.mul(&prev, &next);
        let frac = if k % 2 == 1 {
            f.div(&f.mul(&four_f, &num), &cur2)
        } else {
            f.div(&num, &f.mul(&four_f, &cur2))
        }
        .ok_or_else(|| Error::Internal(format!("[{k}]P vanished for a point of order {l}")))?;
        out.push(f.sub(x0, &frac));
    }
    Ok(out)
}

/// Codomain `j` of the isogeny whose kernel polynomial is `kernel` (roots =
/// x-coordinates of half the nonzero kernel points).
fn velu_codomain_j(
    f: &Fp2,
    a: &Fp2Element,
    b: &Fp2Element,
    kernel: &Poly<Fp2Element>,
    l: u64,
) -> Result<Fp2Element> {
    let c = kernel.coeffs();
    let n = c.len() - 1;
    let c_at = |k: usize| if k <= n { c[n - k] } else { f.zero() };
    // Elementary symmetric functions and power sums via Newton's identities.
    let e1 = f.neg(&c_at(1));
    let e2 = c_at(2);
    let e3 = f.neg(&c_at(3));
    let p1 = e1;
    let p2 = f.sub(&f.mul(&e1, &p1), &f.mul(&f.from_i64(2), &e2));
    let p3 = f.add(
        &f.sub(&f.mul(&e1, &p2), &f.mul(&e2, &p1)),
        &f.mul(&f.from_i64(3), &e3),
    );
    let (v, w) = if l == 2 {
        let x0 = p1;
        let v = f.add(&f.mul(&f.from_i64(3), &f.square(&x0)), a);
        (v, f.mul(&x0, &v))
    } else {
        let nn = f.from_i64(n as i64);
        let v = f.add(&f.mul(&f.from_i64(6), &p2), &f.mul(&f.from_i64(2), &f.mul(a, &nn)));
        let w = [
            f.mul(&f.from_i64(10), &p3),
            f.mul(&f.from_i64(6), &f.mul(a, &p1)),
            f.mul(&f.from_i64(4), &f.mul(b, &nn)),
        ]
        .iter()
        .fold(f.zero(), |s, t| f.add(&s, t));
        (v, w)
    };
    let a2 = f.sub(a, &f.mul(&f.from_i64(5), &v));
    let b2 = f.sub(b, &f.mul(&f.from_i64(7), &w));
    j_from_coeffs(f, &a2, &b2)
        .ok_or_else(|| Error::Internal("Velu codomain is singular".into()))
}

/// The `l + 1` invariants `l`-isogenous to `j` over F_{p^2}, with multiplicity,
/// as sorted `(j', count)` pairs.
pub fn velu_neighbors(j: &Fp2Element, l: u64, p: u64) -> Result<Vec<(Fp2Element, usize)>> {
    if !is_prime(l) {
        return arg_err(format!("{l} is not prime"));
    }
    if l == p {
        return arg_err("isogeny degree must differ from the characteristic");
    }
    if l > MAX_VELU_ELL {
        return Err(Error::Capability(format!(
            "division-polynomial oracle supports l <= {MAX_VELU_ELL}, got {l}"
        )));
    }
    let field = Fp2::new(p)?;
    if p <= 3 {
        return arg_err("characteristic must exceed 3");
    }
    let ring = PolyRing::new(field);
    let (a, b) = curve_coeffs_from_j(&field, j);

    let kernels: Vec<Poly<Fp2Element>> = if l == 2 {
        let cubic = ring.from_coeffs(vec![b, a, field.zero(), field.one()]);
        ring.roots(&cubic)?
            .into_iter()
            .map(|(r, _)| ring.linear(&r))
            .collect()
    } else {
        let psi = division_polynomial(&ring, &a, &b, l);
        let mut found: Vec<Poly<Fp2Element>> = Vec::new();
        for (h, _) in ring.factor(&psi)? {
            if found.iter().any(|k| ring.divides(&h, k)) {
                continue;
            }
            let ext = ExtField::new(field, h.coeffs().to_vec())?;
            let x0 = ext.generator();
            let a_ext = ext.embed(&a);
            let b_ext = ext.embed(&b);
            let xs = kernel_abscissas(&ext, &a_ext, &b_ext, &x0, l)?;
            let mut kp = vec![ext.one()];
            for x in &xs {
                // Multiply by (X - x).
                let mut next = vec![ext.zero(); kp.len() + 1];
                for (i, c) in kp.iter().enumerate() {
                    next[i + 1] = ext.add(&next[i + 1], c);
                    next[i] = ext.sub(&next[i], &ext.mul(c, x));
                }
                kp = next;
            }
            let coeffs = kp
                .iter()
                .map(|c| ext.as_base(c))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| {
                    Error::Internal(format!("kernel polynomial over F_{p}^2 not rational for l = {l}"))
                })?;
            found.push(ring.from_coeffs(coeffs));
        }
        found
    };
    if kernels.len() as u64 != l + 1 {
        return Err(Error::Internal(format!(
            "found {} kernels of order {l}, expected {}",
            kernels.len(),
            l + 1
        )));
    }
    let mut counts: HashMap<Fp2Element, usize> = HashMap::new();
    for k in &kernels {
        *counts.entry(velu_codomain_j(&field, &a, &b, k, l)?).or_default() += 1;
    }
    let mut out: Vec<(Fp2Element, usize)> = counts.into_iter().collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_polynomial_degrees() {
        let f = Fp2::new(101).unwrap();
        let ring = PolyRing::new(f);
        let (a, b) = (f.elem(3, 0), f.elem(7, 0));
        for n in [3u64, 5, 7, 11] {
            assert_eq!(
                division_polynomial(&ring, &a, &b, n).degree(),
                Some(((n * n - 1) / 2) as usize)
            );
        }
        for n in [4u64, 6, 8] {
            assert_eq!(
                division_polynomial(&ring, &a, &b, n).degree(),
                Some(((n * n - 4) / 2) as usize)
            );
        }
    }

    fn x_multiple(f: &Fp2, a: &Fp2Element, b: &Fp2Element, x: &Fp2Element, k: u64) -> Fp2Element {
        let big_f = f.add(&f.add(&f.mul(x, &f.square(x)), &f.mul(a, x)), b);
        let four_f = f.mul(&f.from_i64(4), &big_f);
        let ops = FieldOps(f);
        let mut v = DivisionValues::new(&ops, base_values(f, a, b, x), &big_f);
        let num = f.mul(&v.get(k - 1), &v.get(k + 1));
        let cur2 = f.square(&v.get(k));
        let frac = if k % 2 == 1 {
            f.div(&f.mul(&four_f, &num), &cur2)
        } else {
            f.div(&num, &f.mul(&four_f, &cur2))
        };
        f.sub(x, &frac.unwrap())
    }

    fn doubling(f: &Fp2, a: &Fp2Element, b: &Fp2Element, x: &Fp2Element) -> Fp2Element {
        let c = |v: i64| f.from_i64(v);
        let x2 = f.square(x);
        let num = [
            f.square(&x2),
            f.neg(&f.mul(&c(2), &f.mul(a, &x2))),
            f.neg(&f.mul(&c(8), &f.mul(b, x))),
            f.square(a),
        ]
        .iter()
        .fold(f.zero(), |s, t| f.add(&s, t));
        let big_f = f.add(&f.add(&f.mul(x, &x2), &f.mul(a, x)), b);
        f.div(&num, &f.mul(&c(4), &big_f)).unwrap()
    }

    #[test]
    fn multiples_agree_with_doubling() {
        let f = Fp2::new(1009).unwrap();
        let (a, b) = (f.elem(17, 3), f.elem(-5, 11));
        for t in 1..40 {
            let x = f.elem(t * 37, t * t);
            let x2 = doubling(&f, &a, &b, &x);
            assert_eq!(x_multiple(&f, &a, &b, &x, 2), x2);
            assert_eq!(x_multiple(&f, &a, &b, &x, 4), doubling(&f, &a, &b, &x2));
            let x4 = doubling(&f, &a, &b, &x2);
            assert_eq!(x_multiple(&f, &a, &b, &x, 8), doubling(&f, &a, &b, &x4));
        }
    }

    #[test]
    fn polynomial_and_pointwise_recurrences_agree() {
        let f = Fp2::new(131).unwrap();
        let ring = PolyRing::new(f);
        let (a, b) = (f.elem(4, 1), f.elem(9, 0));
        for n in 5..12u64 {
            let poly = division_polynomial(&ring, &a, &b, n);
            for t in 0..10 {
                let x = f.elem(t, 2 * t + 1);
                let big_f = f.add(&f.add(&f.mul(&x, &f.square(&x)), &f.mul(&a, &x)), &b);
                let ops = FieldOps(&f);
                let mut v = DivisionValues::new(&ops, base_values(&f, &a, &b, &x), &big_f);
                assert_eq!(ring.eval(&poly, &x), v.get(n));
            }
        }
    }

    #[test]
    fn worked_example_311() {
        let p = 311;
        let j = 54000 % p;
        let nb = velu_neighbors(&Fp2Element::from_base(j), 5, p).unwrap();
        assert_eq!(nb.len(), 6);
        assert!(nb.iter().all(|&(x, m)| m == 1 && x != Fp2Element::from_base(j)));
        let fp: Vec<u64> = nb.iter().filter(|(x, _)| x.c1 == 0).map(|(x, _)| x.c0).collect();
        assert_eq!(fp, vec![19, 225]);
    }

    #[test]
    fn two_isogenies_count() {
        let p = 101;
        for j in crate::ss_curves::supersingular_j_list(p).unwrap() {
            let nb = velu_neighbors(&Fp2Element::from_base(j), 2, p).unwrap();
            assert_eq!(nb.iter().map(|x| x.1).sum::<usize>(), 3);
        }
        assert!(matches!(
            velu_neighbors(&Fp2Element::from_base(2), 17, p),
            Err(Error::Capability(_))
        ));
    }
}
