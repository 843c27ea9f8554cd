use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::default_seed;
use crate::error::{arg_err, Result};

/// Univariate polynomial, coefficients lowest degree first, never with a
/// trailing zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Polynomial arithmetic over a field `F`.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    field: F,
    seed: u64,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        Self::with_seed(field, default_seed())
    }

    /// `seed` drives the randomized splitting steps; results do not depend on
    /// it because roots and factors are returned sorted.
    pub fn with_seed(field: F, seed: u64) -> Self {
        PolyRing { field, seed }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> Poly<F::Elem> {
        self.from_coeffs(coeffs.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn x(&self) -> Poly<F::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn monomial(&self, c: F::Elem, n: usize) -> Poly<F::Elem> {
        let mut v = vec![self.field.zero(); n];
        v.push(c);
        self.from_coeffs(v)
    }

    /// `x - r`.
    pub fn linear(&self, r: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.field.neg(r), self.field.one()])
    }

    pub fn is_one(&self, f: &Poly<F::Elem>) -> bool {
        f.coeffs.len() == 1 && f.coeffs[0] == self.field.one()
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&z);
                let y = b.coeffs.get(i).unwrap_or(&z);
                self.field.add(x, y)
            })
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = &self.field;
        let mut v = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(x, y));
            }
        }
        self.from_coeffs(v)
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn divrem(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
    ) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let f = &self.field;
        let db = b.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(b.leading().unwrap()).unwrap();
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![f.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + db], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[k + i] = f.sub(&r[k + i], &f.mul(&c, bc));
            }
            q[k] = c;
        }
        r.truncate(db);
        (self.from_coeffs(q), self.from_coeffs(r))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.divrem(a, b).1
    }

    /// Exact quotient; the caller guarantees `b | a`.
    pub fn div_exact(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_zero());
        q
    }

    pub fn divides(&self, b: &Poly<F::Elem>, a: &Poly<F::Elem>) -> bool {
        self.rem(a, b).is_zero()
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => self.zero(),
            Some(l) => self.scale(a, &self.field.inv(l).unwrap()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn powmod(
        &self,
        base: &Poly<F::Elem>,
        e: &BigUint,
        m: &Poly<F::Elem>,
    ) -> Poly<F::Elem> {
        let base = self.rem(base, m);
        let mut acc = self.rem(&self.one(), m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = &self.field;
        let v = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        self.from_coeffs(v)
    }

    /// `x^Q mod m` for `Q` the field order.
    fn frobenius_x(&self, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.powmod(&self.x(), &self.field.order(), m)
    }

    // g(x^p) = a  ==>  returns g with coefficients p-th roots taken.
    fn pth_root_poly(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let p = self.field.characteristic() as usize;
        let v = a
            .coeffs
            .iter()
            .step_by(p)
            .map(|c| self.field.pth_root(c))
            .collect();
        self.from_coeffs(v)
    }

    /// Squarefree decomposition: pairs `(g, m)` with `g` monic squarefree,
    /// pairwise coprime, and `a = lc(a) * prod g^m`.
    pub fn squarefree_decomposition(&self, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
        let mut out = Vec::new();
        if a.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a = self.monic(a);
        let da = self.derivative(&a);
        if da.is_zero() {
            let p = self.field.characteristic() as usize;
            for (g, m) in self.squarefree_decomposition(&self.pth_root_poly(&a)) {
                out.push((g, m * p));
            }
            return out;
        }
        let mut c = self.gcd(&a, &da);
        let mut w = self.div_exact(&a, &c);
        let mut i = 1;
        while w.degree() != Some(0) {
            let y = self.gcd(&w, &c);
            let z = self.div_exact(&w, &y);
            if z.degree() != Some(0) {
                out.push((z, i));
            }
            i += 1;
            c = self.div_exact(&c, &y);
            w = y;
        }
        if c.degree() != Some(0) {
            let p = self.field.characteristic() as usize;
            for (g, m) in self.squarefree_decomposition(&self.pth_root_poly(&c)) {
                out.push((g, m * p));
            }
        }
        out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.squarefree_decomposition(a)
            .iter()
            .fold(self.one(), |acc, (g, _)| self.mul(&acc, g))
    }

    /// Splits a monic squarefree polynomial into `(g_d, d)` where `g_d` is the
    /// product of its irreducible factors of degree `d`.
    pub fn distinct_degree_factor(&self, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic(a);
        let q = self.field.order();
        let mut h = self.rem(&self.x(), &f);
        let mut d = 1;
        while f.degree().unwrap_or(0) >= 2 * d {
            h = self.powmod(&h, &q, &f);
            let g = self.gcd(&f, &self.sub(&h, &self.x()));
            if !self.is_one(&g) {
                f = self.div_exact(&f, &g);
                h = self.rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(deg) = f.degree() {
            if deg > 0 {
                out.push((f, deg));
            }
        }
        out
    }

    /// Splits a monic squarefree product of degree-`d` irreducibles into its
    /// factors (Cantor-Zassenhaus, odd characteristic).
    pub fn equal_degree_factor(&self, a: &Poly<F::Elem>, d: usize) -> Vec<Poly<F::Elem>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let exp = (num_traits::pow(self.field.order(), d) - BigUint::one()) >> 1;
        let mut out = Vec::new();
        let mut stack = vec![self.monic(a)];
        while let Some(f) = stack.pop() {
            let n = f.degree().unwrap_or(0);
            if n == 0 {
                continue;
            }
            if n == d {
                out.push(f);
                continue;
            }
            loop {
                let r = self.from_coeffs((0..n).map(|_| self.field.random(&mut rng)).collect());
                if r.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let b = self.sub(&self.powmod(&r, &exp, &f), &self.one());
                let g = self.gcd(&f, &b);
                let dg = g.degree().unwrap_or(0);
                if dg > 0 && dg < n {
                    stack.push(self.div_exact(&f, &g));
                    stack.push(g);
                    break;
                }
            }
        }
        out.sort();
        out
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by degree and then coefficients.
    pub fn factor(&self, a: &Poly<F::Elem>) -> Result<Vec<(Poly<F::Elem>, usize)>> {
        if a.is_zero() {
            return arg_err("cannot factor the zero polynomial");
        }
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition(a) {
            for (gd, d) in self.distinct_degree_factor(&g) {
                for h in self.equal_degree_factor(&gd, d) {
                    out.push((h, m));
                }
            }
        }
        out.sort_by(|x, y| {
            x.0.degree()
                .cmp(&y.0.degree())
                .then_with(|| x.0.cmp(&y.0))
        });
        Ok(out)
    }

    /// All roots in the coefficient field with multiplicities, sorted.
    pub fn roots(&self, a: &Poly<F::Elem>) -> Result<Vec<(F::Elem, usize)>> {
        if a.is_zero() {
            return arg_err("roots of the zero polynomial are undefined");
        }
        if a.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let a = self.monic(a);
        let fx = self.frobenius_x(&a);
        let g = self.gcd(&a, &self.sub(&fx, &self.x()));
        let mut out = Vec::new();
        for lin in self.equal_degree_factor(&g, 1) {
            let r = self.field.neg(&lin.coeffs[0]);
            let mut m = 0;
            let mut rest = a.clone();
            loop {
                let (q, rem) = self.divrem(&rest, &lin);
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                rest = q;
            }
            out.push((r, m));
        }
        out.sort();
        Ok(out)
    }

    /// True iff `a` is a product of linear factors over the coefficient field.
    pub fn splits_linear(&self, a: &Poly<F::Elem>) -> Result<bool> {
        if a.is_zero() {
            return arg_err("splitting of the zero polynomial is undefined");
        }
        let r = self.radical(a);
        if r.degree().unwrap_or(0) == 0 {
            return Ok(true);
        }
        Ok(self.frobenius_x(&r) == self.rem(&self.x(), &r))
    }
}
