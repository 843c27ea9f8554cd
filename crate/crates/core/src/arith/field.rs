use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::integer::{is_prime, legendre_unchecked, mul_mod, reduce_i64};
use crate::error::{arg_err, Result};

/// A finite field of odd characteristic, used as a context object: elements
/// are plain values and every operation goes through the field.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn order(&self) -> BigUint;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        self.pow(a, &BigUint::from(e))
    }

    /// The unique `x` with `x^p = a`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        // x = a^(q/p) since a^q = a.
        let e = self.order() / BigUint::from(self.characteristic());
        self.pow(a, &e)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// The prime field F_p with canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return arg_err(format!("{p} is not an odd prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> u64 {
        reduce_i64(v, self.p)
    }

    pub fn is_square(&self, a: u64) -> bool {
        legendre_unchecked(a, self.p) >= 0
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        reduce_i64(v, self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.p as i128) as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// An element `c0 + c1*t` of F_{p^2} where `t^2` is the field's non-residue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp2Element {
    pub c0: u64,
    pub c1: u64,
}

impl Fp2Element {
    pub fn from_base(c0: u64) -> Self {
        Fp2Element { c0, c1: 0 }
    }

    pub fn is_base(&self) -> bool {
        self.c1 == 0
    }
}

impl fmt::Display for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}*t", self.c0, self.c1)
        }
    }
}

/// F_{p^2} = F_p[t]/(t^2 - n) with `n` the smallest positive non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    base: PrimeField,
    nonresidue: u64,
}

impl Fp2 {
    pub fn new(p: u64) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let nonresidue = (2..p).find(|&n| legendre_unchecked(n, p) == -1).unwrap();
        Ok(Fp2 { base, nonresidue })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    pub fn embed(&self, a: u64) -> Fp2Element {
        Fp2Element::from_base(a % self.base.p)
    }

    pub fn elem(&self, c0: i64, c1: i64) -> Fp2Element {
        Fp2Element {
            c0: self.base.elem(c0),
            c1: self.base.elem(c1),
        }
    }

    /// Parses `"c0"` or `"c0+c1*t"`.
    pub fn parse(&self, s: &str) -> Result<Fp2Element> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<i64> {
            t.trim()
                .parse::<i64>()
                .map_err(|_| crate::Error::Argument(format!("cannot parse field element `{s}`")))
        };
        match s.split_once('+') {
            Some((a, b)) => {
                let b = b.trim().strip_suffix("*t").ok_or_else(|| {
                    crate::Error::Argument(format!("cannot parse field element `{s}`"))
                })?;
                Ok(self.elem(parse_int(a)?, parse_int(b)?))
            }
            None => Ok(self.elem(parse_int(s)?, 0)),
        }
    }

    pub fn conjugate(&self, a: &Fp2Element) -> Fp2Element {
        Fp2Element {
            c0: a.c0,
            c1: self.base.neg(&a.c1),
        }
    }

    /// Every element of the field in a fixed order.
    pub fn elements(&self) -> impl Iterator<Item = Fp2Element> + '_ {
        let p = self.base.p;
        (0..p).flat_map(move |c1| (0..p).map(move |c0| Fp2Element { c0, c1 }))
    }
}

impl Field for Fp2 {
    type Elem = Fp2Element;

    fn zero(&self) -> Fp2Element {
        Fp2Element::default()
    }
    fn one(&self) -> Fp2Element {
        Fp2Element { c0: 1, c1: 0 }
    }
    fn from_i64(&self, v: i64) -> Fp2Element {
        Fp2Element::from_base(self.base.elem(v))
    }
    fn add(&self, a: &Fp2Element, b: &Fp2Element) -> Fp2Element {
        Fp2Element {
            c0: self.base.add(&a.c0, &b.c0),
            c1: self.base.add(&a.c1, &b.c1),
        }
    }
    fn sub(&self, a: &Fp2Element, b: &Fp2Element) -> Fp2Element {
        Fp2Element {
            c0: self.base.sub(&a.c0, &b.c0),
            c1: self.base.sub(&a.c1, &b.c1),
        }
    }
    fn mul(&self, a: &Fp2Element, b: &Fp2Element) -> Fp2Element {
        let p = self.base.p as u128;
        let n = self.nonresidue as u128;
        let (a0, a1, b0, b1) = (a.c0 as u128, a.c1 as u128, b.c0 as u128, b.c1 as u128);
        let c0 = (a0 * b0 % p + n * (a1 * b1 % p)) % p;
        let c1 = (a0 * b1 + a1 * b0) % p;
        Fp2Element {
            c0: c0 as u64,
            c1: c1 as u64,
        }
    }
    fn neg(&self, a: &Fp2Element) -> Fp2Element {
        Fp2Element {
            c0: self.base.neg(&a.c0),
            c1: self.base.neg(&a.c1),
        }
    }
    fn inv(&self, a: &Fp2Element) -> Option<Fp2Element> {
        let f = &self.base;
        let norm = f.sub(
            &f.mul(&a.c0, &a.c0),
            &f.mul(&self.nonresidue, &f.mul(&a.c1, &a.c1)),
        );
        let ni = f.inv(&norm)?;
        Some(Fp2Element {
            c0: f.mul(&a.c0, &ni),
            c1: f.neg(&f.mul(&a.c1, &ni)),
        })
    }
    fn characteristic(&self) -> u64 {
        self.base.p
    }
    fn order(&self) -> BigUint {
        BigUint::from(self.base.p) * BigUint::from(self.base.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp2Element {
        Fp2Element {
            c0: rng.gen_range(0..self.base.p),
            c1: rng.gen_range(0..self.base.p),
        }
    }
    fn pth_root(&self, a: &Fp2Element) -> Fp2Element {
        // Frobenius is an involution on F_{p^2}.
        self.conjugate(a)
    }
}

/// Element of an extension field, stored as exactly `degree` coefficients.
pub type Ext<E> = Vec<E>;

/// The field `F[t]/(g)` for a monic irreducible `g` over a base field `F`.
#[derive(Clone, Debug)]
pub struct ExtField<F: Field> {
    base: F,
    modulus: Arc<Vec<F::Elem>>,
}

impl<F: Field> ExtField<F> {
    /// `modulus` must be monic and irreducible over `base`, lowest degree first.
    pub fn new(base: F, modulus: Vec<F::Elem>) -> Result<Self> {
        if modulus.len() < 2 || *modulus.last().unwrap() != base.one() {
            return arg_err("extension modulus must be monic of degree >= 1");
        }
        Ok(ExtField {
            base,
            modulus: Arc::new(modulus),
        })
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn embed(&self, a: &F::Elem) -> Ext<F::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = a.clone();
        v
    }

    /// The class of `t`.
    pub fn generator(&self) -> Ext<F::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        if self.degree() == 1 {
            // t = -g_0 when g = t + g_0.
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = self.base.one();
        }
        v
    }

    /// Returns the base-field value if `a` lies in the base field.
    pub fn as_base(&self, a: &Ext<F::Elem>) -> Option<F::Elem> {
        if a[1..].iter().all(|c| self.base.is_zero(c)) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    fn reduce(&self, mut prod: Vec<F::Elem>) -> Ext<F::Elem> {
        let d = self.degree();
        let f = &self.base;
        while prod.len() > d {
            let lead = prod.pop().unwrap();
            if f.is_zero(&lead) {
                continue;
            }
            let off = prod.len() - d;
            for (i, m) in self.modulus[..d].iter().enumerate() {
                prod[off + i] = f.sub(&prod[off + i], &f.mul(&lead, m));
            }
        }
        prod.resize(d, f.zero());
        prod
    }
}

impl<F: Field> Field for ExtField<F> {
    type Elem = Ext<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }
    fn from_i64(&self, v: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(v))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.base;
        let mut prod = vec![f.zero(); 2 * self.degree() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        self.reduce(prod)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        // a^(q^d - 2) keeps this independent of polynomial gcd machinery.
        let e = self.order() - BigUint::from(2u32);
        Some(self.pow(a, &e))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn order(&self) -> BigUint {
        num_traits::pow(self.base.order(), self.degree())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fp2_nonresidue_is_smallest() {
        assert_eq!(Fp2::new(7).unwrap().nonresidue(), 3);
        assert_eq!(Fp2::new(13).unwrap().nonresidue(), 2);
        assert_eq!(Fp2::new(101).unwrap().nonresidue(), 2);
        assert!(Fp2::new(9).is_err());
    }

    #[test]
    fn fp2_field_axioms() {
        let f = Fp2::new(103).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            let c = f.random(&mut rng);
            assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            assert_eq!(f.pow(&a, &f.order()), a);
            assert_eq!(f.pow_u64(&f.pth_root(&a), 103), a);
        }
    }

    #[test]
    fn extension_field_inverse() {
        // t^3 + t + 1 is irreducible over F_5 (no roots, degree 3).
        let base = PrimeField::new(5).unwrap();
        let ext = ExtField::new(base, vec![1, 1, 0, 1]).unwrap();
        assert_eq!(ext.order(), BigUint::from(125u32));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = ext.random(&mut rng);
            if !ext.is_zero(&a) {
                assert_eq!(ext.mul(&a, &ext.inv(&a).unwrap()), ext.one());
            }
        }
        let t = ext.generator();
        let t3 = ext.mul(&t, &ext.mul(&t, &t));
        assert_eq!(ext.add(&ext.add(&t3, &t), &ext.one()), ext.zero());
    }

    #[test]
    fn parse_and_display() {
        let f = Fp2::new(101).unwrap();
        let a = f.parse("3+5*t").unwrap();
        assert_eq!(a, Fp2Element { c0: 3, c1: 5 });
        assert_eq!(a.to_string(), "3+5*t");
        assert_eq!(f.parse("57").unwrap().to_string(), "57");
        assert!(f.parse("x").is_err());
    }
}
