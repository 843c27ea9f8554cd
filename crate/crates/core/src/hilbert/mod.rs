//! Hilbert class polynomials `H_D` over the integers, computed from the
//! q-expansion of `j = E4^3 / Delta` at the CM points of the reduced forms of
//! discriminant `D`, plus their reductions and the splitting indicator
//! `delta_D(l)`.

mod bigfloat;
mod cache;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

pub use bigfloat::{fixed, BigFloat, Complex};
pub use cache::HilbertCache;

use crate::arith::{is_prime, legendre, PolyRing, PrimeField};
use crate::arith::Poly;
use crate::error::{arg_err, Error, Result};
use crate::quad_class::{check_discriminant, reduced_forms, QuadForm};

/// Precision at which the escalation loop gives up.
pub const MAX_PRECISION_BITS: u64 = 1 << 22;

/// `H_D` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub discriminant: i64,
    pub coefficients: Vec<BigInt>,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficientwise reduction modulo a prime.
    pub fn reduce_mod(&self, m: u64) -> Result<Poly<u64>> {
        let field = PrimeField::new(m)?;
        let bm = BigInt::from(m);
        let coeffs = self
            .coefficients
            .iter()
            .map(|c| {
                let r = ((c % &bm) + &bm) % &bm;
                r.to_u64().unwrap()
            })
            .collect();
        Ok(PolyRing::new(field).from_coeffs(coeffs))
    }
}

/// Working precision in bits for a first pass over the given forms.
pub fn precision_estimate(d: i64, forms: &[QuadForm]) -> u64 {
    let s: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
    let height = std::f64::consts::PI * ((-d) as f64).sqrt() * s / std::f64::consts::LN_2;
    height.ceil() as u64 + 64 + 10 * forms.len() as u64
}

fn sigma3_table(n: usize) -> Vec<i64> {
    let mut s = vec![0i64; n + 1];
    for dv in 1..=n {
        let c = (dv as i64).pow(3);
        let mut m = dv;
        while m <= n {
            s[m] += c;
            m += dv;
        }
    }
    s
}

/// `j((-b + sqrt(D)) / (2a))` at working precision `prec`.
pub fn j_at_form(f: &QuadForm, prec: u64) -> Complex {
    let d = f.discriminant();
    let w = prec + 64;
    let pi = fixed::pi(w);
    let ln2 = fixed::ln2(w);

    // |q| = exp(-pi sqrt|D| / a) = 2^-k exp(r) with 0 <= r < ln 2.
    let arg = (&pi * fixed::sqrt_int((-d) as u64, w)) >> w;
    let arg = arg / f.a;
    let k: BigInt = (&arg + &ln2 - 1) / &ln2;
    let r = &k * &ln2 - &arg;
    let radius = fixed::exp_small(&r, w);
    let k = k.to_i64().expect("exponent fits in i64");

    // arg q = -pi b / a.
    let theta = -(&pi * f.b) / f.a;
    let (c, s) = fixed::cos_sin(&theta, w);
    let re = BigFloat::from_parts(&radius * c, -2 * w as i64 - k, prec);
    let im = BigFloat::from_parts(&radius * s, -2 * w as i64 - k, prec);
    let q = Complex::new(re, im);

    let log2_q = std::f64::consts::PI * ((-d) as f64).sqrt() / (f.a as f64 * std::f64::consts::LN_2);
    let mut nterms = 1usize;
    while (nterms as f64) * log2_q - 3.0 * (nterms as f64).log2() - 8.0 < (prec + 16) as f64 {
        nterms += 1;
    }
    let sigma3 = sigma3_table(nterms);

    let mut e4 = Complex::from_i64(0, prec);
    let mut eta = Complex::from_i64(1, prec);
    let mut qn = q.clone();
    // Generalized pentagonal exponents k(3k-1)/2 and k(3k+1)/2 with sign (-1)^k.
    let mut pent = Vec::new();
    let mut kk = 1i64;
    loop {
        let e1 = (kk * (3 * kk - 1) / 2) as usize;
        if e1 > nterms {
            break;
        }
        let sign = if kk % 2 == 0 { 1 } else { -1 };
        pent.push((e1, sign));
        pent.push(((kk * (3 * kk + 1) / 2) as usize, sign));
        kk += 1;
    }
    for n in 1..=nterms {
        e4 = e4.add(&qn.mul_i64(sigma3[n]));
        for &(e, sign) in &pent {
            if e == n {
                eta = eta.add(&qn.mul_i64(sign));
            }
        }
        if n < nterms {
            qn = qn.mul(&q);
        }
    }
    let e4 = Complex::from_i64(1, prec).add(&e4.mul_i64(240));
    let eta2 = eta.square();
    let eta4 = eta2.square();
    let eta8 = eta4.square();
    let eta24 = eta8.square().mul(&eta8);
    let delta = q.mul(&eta24);
    e4.square().mul(&e4).div(&delta)
}

fn mul_real_poly(p: &[BigFloat], f: &[BigFloat]) -> Vec<BigFloat> {
    let prec = p[0].prec();
    let mut out = vec![BigFloat::zero(prec); p.len() + f.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in f.iter().enumerate() {
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    out
}

fn is_real_form(f: &QuadForm) -> bool {
    f.b == 0 || f.a == f.b || f.a == f.c
}

/// Integer coefficients of `prod (x - j(tau_f))` evaluated at precision `prec`.
fn class_poly_at_precision(forms: &[QuadForm], prec: u64) -> Vec<BigInt> {
    let work: Vec<&QuadForm> = forms.iter().filter(|f| f.b >= 0).collect();
    let factors: Vec<Vec<BigFloat>> = work
        .par_iter()
        .map(|f| {
            let j = j_at_form(f, prec);
            if is_real_form(f) {
                vec![j.re.neg(), BigFloat::from_i64(1, prec)]
            } else {
                // Conjugate pair (a, b, c), (a, -b, c).
                vec![j.norm_sqr(), j.re.mul_i64(-2), BigFloat::from_i64(1, prec)]
            }
        })
        .collect();
    let mut poly = vec![BigFloat::from_i64(1, prec)];
    for f in &factors {
        poly = mul_real_poly(&poly, f);
    }
    poly.iter().map(BigFloat::round).collect()
}

/// `H_D` over the integers. The coefficients are recomputed at twice the
/// precision and must agree exactly; precision is doubled until they do.
pub fn hilbert_class_poly(d: i64) -> Result<ClassPolynomial> {
    check_discriminant(d)?;
    let forms = reduced_forms(d)?.reduced_forms;
    let mut prec = precision_estimate(d, &forms);
    let mut prev = class_poly_at_precision(&forms, prec);
    loop {
        let next_prec = 2 * prec;
        if next_prec > MAX_PRECISION_BITS {
            return Err(Error::Resource(format!(
                "H_{d}: coefficients did not stabilize below {MAX_PRECISION_BITS} bits"
            )));
        }
        let next = class_poly_at_precision(&forms, next_prec);
        if next == prev {
            return Ok(ClassPolynomial {
                discriminant: d,
                coefficients: next,
            });
        }
        prev = next;
        prec = next_prec;
    }
}

/// `H_D mod m`, computed without caching.
pub fn hilbert_mod(d: i64, m: u64) -> Result<Poly<u64>> {
    hilbert_class_poly(d)?.reduce_mod(m)
}

/// `+1` iff `4l = t^2 - v^2 D` has a solution with `l` not dividing `t`.
pub fn delta_by_norm_form(d: i64, l: u64) -> Result<i8> {
    let target = 4 * l as i128;
    let dd = -(d as i128);
    let mut v = 1i128;
    while v * v * dd <= target {
        let t2 = target - v * v * dd;
        let t = crate::arith::integer_sqrt(t2 as u128) as i128;
        if t * t == t2 && t % l as i128 != 0 {
            return Ok(1);
        }
        v += 1;
    }
    Ok(-1)
}

/// `+1` iff `(D/l) = 1` and `H_D mod l` splits into linear factors.
pub fn delta_by_splitting(h: &ClassPolynomial, l: u64) -> Result<i8> {
    if l == 2 {
        // (D/2) = 1 iff D = 1 mod 8.
        if h.discriminant.rem_euclid(8) != 1 {
            return Ok(-1);
        }
        return Ok(if splits_over_f2(h) { 1 } else { -1 });
    }
    if legendre(h.discriminant, l)? != 1 {
        return Ok(-1);
    }
    let ring = PolyRing::new(PrimeField::new(l)?);
    Ok(if ring.splits_linear(&h.reduce_mod(l)?)? {
        1
    } else {
        -1
    })
}

/// Whether `H_D mod 2` is a product of powers of `x` and `x + 1`.
fn splits_over_f2(h: &ClassPolynomial) -> bool {
    let mut c: Vec<bool> = h.coefficients.iter().map(|a| a.bit(0)).collect();
    while c.len() > 1 && !c[0] {
        c.remove(0);
    }
    // Synthetic division by x + 1 while 1 is a root.
    while c.len() > 1 && c.iter().filter(|&&b| b).count() % 2 == 0 {
        let n = c.len() - 1;
        let mut q = vec![false; n];
        let mut carry = false;
        for i in (0..n).rev() {
            carry ^= c[i + 1];
            q[i] = carry;
        }
        c = q;
    }
    c.len() == 1
}

/// `delta_D(l)` by both methods; a disagreement is an internal error.
pub fn delta(d: i64, l: u64, cache: &HilbertCache) -> Result<i8> {
    check_discriminant(d)?;
    if !is_prime(l) {
        return arg_err(format!("{l} is not prime"));
    }
    if d.rem_euclid(l as i64) == 0 {
        return arg_err(format!("{l} divides {d}"));
    }
    let h = cache.get(d)?;
    let a = delta_by_splitting(&h, l)?;
    let b = delta_by_norm_form(d, l)?;
    if a != b {
        return Err(Error::Internal(format!(
            "delta_{d}({l}): splitting test gives {a}, norm form test gives {b}"
        )));
    }
    Ok(a)
}

impl ClassPolynomial {
    pub fn is_monic(&self) -> bool {
        self.coefficients.last().is_some_and(|c| *c == BigInt::from(1))
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }
}
