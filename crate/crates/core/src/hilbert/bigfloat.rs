use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Binary floating point number `mantissa * 2^exponent` whose mantissa is
/// truncated to at most `prec` bits after every operation.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    prec: u64,
}

impl BigFloat {
    pub fn zero(prec: u64) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            prec,
        }
    }

    pub fn from_bigint(m: BigInt, prec: u64) -> Self {
        Self::from_parts(m, 0, prec)
    }

    pub fn from_i64(v: i64, prec: u64) -> Self {
        Self::from_bigint(BigInt::from(v), prec)
    }

    /// `m * 2^e`, normalized to `prec` bits.
    pub fn from_parts(mantissa: BigInt, exponent: i64, prec: u64) -> Self {
        BigFloat {
            mantissa,
            exponent,
            prec,
        }
        .normalized()
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// `floor(log2 |x|) + 1`, or `i64::MIN` for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mantissa.bits() as i64 + self.exponent
        }
    }

    fn normalized(mut self) -> Self {
        let bits = self.mantissa.bits();
        if bits > self.prec {
            let s = bits - self.prec;
            self.mantissa >>= s;
            self.exponent += s as i64;
        }
        if self.mantissa.is_zero() {
            self.exponent = 0;
        }
        self
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &BigFloat) -> Self {
        let prec = self.prec.max(o.prec);
        if o.is_zero() {
            return Self::from_parts(self.mantissa.clone(), self.exponent, prec);
        }
        if self.is_zero() {
            return Self::from_parts(o.mantissa.clone(), o.exponent, prec);
        }
        let gap = self.magnitude() - o.magnitude();
        if gap > prec as i64 + 2 {
            return Self::from_parts(self.mantissa.clone(), self.exponent, prec);
        }
        if -gap > prec as i64 + 2 {
            return Self::from_parts(o.mantissa.clone(), o.exponent, prec);
        }
        let e = self.exponent.min(o.exponent);
        let m = (&self.mantissa << (self.exponent - e) as u64)
            + (&o.mantissa << (o.exponent - e) as u64);
        Self::from_parts(m, e, prec)
    }

    pub fn sub(&self, o: &BigFloat) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &BigFloat) -> Self {
        Self::from_parts(
            &self.mantissa * &o.mantissa,
            self.exponent + o.exponent,
            self.prec.max(o.prec),
        )
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        Self::from_parts(&self.mantissa * v, self.exponent, self.prec)
    }

    /// Multiplies by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        BigFloat {
            mantissa: self.mantissa.clone(),
            exponent: if self.is_zero() { 0 } else { self.exponent + k },
            prec: self.prec,
        }
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &BigFloat) -> Self {
        assert!(!o.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(o.prec);
        let s = (prec as i64 + 2 + o.mantissa.bits() as i64 - self.mantissa.bits() as i64).max(0);
        let m = (&self.mantissa << s as u64) / &o.mantissa;
        Self::from_parts(m, self.exponent - o.exponent - s, prec)
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.mantissa.is_negative(), "square root of a negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * self.prec as i64 + 2;
        let mut s = (want - self.mantissa.bits() as i64).max(0);
        if (self.exponent - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = (&self.mantissa << s as u64).sqrt();
        Self::from_parts(m, (self.exponent - s) / 2, self.prec)
    }

    /// Nearest integer (ties toward positive infinity).
    pub fn round(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            let s = (-self.exponent) as u64;
            let half = BigInt::one() << (s - 1);
            (&self.mantissa + half) >> s
        }
    }

    /// `|x - round(x)|` as a float.
    pub fn distance_to_integer(&self) -> f64 {
        let r = BigFloat::from_bigint(self.round(), self.prec.max(self.magnitude().max(1) as u64 + 8));
        self.sub(&r).to_f64().abs()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.mantissa >> s, self.exponent + s as i64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        let mf = m.to_f64().unwrap();
        mf * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }

    pub fn cmp_abs(&self, o: &BigFloat) -> Ordering {
        self.abs().sub(&o.abs()).sign_ordering()
    }

    fn sign_ordering(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            prec: self.prec,
        }
    }
}

/// Complex number with `BigFloat` parts.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn from_i64(v: i64, prec: u64) -> Self {
        Complex::new(BigFloat::from_i64(v, prec), BigFloat::zero(prec))
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn square(&self) -> Complex {
        self.mul(self)
    }

    pub fn mul_i64(&self, v: i64) -> Complex {
        Complex::new(self.re.mul_i64(v), self.im.mul_i64(v))
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let n = o.norm_sqr();
        let conj = Complex::new(o.re.clone(), o.im.neg());
        let num = self.mul(&conj);
        Complex::new(num.re.div(&n), num.im.div(&n))
    }
}

/// Fixed-point constants and elementary functions. A fixed-point value `X` at
/// scale `w` stands for `X / 2^w`.
pub mod fixed {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn one(w: u64) -> BigInt {
        BigInt::one() << w
    }

    fn mul(a: &BigInt, b: &BigInt, w: u64) -> BigInt {
        (a * b) >> w
    }

    // sum_k (-1)^k / ((2k+1) n^(2k+1))
    fn atan_inv(n: u64, w: u64) -> BigInt {
        let n2 = BigInt::from(n * n);
        let mut power = one(w) / n;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &n2;
            k += 1;
        }
        sum
    }

    // sum_k 1 / ((2k+1) 3^(2k+1)), which equals atanh(1/3).
    fn atanh_inv3(w: u64) -> BigInt {
        let mut power = one(w) / 3u32;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            sum += &power / (2 * k + 1);
            power /= 9u32;
            k += 1;
        }
        sum
    }

    pub fn pi(w: u64) -> BigInt {
        let g = w + 16;
        ((atan_inv(5, g) * 16u32) - (atan_inv(239, g) * 4u32)) >> 16
    }

    pub fn ln2(w: u64) -> BigInt {
        let g = w + 16;
        (atanh_inv3(g) * 2u32) >> 16
    }

    pub fn sqrt_int(n: u64, w: u64) -> BigInt {
        (BigInt::from(n) << (2 * w)).sqrt()
    }

    const HALVINGS: u64 = 40;

    /// `exp(r)` for `0 <= r < 1`.
    pub fn exp_small(r: &BigInt, w: u64) -> BigInt {
        let g = w + HALVINGS + 16;
        let x = (r << (g - w)) >> HALVINGS;
        let mut sum = one(g);
        let mut term = one(g);
        let mut n = 1u64;
        loop {
            term = mul(&term, &x, g) / n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..HALVINGS {
            sum = mul(&sum, &sum, g);
        }
        sum >> (g - w)
    }

    /// `(cos t, sin t)` for `|t| <= 4`.
    pub fn cos_sin(t: &BigInt, w: u64) -> (BigInt, BigInt) {
        let g = w + HALVINGS + 16;
        let x = (t << (g - w)) >> HALVINGS;
        let x2 = mul(&x, &x, g);
        let mut c = one(g);
        let mut s = x.clone();
        let mut tc = one(g);
        let mut ts = x;
        let mut n = 1u64;
        loop {
            tc = -mul(&tc, &x2, g) / ((2 * n - 1) * (2 * n));
            ts = -mul(&ts, &x2, g) / ((2 * n) * (2 * n + 1));
            if tc.is_zero() && ts.is_zero() {
                break;
            }
            c += &tc;
            s += &ts;
            n += 1;
        }
        for _ in 0..HALVINGS {
            let nc = mul(&c, &c, g) - mul(&s, &s, g);
            let ns = mul(&c, &s, g) << 1;
            c = nc;
            s = ns;
        }
        (c >> (g - w), s >> (g - w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(v: &BigInt, w: u64) -> f64 {
        BigFloat::from_parts(v.clone(), -(w as i64), 64).to_f64()
    }

    #[test]
    fn constants() {
        let w = 200;
        assert!((fx(&fixed::pi(w), w) - std::f64::consts::PI).abs() < 1e-15);
        assert!((fx(&fixed::ln2(w), w) - std::f64::consts::LN_2).abs() < 1e-15);
        // 60 digits of pi.
        let pi = fixed::pi(256);
        let digits = (pi * BigInt::from(10u32).pow(60)) >> 256u32;
        assert_eq!(
            digits.to_string(),
            "3141592653589793238462643383279502884197169399375105820974944"
        );
    }

    #[test]
    fn elementary_functions() {
        let w = 128;
        for k in 0..20 {
            let r = k as f64 / 21.0;
            let rf = BigInt::from((r * 2f64.powi(52)) as i64) << (w - 52);
            let r = fx(&rf, w);
            assert!((fx(&fixed::exp_small(&rf, w), w) - r.exp()).abs() < 1e-14);
            let t = BigInt::from(-(k as i64) * 3) * &rf / 2;
            let tv = fx(&t, w);
            let (c, s) = fixed::cos_sin(&t, w);
            assert!((fx(&c, w) - tv.cos()).abs() < 1e-14);
            assert!((fx(&s, w) - tv.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn arithmetic() {
        let p = 100;
        let a = BigFloat::from_i64(7, p);
        let b = BigFloat::from_i64(-3, p);
        assert!((a.div(&b).to_f64() + 7.0 / 3.0).abs() < 1e-15);
        assert!((a.sqrt().to_f64() - 7f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.mul(&b).round(), BigInt::from(-21));
        let tiny = BigFloat::from_parts(BigInt::one(), -500, p);
        assert_eq!(a.add(&tiny).round(), BigInt::from(7));
        let x = BigFloat::from_parts(BigInt::from(5), -1, p);
        assert_eq!(x.round(), BigInt::from(3));
        assert!((x.distance_to_integer() - 0.5).abs() < 1e-12);
        assert_eq!(a.cmp_abs(&b), Ordering::Greater);
    }
}
