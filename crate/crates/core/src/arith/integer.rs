use crate::error::{arg_err, Result};

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub(crate) fn reduce_i64(a: i64, m: u64) -> u64 {
    let r = (a as i128).rem_euclid(m as i128);
    r as u64
}

// Bases sufficient for a deterministic answer on all of u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin primality test for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol `(a/m)` for an odd prime `m`.
pub fn legendre(a: i64, m: u64) -> Result<i8> {
    if m < 3 || m % 2 == 0 || !is_prime(m) {
        return arg_err(format!("legendre: modulus {m} is not an odd prime"));
    }
    Ok(legendre_unchecked(reduce_i64(a, m), m))
}

pub(crate) fn legendre_unchecked(a: u64, m: u64) -> i8 {
    let a = a % m;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (m - 1) / 2, m) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of `a` modulo the odd prime `m` (Tonelli-Shanks).
///
/// Returns the smaller of the two roots `r` and `m - r`, or `None` when `a` is
/// a non-residue.
pub fn sqrt_mod_prime(a: i64, m: u64) -> Result<Option<u64>> {
    let leg = legendre(a, m)?;
    let a = reduce_i64(a, m);
    Ok(match leg {
        0 => Some(0),
        -1 => None,
        _ => {
            let r = tonelli_shanks(a, m);
            Some(r.min(m - r))
        }
    })
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return mod_pow(a, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre_unchecked(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Floor of the square root.
pub fn integer_sqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: u128) -> bool {
    let r = integer_sqrt(n);
    r * r == n
}

/// `ceil(sqrt(x))` for a non-negative float, as an integer bound.
pub fn ceil_sqrt_f64(x: f64) -> u64 {
    x.max(0.0).sqrt().ceil() as u64
}

/// All primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

/// Unbounded ascending iterator over primes starting at a given value.
#[derive(Clone, Debug)]
pub struct NextPrime {
    next: u64,
}

impl NextPrime {
    pub fn from(start: u64) -> Self {
        NextPrime { next: start }
    }
}

impl Iterator for NextPrime {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let n = self.next;
            self.next += 1;
            if is_prime(n) {
                return Some(n);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 13).unwrap(), 1);
        assert_eq!(legendre(0, 13).unwrap(), 0);
        assert_eq!(legendre(101, 11).unwrap(), -1);
        assert!(legendre(3, 15).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod_prime(-101, 11).unwrap(), Some(3));
        assert_eq!(sqrt_mod_prime(4, 13).unwrap(), Some(2));
        assert_eq!(sqrt_mod_prime(2, 5).unwrap(), None);
        assert_eq!(sqrt_mod_prime(0, 7).unwrap(), Some(0));
    }

    #[test]
    fn euler_criterion_agrees() {
        for m in primes_up_to(200).into_iter().filter(|&m| m > 2) {
            for a in 1..m {
                let e = mod_pow(a, (m - 1) / 2, m);
                let want = if e == 1 { 1 } else { -1 };
                assert_eq!(legendre(a as i64, m).unwrap(), want);
            }
        }
    }

    #[test]
    fn sqrt_exhaustive_below_500() {
        for m in primes_up_to(500).into_iter().filter(|&m| m > 2) {
            let squares: std::collections::HashSet<u64> = (0..m).map(|x| x * x % m).collect();
            for a in 0..m {
                match sqrt_mod_prime(a as i64, m).unwrap() {
                    Some(r) => {
                        assert_eq!(r * r % m, a);
                        assert!(r <= m / 2);
                    }
                    None => assert!(!squares.contains(&a), "{a} mod {m}"),
                }
            }
        }
    }

    #[test]
    fn primality_matches_sieve() {
        let sieve = primes_up_to(10_000);
        let tested: Vec<u64> = (0..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, tested);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn isqrt() {
        for n in 0..5000u128 {
            let r = integer_sqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert!(is_square(1 << 62));
    }
}
