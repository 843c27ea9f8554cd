//! Exact arithmetic substrate: integer number theory, prime fields, the
//! quadratic extension F_{p^2}, extension fields given by an irreducible
//! modulus, and univariate polynomials over any of them.

mod field;
mod integer;
mod poly;

pub use field::{Ext, ExtField, Field, Fp2, Fp2Element, PrimeField};
pub use integer::{
    ceil_sqrt_f64, integer_sqrt, is_prime, is_square, legendre, mod_pow, primes_up_to,
    sqrt_mod_prime, NextPrime,
};
pub use poly::{Poly, PolyRing};

use std::sync::atomic::{AtomicU64, Ordering};

/// Seed used for randomized polynomial splitting unless the caller supplies one.
pub const DEFAULT_SEED: u64 = 1;

static SPLIT_SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Changes the seed picked up by `PolyRing::new` from now on.
pub fn set_default_seed(seed: u64) {
    SPLIT_SEED.store(seed, Ordering::Relaxed);
}

pub fn default_seed() -> u64 {
    SPLIT_SEED.load(Ordering::Relaxed)
}
