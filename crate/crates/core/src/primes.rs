use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// p-adic valuation of a positive integer. Returns 0 for `n == 0`.
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// True iff `n` is `p^k` for some `k >= 0`.
pub fn is_power_of(n: &BigUint, p: u64) -> bool {
    if n.is_zero() {
        return false;
    }
    let v = valuation(n, p);
    *n == BigUint::from(p).pow(v)
}

/// `p^exp` with `p` prime. `exp == 0` is the trivial exponent 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub prime: u64,
    pub exp: u32,
}

impl PrimePower {
    pub fn new(prime: u64, exp: u32) -> Self {
        PrimePower { prime, exp }
    }

    pub fn one(prime: u64) -> Self {
        PrimePower { prime, exp: 0 }
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.exp)
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }
}

impl PartialOrd for PrimePower {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        (self.prime == other.prime).then(|| self.exp.cmp(&other.exp))
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.prime, self.exp)
    }
}
