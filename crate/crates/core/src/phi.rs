//! Coefficient combinatorics for the Cohen-group multiplication.
//!
//! `Φ_{l,k}` weights the Whitehead-product correction `[α_l, β_{k-l+1}]` in
//! slot `k + 1` of a product. It is a signed binomial depending on the
//! parities of `l` and `k`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes;
use crate::whitehead::swap_sign;

/// Exact binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn signed(b: BigUint, negative: bool) -> BigInt {
    let b = BigInt::from(b);
    if negative {
        -b
    } else {
        b
    }
}

/// `Φ_{l,k}` for `1 <= l <= k`.
pub fn phi(l: u64, k: u64) -> Result<BigInt> {
    if l < 1 || l > k {
        return Err(Error::arg(format!("phi({l},{k}) requires 1 <= l <= k")));
    }
    Ok(match (l % 2 == 0, k % 2 == 0) {
        (true, true) => signed(binomial(k / 2, l / 2), true),
        (false, true) => BigInt::zero(),
        (false, false) => signed(binomial((k - 1) / 2, (l - 1) / 2), false),
        (true, false) => signed(binomial((k - 1) / 2, l / 2), true),
    })
}

/// Coefficient of `[α, β]` in slot `n + m` of `(α, β)^2`, where `α` sits in
/// slot `n` and `β` in slot `m` of a Cohen group over `S^{r+1}`.
///
/// The second summand comes from `[β, α] = ±[α, β]`, so its sign is the
/// graded-antisymmetry sign for dimensions `nr+1` and `mr+1`.
pub fn phi_delta(n: u64, m: u64, r: u64) -> BigInt {
    let k = n + m - 1;
    let a = phi(n, k).expect("n <= n+m-1");
    let b = phi(m, k).expect("m <= n+m-1");
    let sign = swap_sign(n * r + 1, m * r + 1);
    a + b * sign
}

/// `C(m, n) mod p` by Lucas' theorem on base-`p` digits.
pub fn binom_mod_p(m: u64, n: u64, p: u64) -> Result<u64> {
    primes::require_prime(p)?;
    let (mut m, mut n) = (m, n);
    let mut acc = 1u64;
    while m > 0 || n > 0 {
        let (mi, ni) = (m % p, n % p);
        if ni > mi {
            return Ok(0);
        }
        let digit = binomial(mi, ni) % BigUint::from(p);
        let digit = u64::try_from(digit).expect("reduced below p");
        acc = (acc as u128 * digit as u128 % p as u128) as u64;
        m /= p;
        n /= p;
    }
    Ok(acc % p)
}

/// `Σ_{l=2}^{M-1} C(l, 2)`, the multiplicity of each weight-3 term in an M-th power.
pub fn sum_binom2(m: u64) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::arg(format!("sum_binom2 requires M >= 2, got {m}")));
    }
    let mut acc = 0u128;
    for l in 2..m {
        let l = l as u128;
        match acc.checked_add(l * (l - 1) / 2) {
            Some(next) if l < 1 << 60 => acc = next,
            _ => {
                let rest: BigUint = (l as u64..m).map(|l| binomial(l, 2)).sum();
                return Ok(BigUint::from(acc) + rest);
            }
        }
    }
    Ok(BigUint::from(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Pascal's triangle, independent of the multiplicative formula.
    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut t: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for n in 1..rows {
            let prev = &t[n - 1];
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &prev[k - 1] + &prev[k];
            }
            t.push(row);
        }
        t
    }

    fn c(t: &[Vec<BigUint>], n: u64, k: u64) -> BigInt {
        if k > n {
            BigInt::zero()
        } else {
            BigInt::from(t[n as usize][k as usize].clone())
        }
    }

    #[test]
    fn binomial_matches_pascal() {
        let t = pascal(120);
        for n in 0..120u64 {
            for k in 0..=n + 2 {
                assert_eq!(BigInt::from(binomial(n, k)), c(&t, n, k), "C({n},{k})");
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(1, 2).unwrap(), BigInt::zero());
        assert_eq!(phi(1, 1).unwrap(), BigInt::one());
        assert_eq!(phi(2, 3).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn phi_rejects_out_of_range() {
        assert!(phi(0, 3).is_err());
        assert!(phi(4, 3).is_err());
    }

    #[test]
    fn phi_matches_printed_table() {
        let t = pascal(101);
        for k in 1..=200u64 {
            for l in 1..=k {
                let expected = if l % 2 == 0 && k % 2 == 0 {
                    -c(&t, k / 2, l / 2)
                } else if k % 2 == 0 {
                    BigInt::zero()
                } else if l % 2 == 1 {
                    c(&t, (k - 1) / 2, (l - 1) / 2)
                } else {
                    -c(&t, (k - 1) / 2, l / 2)
                };
                assert_eq!(phi(l, k).unwrap(), expected, "phi({l},{k})");
            }
        }
    }

    #[test]
    fn phi_delta_examples() {
        // 2·C(0,0)
        assert_eq!(phi_delta(1, 1, 1), BigInt::from(2));
        // Φ_{1,2} = 0, Φ_{2,2} = -1 with sign (-1)^{2·3} = +1
        assert_eq!(phi_delta(1, 2, 1), BigInt::from(-1));
        // Φ_{2,3} = -1 twice, sign (-1)^{3·3} = -1: the two terms cancel
        assert_eq!(phi_delta(2, 2, 1), BigInt::zero());
    }

    #[test]
    fn phi_delta_closed_forms_when_sign_is_positive() {
        // For r = 1 and n, m not both even, (n+1)(m+1) is even and Φ_Δ is
        // the plain sum, which collapses to a single binomial.
        let t = pascal(80);
        for n in 1..60u64 {
            for m in 1..60u64 {
                let got = phi_delta(n, m, 1);
                let expected = match (n % 2, m % 2) {
                    (1, 1) => BigInt::from(2) * c(&t, (n + m - 2) / 2, (n - 1) / 2),
                    (0, 1) => -c(&t, (n + m - 1) / 2, n / 2),
                    (1, 0) => -c(&t, (n + m - 1) / 2, m / 2),
                    _ => continue,
                };
                assert_eq!(got, expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn phi_delta_even_even_is_difference_for_odd_r() {
        let t = pascal(80);
        for n in (2..60u64).step_by(2) {
            for m in (2..60u64).step_by(2) {
                let k = n + m - 1;
                let expected = -c(&t, (k - 1) / 2, n / 2) + c(&t, (k - 1) / 2, m / 2);
                assert_eq!(phi_delta(n, m, 1), expected);
                assert_eq!(phi_delta(n, m, 3), expected);
            }
        }
    }

    #[test]
    fn phi_delta_uses_dimension_sign_for_even_r() {
        // nr+1 and mr+1 are both odd, so the sign is always -1
        for n in 1..20u64 {
            for m in 1..20u64 {
                let k = n + m - 1;
                let expected = phi(n, k).unwrap() - phi(m, k).unwrap();
                assert_eq!(phi_delta(n, m, 2), expected);
            }
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(binom_mod_p(6, 3, 2).unwrap(), 0);
        for m in 0..50 {
            assert_eq!(binom_mod_p(m, 0, 5).unwrap(), 1);
        }
        for n in (3..200u64).step_by(2) {
            assert_eq!(binom_mod_p(n - 1, (n - 1) / 2, 2).unwrap(), 0, "n={n}");
        }
        assert_eq!(binom_mod_p(10, 3, 6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn lucas_matches_exact_binomials() {
        let t = pascal(301);
        for p in [2u64, 3, 5, 7] {
            let pb = BigInt::from(p);
            for m in 0..=300u64 {
                for n in 0..=300u64 {
                    let exact = c(&t, m, n) % &pb;
                    assert_eq!(BigInt::from(binom_mod_p(m, n, p).unwrap()), exact);
                }
            }
        }
    }

    #[test]
    fn sum_binom2_examples() {
        assert_eq!(sum_binom2(4).unwrap(), BigUint::from(4u32));
        assert_eq!(sum_binom2(2).unwrap(), BigUint::zero());
        assert_eq!(sum_binom2(8).unwrap(), BigUint::from(56u32));
        assert!(sum_binom2(1).is_err());
    }

    #[test]
    fn sum_binom2_is_binomial_m_3() {
        for m in 2..=2000u64 {
            let direct: u128 = (2..m as u128).map(|l| l * (l - 1) / 2).sum();
            let m128 = m as u128;
            assert_eq!(direct, m128 * (m128 - 1) * (m128 - 2) / 6);
            assert_eq!(sum_binom2(m).unwrap(), BigUint::from(direct));
        }
    }

    #[test]
    fn central_binomial_parity() {
        // C(n-1, n/2) is odd exactly when n is a power of two
        for n in (2..=4096u64).step_by(2) {
            let odd = binom_mod_p(n - 1, n / 2, 2).unwrap() == 1;
            assert_eq!(odd, n.is_power_of_two(), "n={n}");
        }
    }
}
