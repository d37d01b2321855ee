//! Finitely generated abelian groups given as a list of cyclic factors.
//!
//! A factor `0` stands for an infinite cyclic summand `Z`, a factor `d >= 2`
//! for `Z/d`. The list need not be in invariant-factor form; two groups are
//! equal when their descriptors are equal.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::{self, PrimePower};

/// Additive order of an element: a positive integer or infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl Order {
    pub fn one() -> Self {
        Order::Finite(BigUint::one())
    }

    pub fn finite(n: u64) -> Self {
        Order::Finite(BigUint::from(n))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Order::Finite(n) if n.is_one())
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn lcm(&self, other: &Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.lcm(b)),
            _ => Order::Infinite,
        }
    }

    /// True iff the order is finite and a power of `p` (including 1).
    pub fn is_power_of(&self, p: u64) -> bool {
        match self {
            Order::Finite(n) => primes::is_power_of(n, p),
            Order::Infinite => false,
        }
    }

    /// True iff the order is finite and divides `n`.
    pub fn divides(&self, n: &BigUint) -> bool {
        match self {
            Order::Finite(d) => (n % d).is_zero(),
            Order::Infinite => false,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// Greatest common divisor of the finite entries; `Infinite` when there are none.
pub fn gcd_of_finite<'a>(orders: impl IntoIterator<Item = &'a BigUint>) -> Order {
    orders
        .into_iter()
        .fold(Order::Infinite, |acc, d| match acc {
            Order::Infinite => Order::Finite(d.clone()),
            Order::Finite(g) => Order::Finite(g.gcd(d)),
        })
}

/// Reduce `c` into `[0, d)`; infinite factors leave `c` untouched.
pub(crate) fn reduce(c: &BigInt, order: &Order) -> BigInt {
    match order {
        Order::Finite(d) => c.mod_floor(&BigInt::from_biguint(Sign::Plus, d.clone())),
        Order::Infinite => c.clone(),
    }
}

/// Additive order of a single coefficient in a cyclic factor of the given order.
pub(crate) fn coefficient_order(c: &BigInt, order: &Order) -> Order {
    if c.is_zero() {
        return Order::one();
    }
    match order {
        Order::Infinite => Order::Infinite,
        Order::Finite(d) => {
            let g = c.magnitude().gcd(d);
            Order::Finite(d / g)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    factors: Vec<BigUint>,
}

impl FgAbGroup {
    pub fn new(factors: Vec<BigUint>) -> Result<Self> {
        if let Some(d) = factors.iter().find(|d| d.is_one()) {
            return Err(Error::Validation(format!(
                "finite cyclic factor {d} must be at least 2"
            )));
        }
        Ok(FgAbGroup { factors })
    }

    pub fn from_factors(factors: &[u64]) -> Result<Self> {
        Self::new(factors.iter().map(|&d| BigUint::from(d)).collect())
    }

    pub fn trivial() -> Self {
        FgAbGroup { factors: vec![] }
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    fn factor_order(&self, i: usize) -> Order {
        let d = &self.factors[i];
        if d.is_zero() {
            Order::Infinite
        } else {
            Order::Finite(d.clone())
        }
    }

    /// Factors sorted, for comparing decompositions up to reordering.
    pub fn sorted_factors(&self) -> Vec<BigUint> {
        let mut f = self.factors.clone();
        f.sort();
        f
    }

    /// Largest p-power dividing some finite factor; `p^0` if there is no p-torsion.
    pub fn p_exponent(&self, p: u64) -> Result<PrimePower> {
        primes::require_prime(p)?;
        let exp = self
            .factors
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| primes::valuation(d, p))
            .max()
            .unwrap_or(0);
        Ok(PrimePower::new(p, exp))
    }

    /// Exponent of the torsion subgroup: lcm of the finite factors.
    pub fn torsion_exponent(&self) -> BigUint {
        self.factors
            .iter()
            .filter(|d| !d.is_zero())
            .fold(BigUint::one(), |acc, d| acc.lcm(d))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z{d}")
                }
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: Arc<FgAbGroup>,
    coeffs: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(group: Arc<FgAbGroup>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != group.factors.len() {
            return Err(Error::arg(format!(
                "expected {} coefficients, got {}",
                group.factors.len(),
                coeffs.len()
            )));
        }
        let coeffs = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| reduce(c, &group.factor_order(i)))
            .collect();
        Ok(GroupElement { group, coeffs })
    }

    pub fn from_i64s(group: Arc<FgAbGroup>, coeffs: &[i64]) -> Result<Self> {
        Self::new(group, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(group: Arc<FgAbGroup>) -> Self {
        let coeffs = vec![BigInt::zero(); group.factors.len()];
        GroupElement { group, coeffs }
    }

    pub fn group(&self) -> &Arc<FgAbGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(i, (a, b))| reduce(&(a + b), &self.group.factor_order(i)))
            .collect();
        Ok(GroupElement {
            group: Arc::clone(&self.group),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| reduce(&(c * k), &self.group.factor_order(i)))
            .collect();
        GroupElement {
            group: Arc::clone(&self.group),
            coeffs,
        }
    }

    /// Least `M >= 1` with `M·x = 0`: the lcm of `d / gcd(d, c)` over finite factors.
    pub fn order(&self) -> Order {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| coefficient_order(c, &self.group.factor_order(i)))
            .fold(Order::one(), |acc, o| acc.lcm(&o))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(f: &[u64]) -> Arc<FgAbGroup> {
        Arc::new(FgAbGroup::from_factors(f).unwrap())
    }

    fn el(g: &Arc<FgAbGroup>, c: &[i64]) -> GroupElement {
        GroupElement::from_i64s(Arc::clone(g), c).unwrap()
    }

    // multiples of x until zero, capped
    fn brute_order(x: &GroupElement, cap: u64) -> Option<u64> {
        (1..=cap).find(|&m| x.scale(&BigInt::from(m)).is_zero())
    }

    #[test]
    fn add_reduces_mod_factor() {
        let z12 = group(&[12]);
        assert_eq!(el(&z12, &[5]).add(&el(&z12, &[9])).unwrap(), el(&z12, &[2]));
        let x = el(&z12, &[7]);
        assert_eq!(x.add(&GroupElement::zero(Arc::clone(&z12))).unwrap(), x);
    }

    #[test]
    fn add_inverse_in_mixed_group() {
        let g = group(&[0, 2]);
        let s = el(&g, &[3, 1]).add(&el(&g, &[-3, 1])).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn add_rejects_other_group() {
        let a = el(&group(&[12]), &[1]);
        let b = el(&group(&[6]), &[1]);
        assert_eq!(a.add(&b), Err(Error::GroupMismatch));
    }

    #[test]
    fn coefficients_are_reduced_on_construction() {
        let g = group(&[0, 5]);
        assert_eq!(el(&g, &[-4, -3]).coeffs(), &[BigInt::from(-4), BigInt::from(2)]);
    }

    #[test]
    fn factor_one_rejected() {
        assert!(FgAbGroup::from_factors(&[1]).is_err());
        assert!(FgAbGroup::from_factors(&[]).unwrap().is_trivial());
    }

    #[test]
    fn element_orders() {
        let z12 = group(&[12]);
        assert_eq!(brute_order(&el(&z12, &[5]), 100), Some(12));
        assert_eq!(el(&z12, &[5]).order(), Order::finite(12));
        assert_eq!(el(&z12, &[0]).order(), Order::one());
        assert_eq!(el(&z12, &[6]).order(), Order::finite(2));
        let g = group(&[0, 4]);
        assert_eq!(el(&g, &[1, 0]).order(), Order::Infinite);
        assert_eq!(el(&g, &[0, 2]).order(), Order::finite(2));
    }

    #[test]
    fn order_matches_brute_force_exhaustively() {
        let g = group(&[4, 6, 15]);
        for a in 0..4 {
            for b in 0..6 {
                for c in 0..15 {
                    let x = el(&g, &[a, b, c]);
                    let expected = brute_order(&x, 1000).unwrap();
                    assert_eq!(x.order(), Order::finite(expected));
                }
            }
        }
    }

    #[test]
    fn p_exponents() {
        assert_eq!(FgAbGroup::from_factors(&[12]).unwrap().p_exponent(2).unwrap().value(), BigUint::from(4u32));
        assert!(FgAbGroup::from_factors(&[0, 5]).unwrap().p_exponent(2).unwrap().is_one());
        assert_eq!(FgAbGroup::from_factors(&[8, 2]).unwrap().p_exponent(2).unwrap().value(), BigUint::from(8u32));
        assert_eq!(FgAbGroup::from_factors(&[8]).unwrap().p_exponent(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn add_group_axioms_exhaustive() {
        let g = group(&[2, 6]);
        let all: Vec<GroupElement> = (0..2)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .map(|(a, b)| el(&g, &[a, b]))
            .collect();
        for x in &all {
            for y in &all {
                assert_eq!(x.add(y).unwrap(), y.add(x).unwrap());
                for z in &all {
                    assert_eq!(
                        x.add(y).unwrap().add(z).unwrap(),
                        x.add(&y.add(z).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}
