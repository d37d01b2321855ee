//! Truncated total Cohen group `[Ω(S^{r+1}), Ω(Y)]`.
//!
//! An element is a tuple `(α_1, …, α_N)` with `α_j` in slot `j`, i.e. in
//! `π_{jr+1}(Y)`. Slots are 1-based. The product is
//!
//! ```text
//! (α ⊛ β)_j = α_j + β_j + Σ_{i+s=j} Φ_{i,i+s-1} [α_i, β_s]
//! ```
//!
//! Everything here is generic over a [`CoordinateAlgebra`], which supplies
//! the abelian group structure of each slot and the Whitehead bracket between
//! slots. The formal backend is [`TargetModel`]; the concrete bracket-free
//! backend is [`ConcreteModel`](crate::targets::ConcreteModel).

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::abelian::Order;
use crate::error::{Error, Result};
use crate::exponents::{ExponentValue, Rule};
use crate::phi::{binomial, phi};
use crate::primes::{self, PrimePower};
use crate::whitehead::{FormalClass, Generator, RelationProfile, TargetModel};

/// Coordinate groups `π_{jr+1}(Y)` together with the Whitehead bracket.
pub trait CoordinateAlgebra: fmt::Debug + PartialEq + Sized {
    type Class: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn r(&self) -> usize;
    fn truncation(&self) -> usize;
    fn zero(&self, slot: usize) -> Self::Class;
    fn is_zero(&self, x: &Self::Class) -> bool;
    /// Checks that `x` is a valid, reduced class in `slot`.
    fn check(&self, slot: usize, x: &Self::Class) -> Result<()>;
    fn add(&self, x: &Self::Class, y: &Self::Class) -> Self::Class;
    fn scale(&self, x: &Self::Class, k: &BigInt) -> Self::Class;
    /// `[x, y]` for `x` in slot `i` and `y` in slot `s`, landing in slot `i + s`.
    fn bracket(&self, x: &Self::Class, y: &Self::Class) -> Self::Class;
    fn order(&self, x: &Self::Class) -> Order;
    /// Order of the part of `x` not built from brackets.
    fn linear_order(&self, x: &Self::Class) -> Order;
    /// Largest absolute value of a coefficient of `x`.
    fn height(&self, x: &Self::Class) -> BigUint;
    /// The same target with fewer slots.
    fn truncated(&self, truncation: usize) -> Result<Self>;
    /// The freest p-torsion tuple: coordinate `j` generates the p-primary part
    /// of slot `j` with the largest available order. Returns the algebra the
    /// tuple lives in, which may differ from `self`.
    fn generic_p_torsion(&self, p: u64) -> Result<(Self, Vec<Self::Class>)>;
}

impl CoordinateAlgebra for TargetModel {
    type Class = FormalClass;

    fn r(&self) -> usize {
        TargetModel::r(self)
    }

    fn truncation(&self) -> usize {
        TargetModel::truncation(self)
    }

    fn zero(&self, slot: usize) -> FormalClass {
        FormalClass::zero(slot)
    }

    fn is_zero(&self, x: &FormalClass) -> bool {
        x.is_zero()
    }

    fn check(&self, slot: usize, x: &FormalClass) -> Result<()> {
        if x.slot() != slot {
            return Err(Error::Validation(format!(
                "class in slot {} placed at coordinate {slot}",
                x.slot()
            )));
        }
        self.validate(x)
    }

    fn add(&self, x: &FormalClass, y: &FormalClass) -> FormalClass {
        self.add_unchecked(x, y)
    }

    fn scale(&self, x: &FormalClass, k: &BigInt) -> FormalClass {
        TargetModel::scale(self, x, k)
    }

    fn bracket(&self, x: &FormalClass, y: &FormalClass) -> FormalClass {
        self.bracket_unchecked(x, y)
    }

    fn order(&self, x: &FormalClass) -> Order {
        self.class_order(x)
    }

    fn linear_order(&self, x: &FormalClass) -> Order {
        TargetModel::linear_order(self, x)
    }

    fn height(&self, x: &FormalClass) -> BigUint {
        x.terms().values().map(|c| c.magnitude().clone()).max().unwrap_or_default()
    }

    fn truncated(&self, truncation: usize) -> Result<Self> {
        TargetModel::truncated(self, truncation)
    }

    fn generic_p_torsion(&self, p: u64) -> Result<(Self, Vec<FormalClass>)> {
        primes::require_prime(p)?;
        let mut fresh = Vec::new();
        for slot in 1..=self.truncation() {
            let t = self
                .generators_at(slot)
                .filter_map(|(_, g)| g.order.as_finite().map(|d| primes::valuation(d, p)))
                .max()
                .unwrap_or(0);
            if t > 0 {
                fresh.push(Generator {
                    slot,
                    order: Order::Finite(PrimePower::new(p, t).value()),
                });
            }
        }
        let generic = self.with_generators(fresh)?;
        let mut coords: Vec<FormalClass> =
            (1..=generic.truncation()).map(FormalClass::zero).collect();
        for (i, g) in generic.generators().iter().enumerate() {
            coords[g.slot - 1] = generic.generator_class(i + 1, 1)?;
        }
        Ok((generic, coords))
    }
}

/// Element order in a Cohen group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(BigUint),
    /// Some power never vanishes; `witness_slot` is the first slot where the
    /// obstruction shows up.
    Infinite { witness_slot: usize },
}

impl ElementOrder {
    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            ElementOrder::Finite(n) => Some(n),
            ElementOrder::Infinite { .. } => None,
        }
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(n) => write!(f, "{n}"),
            ElementOrder::Infinite { witness_slot } => {
                write!(f, "infinite (witness slot {witness_slot})")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CohenElement<A: CoordinateAlgebra> {
    model: Arc<A>,
    coords: Vec<A::Class>,
}

impl<A: CoordinateAlgebra> PartialEq for CohenElement<A> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.model, &other.model) || self.model == other.model)
            && self.coords == other.coords
    }
}

impl<A: CoordinateAlgebra> CohenElement<A> {
    /// Element with the given coordinates, `coords[j - 1]` in slot `j`.
    pub fn new(model: Arc<A>, coords: Vec<A::Class>) -> Result<Self> {
        if coords.len() != model.truncation() {
            return Err(Error::arg(format!(
                "expected {} coordinates, got {}",
                model.truncation(),
                coords.len()
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            model.check(i + 1, c)?;
        }
        Ok(CohenElement { model, coords })
    }

    /// Element with the listed slots set and every other slot zero.
    pub fn from_slots(model: Arc<A>, slots: impl IntoIterator<Item = (usize, A::Class)>) -> Result<Self> {
        let mut coords: Vec<A::Class> = (1..=model.truncation()).map(|j| model.zero(j)).collect();
        for (j, c) in slots {
            if j < 1 || j > coords.len() {
                return Err(Error::arg(format!(
                    "slot {j} outside 1..={}",
                    coords.len()
                )));
            }
            coords[j - 1] = c;
        }
        Self::new(model, coords)
    }

    pub fn identity(model: Arc<A>) -> Self {
        let coords = (1..=model.truncation()).map(|j| model.zero(j)).collect();
        CohenElement { model, coords }
    }

    pub fn model(&self) -> &Arc<A> {
        &self.model
    }

    pub fn coords(&self) -> &[A::Class] {
        &self.coords
    }

    /// Coordinate in slot `j` (1-based).
    pub fn coord(&self, j: usize) -> &A::Class {
        &self.coords[j - 1]
    }

    pub fn truncation(&self) -> usize {
        self.coords.len()
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| self.model.is_zero(c))
    }

    /// Slots holding a nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.coords.len())
            .filter(|&j| !self.model.is_zero(&self.coords[j - 1]))
            .collect()
    }

    fn same_model(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.model, &other.model) || self.model == other.model {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    fn product(model: &A, a: &[A::Class], b: &[A::Class]) -> Vec<A::Class> {
        let n = a.len();
        (1..=n)
            .map(|j| {
                let mut c = model.add(&a[j - 1], &b[j - 1]);
                for i in 1..j {
                    let s = j - i;
                    if model.is_zero(&a[i - 1]) || model.is_zero(&b[s - 1]) {
                        continue;
                    }
                    let coeff = phi(i as u64, (j - 1) as u64).expect("1 <= i <= j-1");
                    if coeff.is_zero() {
                        continue;
                    }
                    let br = model.bracket(&a[i - 1], &b[s - 1]);
                    c = model.add(&c, &model.scale(&br, &coeff));
                }
                c
            })
            .collect()
    }

    /// The group law `⊛`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_model(other)?;
        Ok(CohenElement {
            model: Arc::clone(&self.model),
            coords: Self::product(&self.model, &self.coords, &other.coords),
        })
    }

    /// Right inverse `b` with `a ⊛ b = 1`, solved slot by slot: the correction
    /// in slot `j` only involves coordinates of `b` below `j`.
    pub fn inverse(&self) -> Self {
        let m = &self.model;
        let a = &self.coords;
        let minus_one = BigInt::from(-1);
        let mut b: Vec<A::Class> = Vec::with_capacity(a.len());
        for j in 1..=a.len() {
            let mut c = m.scale(&a[j - 1], &minus_one);
            for i in 1..j {
                let s = j - i;
                if m.is_zero(&a[i - 1]) || m.is_zero(&b[s - 1]) {
                    continue;
                }
                let coeff = phi(i as u64, (j - 1) as u64).expect("1 <= i <= j-1");
                if coeff.is_zero() {
                    continue;
                }
                let br = m.bracket(&a[i - 1], &b[s - 1]);
                c = m.add(&c, &m.scale(&br, &-coeff));
            }
            b.push(c);
        }
        CohenElement {
            model: Arc::clone(m),
            coords: b,
        }
    }

    pub fn pow(&self, exponent: u64) -> Self {
        self.pow_big(&BigUint::from(exponent))
    }

    /// `B(x, y)_j = Σ_{i+s=j} Φ_{i,j-1} [x_i, y_s]`, the bracket part of `x ⊛ y`.
    fn pairing(model: &A, x: &[A::Class], y: &[A::Class]) -> Vec<A::Class> {
        (1..=x.len())
            .map(|j| {
                let mut c = model.zero(j);
                for i in 1..j {
                    let s = j - i;
                    if model.is_zero(&x[i - 1]) || model.is_zero(&y[s - 1]) {
                        continue;
                    }
                    let coeff = phi(i as u64, (j - 1) as u64).expect("1 <= i <= j-1");
                    if !coeff.is_zero() {
                        let br = model.bracket(&x[i - 1], &y[s - 1]);
                        c = model.add(&c, &model.scale(&br, &coeff));
                    }
                }
                c
            })
            .collect()
    }

    /// The weight-2 and weight-3 parts `B = B(a, a)` and `T = B(B, a)`.
    fn power_parts(&self) -> (Vec<A::Class>, Vec<A::Class>) {
        let b = Self::pairing(&self.model, &self.coords, &self.coords);
        let t = Self::pairing(&self.model, &b, &self.coords);
        (b, t)
    }

    fn combine(&self, b: &[A::Class], t: &[A::Class], exponent: &BigUint) -> Self {
        let m = &self.model;
        let c1 = BigInt::from(exponent.clone());
        let c2 = BigInt::from(big_binomial(exponent, 2));
        let c3 = BigInt::from(big_binomial(exponent, 3));
        let coords = (0..self.coords.len())
            .map(|i| {
                let x = m.add(&m.scale(&self.coords[i], &c1), &m.scale(&b[i], &c2));
                m.add(&x, &m.scale(&t[i], &c3))
            })
            .collect();
        CohenElement {
            model: Arc::clone(m),
            coords,
        }
    }

    /// Left-normed power `a^M = a^{M-1} ⊛ a`, with `a^0 = 1`.
    ///
    /// Brackets of weight four or more vanish, so by induction on `M`
    ///
    /// ```text
    /// a^M = M·a + C(M,2)·B(a,a) + C(M,3)·B(B(a,a),a)
    /// ```
    ///
    /// using `Σ_{l=2}^{M-1} C(l,2) = C(M,3)`.
    pub fn pow_big(&self, exponent: &BigUint) -> Self {
        let (b, t) = self.power_parts();
        self.combine(&b, &t, exponent)
    }

    /// `a^M` by repeated right multiplication, for cross-checks.
    pub fn pow_iterated(&self, exponent: u64) -> Self {
        let mut result = Self::identity(Arc::clone(&self.model));
        for _ in 0..exponent {
            result.coords = Self::product(&self.model, &result.coords, &self.coords);
        }
        result
    }

    /// Least `M >= 1` with `self^M = 1`.
    ///
    /// The linear part of `self^M` is `M` times that of `self`, so `M` runs
    /// over multiples of its order `L`. When `a`, `B` and `T` all have finite
    /// order, `lcm(ord a, 2 ord B, 6 ord T)` kills the power and bounds the
    /// search. Otherwise some infinite-order symbol carries a nonzero cubic
    /// `cM + bC(M,2) + tC(M,3)`, whose positive roots are at most `6h + 3`
    /// for coefficient height `h`.
    pub fn order(&self) -> ElementOrder {
        let m = &self.model;
        let mut linear = Order::one();
        for (i, x) in self.coords.iter().enumerate() {
            linear = linear.lcm(&m.linear_order(x));
            if linear == Order::Infinite {
                return ElementOrder::Infinite { witness_slot: i + 1 };
            }
        }
        let step = linear.as_finite().expect("finite").clone();
        let (b, t) = self.power_parts();
        let mut bound = step.clone();
        let mut height = BigUint::zero();
        let mut witness = None;
        for j in 0..self.coords.len() {
            for (x, factor) in [(&self.coords[j], 1u32), (&b[j], 2), (&t[j], 6)] {
                match m.order(x) {
                    Order::Finite(d) => bound = bound.lcm(&(d * factor)),
                    Order::Infinite => {
                        witness.get_or_insert(j + 1);
                        height = height.max(m.height(x));
                    }
                }
            }
        }
        if let Some(w) = witness {
            bound = height * 6u32 + 3u32;
            if bound < step {
                return ElementOrder::Infinite { witness_slot: w };
            }
        }
        let mut k = step.clone();
        while k <= bound {
            if self.combine(&b, &t, &k).is_identity() {
                return ElementOrder::Finite(k);
            }
            k += &step;
        }
        match witness {
            Some(w) => ElementOrder::Infinite { witness_slot: w },
            None => unreachable!("the lcm bound annihilates every term"),
        }
    }

    /// Drop every slot above `truncation`.
    pub fn project(&self, truncation: usize) -> Result<Self> {
        let model = Arc::new(self.model.truncated(truncation)?);
        Ok(CohenElement {
            model,
            coords: self.coords[..truncation].to_vec(),
        })
    }

    /// Whether every coordinate of a p-torsion element is p-torsion.
    ///
    /// Only applicable when the element's own order is a power of `p`.
    pub fn torsion_coordinates_check(&self, p: u64) -> Result<bool> {
        primes::require_prime(p)?;
        match self.order() {
            ElementOrder::Finite(n) if primes::is_power_of(&n, p) => Ok(self
                .coords
                .iter()
                .all(|x| self.model.order(x).is_power_of(p))),
            other => Err(Error::NotApplicable(format!(
                "element order {other} is not a power of {p}"
            ))),
        }
    }
}

impl<A: CoordinateAlgebra> fmt::Display for CohenElement<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::notation::write_element(f, self)
    }
}

/// `C(n, k)` for a big `n` and small `k`.
fn big_binomial(n: &BigUint, k: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        if *n < BigUint::from(i) {
            return BigUint::zero();
        }
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// M-th power of the two-coordinate element `(α at n, β at m)`, assembled
/// directly from its linear, weight-2 and weight-3 parts:
///
/// ```text
/// (α, β)^M = M·(α, β) + C(M,2)·B + C(M,3)·T
/// ```
///
/// where `B = Σ Φ_{i,i+s-1}[x_i, x_s]` over the two slots (so it holds
/// `Φ_{n,2n-1}[α,α]`, `Φ_{m,2m-1}[β,β]` and `Φ_Δ[α,β]`) and `T` is the same
/// pairing applied to `B` and `(α, β)`, which produces the six triple products.
/// Slots beyond the truncation are dropped.
pub fn closed_two_coordinate_power<A: CoordinateAlgebra>(
    model: &Arc<A>,
    n: usize,
    alpha: &A::Class,
    m: usize,
    beta: &A::Class,
    exponent: u64,
) -> Result<CohenElement<A>> {
    let trunc = model.truncation();
    if n < 1 || m < 1 || n > trunc || m > trunc {
        return Err(Error::arg(format!("slots {n}, {m} outside 1..={trunc}")));
    }
    model.check(n, alpha)?;
    model.check(m, beta)?;
    let mut coords: Vec<A::Class> = (1..=trunc).map(|j| model.zero(j)).collect();
    let add_at = |coords: &mut Vec<A::Class>, slot: usize, x: A::Class| {
        if slot <= trunc {
            coords[slot - 1] = model.add(&coords[slot - 1], &x);
        }
    };
    let linear = [(n, alpha.clone()), (m, beta.clone())];

    let c1 = BigInt::from(exponent);
    let c2 = BigInt::from(binomial(exponent, 2));
    let c3 = BigInt::from(binomial(exponent, 3));

    // Type I
    for (slot, x) in &linear {
        add_at(&mut coords, *slot, model.scale(x, &c1));
    }

    // B: the weight-2 pairing of (α, β) with itself
    let mut quadratic: Vec<(usize, A::Class)> = Vec::new();
    for (i, x) in &linear {
        for (s, y) in &linear {
            let slot = i + s;
            if slot > trunc {
                continue;
            }
            let coeff = phi(*i as u64, (slot - 1) as u64)?;
            quadratic.push((slot, model.scale(&model.bracket(x, y), &coeff)));
        }
    }

    // Type II
    for (slot, x) in &quadratic {
        add_at(&mut coords, *slot, model.scale(x, &c2));
    }

    // Type III: the six triple products [[·,·],α], [[·,·],β]
    for (k, q) in &quadratic {
        for (s, y) in &linear {
            let slot = k + s;
            if slot > trunc {
                continue;
            }
            let coeff = phi(*k as u64, (slot - 1) as u64)?;
            let t = model.scale(&model.bracket(q, y), &coeff);
            add_at(&mut coords, slot, model.scale(&t, &c3));
        }
    }

    CohenElement::new(Arc::clone(model), coords)
}

/// p-primary exponent of a truncated Cohen group, as a certificate/witness pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExponent {
    pub prime: u64,
    /// Order of a single-coordinate element, forced by its linear part.
    pub lower: PrimePower,
    pub witness_slot: Option<usize>,
    /// Least tried `p^s` for which the generic tuple's power is the identity.
    pub upper: Option<PrimePower>,
    /// Exponents `s` tried for the certificate and whether `p^s` worked.
    pub attempts: Vec<(u32, bool)>,
}

impl GroupExponent {
    pub fn value(&self) -> Result<ExponentValue> {
        let upper = self.upper.ok_or_else(|| {
            Error::NotApplicable(format!(
                "no symbolic certificate found up to {}^{}",
                self.prime,
                self.attempts.last().map_or(0, |a| a.0)
            ))
        })?;
        Ok(ExponentValue::interval(self.prime, self.lower.exp, upper.exp)
            .with(Rule::SymbolicCertificate))
    }
}

/// How many exponents past the witness the certificate search tries.
const CERTIFICATE_SLACK: u32 = 2;

/// The least `p^s` annihilating every p-torsion element of the truncated group,
/// bracketed by a Type I witness from below and a symbolic certificate on the
/// generic p-torsion tuple from above.
pub fn group_p_exponent<A: CoordinateAlgebra>(model: &A, p: u64) -> Result<GroupExponent> {
    primes::require_prime(p)?;
    let (generic_model, coords) = model.generic_p_torsion(p)?;
    let generic_model = Arc::new(generic_model);
    let generic = CohenElement::new(Arc::clone(&generic_model), coords)?;

    let mut lower = PrimePower::one(p);
    let mut witness_slot = None;
    for j in 1..=generic.truncation() {
        let o = generic_model.linear_order(generic.coord(j));
        let exp = match &o {
            Order::Finite(d) if primes::is_power_of(d, p) => primes::valuation(d, p),
            _ => {
                return Err(Error::Validation(format!(
                    "generic coordinate in slot {j} has order {o}, not a power of {p}"
                )))
            }
        };
        if exp > lower.exp {
            lower = PrimePower::new(p, exp);
            witness_slot = Some(j);
        }
    }
    if let Some(j) = witness_slot {
        // the Type I coordinate of w^{p^{t-1}} is p^{t-1}·α_j ≠ 0
        let w = CohenElement::from_slots(
            Arc::clone(&generic_model),
            [(j, generic.coord(j).clone())],
        )?;
        let below = w.pow_big(&PrimePower::new(p, lower.exp - 1).value());
        debug_assert!(!generic_model.is_zero(below.coord(j)));
        if generic_model.is_zero(below.coord(j)) {
            return Err(Error::Validation(format!("witness in slot {j} failed")));
        }
    }

    let mut attempts = Vec::new();
    let mut upper = None;
    for exp in lower.exp..=lower.exp + CERTIFICATE_SLACK {
        let ok = generic.pow_big(&PrimePower::new(p, exp).value()).is_identity();
        attempts.push((exp, ok));
        if ok {
            upper = Some(PrimePower::new(p, exp));
            break;
        }
    }
    Ok(GroupExponent {
        prime: p,
        lower,
        witness_slot,
        upper,
        attempts,
    })
}

/// Whether an even-sphere tuple supported on odd slots dies at `2^t`.
///
/// Requires the even-sphere relation profile, zero even-slot coordinates,
/// coordinates of order dividing `2^t`, and `t > 1`.
pub fn odd_position_power_check(a: &CohenElement<TargetModel>, t: u32) -> Result<bool> {
    let model = a.model();
    if model.profile() != RelationProfile::EVEN_SPHERE {
        return Err(Error::arg("model does not carry the even-sphere relation profile"));
    }
    if t < 2 {
        return Err(Error::arg(format!("t must exceed 1, got {t}")));
    }
    if let Some(j) = a.support().into_iter().find(|j| j % 2 == 0) {
        return Err(Error::arg(format!("coordinate in even slot {j} is nonzero")));
    }
    let m = PrimePower::new(2, t).value();
    for j in a.support() {
        if !model.class_order(a.coord(j)).divides(&m) {
            return Err(Error::arg(format!(
                "coordinate in slot {j} has order {} not dividing 2^{t}",
                model.class_order(a.coord(j))
            )));
        }
    }
    Ok(a.pow_big(&m).is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::whitehead::BracketSymbol;

    fn formal(r: usize, trunc: usize, profile: RelationProfile, gens: &[(usize, Option<u64>)]) -> Arc<TargetModel> {
        let gens = gens
            .iter()
            .map(|&(slot, o)| Generator {
                slot,
                order: o.map_or(Order::Infinite, Order::finite),
            })
            .collect();
        Arc::new(TargetModel::new(r, trunc, profile, gens).unwrap())
    }

    fn gen_el(m: &Arc<TargetModel>, terms: &[(usize, i64)]) -> CohenElement<TargetModel> {
        let mut coords: Vec<FormalClass> = (1..=m.truncation()).map(FormalClass::zero).collect();
        for &(id, c) in terms {
            let x = m.generator_class(id, c).unwrap();
            let j = x.slot();
            coords[j - 1] = m.add(&coords[j - 1], &x).unwrap();
        }
        CohenElement::new(Arc::clone(m), coords).unwrap()
    }

    #[test]
    fn identity_laws() {
        let m = formal(1, 6, RelationProfile::EVEN_SPHERE, &[(1, None), (2, Some(8)), (3, None)]);
        let e = CohenElement::identity(Arc::clone(&m));
        let x = gen_el(&m, &[(1, 2), (2, 3), (3, -1)]);
        assert_eq!(e.mul(&x).unwrap(), x);
        assert_eq!(x.mul(&e).unwrap(), x);
        assert_eq!(e.mul(&e).unwrap(), e);
        assert_eq!(e.inverse(), e);
        for k in 0..5 {
            assert_eq!(e.pow(k), e);
        }
        assert_eq!(x.pow(0), e);
        assert_eq!(x.pow(1), x);
    }

    #[test]
    fn model_mismatch_is_rejected() {
        let m1 = formal(1, 4, RelationProfile::EVEN_SPHERE, &[(1, None)]);
        let m2 = formal(1, 4, RelationProfile::ODD_SPHERE, &[(1, None)]);
        let a = gen_el(&m1, &[(1, 1)]);
        let b = gen_el(&m2, &[(1, 1)]);
        assert_eq!(a.mul(&b), Err(Error::ModelMismatch));
    }

    #[test]
    fn square_of_two_coordinate_element() {
        // α in slot 1, β in slot 2, r = 1, even sphere, both infinite
        let m = formal(1, 6, RelationProfile::EVEN_SPHERE, &[(1, None), (2, None)]);
        let x = gen_el(&m, &[(1, 1), (2, 1)]);
        let sq = x.pow(2);
        let phi_nn = phi(1, 1).unwrap(); // Φ_{n,2n-1}
        let phi_mm = phi(2, 3).unwrap(); // Φ_{m,2m-1}
        let phi_d = crate::phi::phi_delta(1, 2, 1);
        let expect = |slot: usize, terms: Vec<(BracketSymbol, BigInt)>| m.class(slot, terms).unwrap();
        assert_eq!(*sq.coord(1), expect(1, vec![(BracketSymbol::Gen(1), 2.into())]));
        assert_eq!(*sq.coord(2), expect(2, vec![(BracketSymbol::Gen(2), 2.into()), (BracketSymbol::Pair(1, 1), phi_nn)]));
        assert_eq!(*sq.coord(3), expect(3, vec![(BracketSymbol::Pair(1, 2), phi_d)]));
        assert_eq!(*sq.coord(4), expect(4, vec![(BracketSymbol::Pair(2, 2), phi_mm)]));
        assert!(sq.coord(5).is_zero() && sq.coord(6).is_zero());
    }

    #[test]
    fn inverse_single_odd_order_coordinate() {
        let m = formal(1, 4, RelationProfile::ODD_SPHERE, &[(1, Some(9))]);
        let a = gen_el(&m, &[(1, 1)]);
        let inv = a.inverse();
        assert_eq!(inv, gen_el(&m, &[(1, -1)]));
        assert!(a.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn inverse_with_weight_two_correction() {
        // r = 1: dim(α) = 2 is even, so [α, α] has infinite order
        let m = formal(1, 4, RelationProfile::EVEN_SPHERE, &[(1, None)]);
        let a = gen_el(&m, &[(1, 1)]);
        let inv = a.inverse();
        // b_2 = -Φ_{1,1}[α, -α] = [α, α]
        let expected = m.class(2, [(BracketSymbol::Pair(1, 1), BigInt::one())]).unwrap();
        assert_eq!(*inv.coord(2), expected);
        assert!(a.mul(&inv).unwrap().is_identity());
        // the left product leaves -Φ_{2,2}[[α,α],α] behind in slot 3
        let left = inv.mul(&a).unwrap();
        assert_eq!(left.support(), vec![3]);
        let triple = m.class(3, [(BracketSymbol::Triple(1, 1, 1), BigInt::from(-1))]).unwrap();
        assert_eq!(*left.coord(3), triple);
    }

    #[test]
    fn associativity_defect_is_a_triple() {
        let m = formal(1, 3, RelationProfile::EVEN_SPHERE, &[(1, None)]);
        let a = gen_el(&m, &[(1, 1)]);
        let aa = a.mul(&a).unwrap();
        let left = aa.mul(&a).unwrap();
        let right = a.mul(&aa).unwrap();
        assert_eq!(left.coord(2), right.coord(2));
        assert_eq!(right.coord(3), &FormalClass::zero(3));
        let triple = m.class(3, [(BracketSymbol::Triple(1, 1, 1), BigInt::from(-1))]).unwrap();
        assert_eq!(*left.coord(3), triple);

        // no surviving triples: the law is associative
        let s2 = formal(1, 3, RelationProfile::S2, &[(1, None)]);
        let a = gen_el(&s2, &[(1, 1)]);
        let aa = a.mul(&a).unwrap();
        assert_eq!(aa.mul(&a).unwrap(), a.mul(&aa).unwrap());
        assert!(a.inverse().mul(&a).unwrap().is_identity());
    }

    #[test]
    fn closed_power_is_left_normed() {
        let m = formal(1, 8, RelationProfile::EVEN_SPHERE, &[(1, None), (2, Some(12)), (3, None), (5, Some(9))]);
        let a = gen_el(&m, &[(1, 2), (2, 5), (3, -1), (4, 4)]);
        for k in 0..=20 {
            assert_eq!(a.pow(k), a.pow_iterated(k), "M = {k}");
        }
    }

    #[test]
    fn order_of_odd_sphere_generic_element() {
        let m = formal(2, 6, RelationProfile::ODD_SPHERE, &[(1, Some(25)), (3, Some(25))]);
        let a = gen_el(&m, &[(1, 1), (2, 1)]);
        assert_eq!(a.order(), ElementOrder::Finite(BigUint::from(25u32)));
        assert_eq!(CohenElement::identity(Arc::clone(&m)).order(), ElementOrder::Finite(BigUint::one()));
    }

    #[test]
    fn order_detects_infinite_linear_part() {
        let m = formal(1, 4, RelationProfile::EVEN_SPHERE, &[(1, Some(4)), (3, None)]);
        let a = gen_el(&m, &[(1, 1), (2, 1)]);
        assert_eq!(a.order(), ElementOrder::Infinite { witness_slot: 3 });
    }

    #[test]
    fn order_matches_brute_force() {
        // even sphere, r = 1: [α, α] at slot 2 has order 4, so α has order 8
        let m = formal(1, 6, RelationProfile::EVEN_SPHERE, &[(1, Some(4)), (2, Some(6)), (3, Some(2))]);
        for terms in [
            vec![(1, 1)],
            vec![(1, 1), (2, 1)],
            vec![(1, 3), (2, 2), (3, 1)],
            vec![(2, 5)],
            vec![(1, 2), (3, 1)],
        ] {
            let a = gen_el(&m, &terms);
            let brute = (1..=10_000u64).find(|&k| a.pow_iterated(k).is_identity()).unwrap();
            assert_eq!(a.order(), ElementOrder::Finite(BigUint::from(brute)), "{terms:?}");
        }
        assert_eq!(gen_el(&m, &[(1, 1)]).order(), ElementOrder::Finite(BigUint::from(8u32)));
    }

    #[test]
    fn project_drops_slots() {
        let m = formal(1, 6, RelationProfile::EVEN_SPHERE, &[(1, None), (2, None), (5, Some(3))]);
        let a = gen_el(&m, &[(1, 1), (2, 1), (3, 1)]);
        let b = gen_el(&m, &[(1, -2), (2, 5)]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.project(6).unwrap(), ab);
        for n in 1..=6 {
            let lhs = ab.project(n).unwrap();
            let rhs = a.project(n).unwrap().mul(&b.project(n).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            assert!(CohenElement::identity(Arc::clone(&m)).project(n).unwrap().is_identity());
        }
        assert!(a.project(0).is_err());
        assert!(a.project(7).is_err());
    }

    #[test]
    fn closed_form_matches_printed_square_and_cube() {
        let m = formal(1, 12, RelationProfile::EVEN_SPHERE, &[(2, None), (3, None)]);
        let alpha = m.generator_class(1, 1).unwrap();
        let beta = m.generator_class(2, 1).unwrap();
        let x = gen_el(&m, &[(1, 1), (2, 1)]);
        for e in [0u64, 1, 2, 3, 5] {
            let closed = closed_two_coordinate_power(&m, 2, &alpha, 3, &beta, e).unwrap();
            assert_eq!(closed, x.pow(e), "M = {e}");
        }
        // square: (2α, 2β, Φ_{2,3}[α,α], Φ_{3,5}[β,β], Φ_Δ[α,β]) in slots 2, 3, 4, 6, 5
        let sq = closed_two_coordinate_power(&m, 2, &alpha, 3, &beta, 2).unwrap();
        let pair = |a, b, c: BigInt| (BracketSymbol::Pair(a, b), c);
        assert_eq!(*sq.coord(4), m.class(4, [pair(1, 1, phi(2, 3).unwrap())]).unwrap());
        assert_eq!(*sq.coord(6), m.class(6, [pair(2, 2, phi(3, 5).unwrap())]).unwrap());
        assert_eq!(*sq.coord(5), m.class(5, [pair(1, 2, crate::phi::phi_delta(2, 3, 1))]).unwrap());
        // cube: C(3,2) = 3 on weight 2, C(3,3) = 1 on the triples
        let cube = closed_two_coordinate_power(&m, 2, &alpha, 3, &beta, 3).unwrap();
        assert_eq!(*cube.coord(4), m.class(4, [pair(1, 1, 3 * phi(2, 3).unwrap())]).unwrap());
        let triple = BracketSymbol::Triple(1, 1, 1);
        let coeff = phi(2, 3).unwrap() * phi(4, 5).unwrap();
        assert_eq!(cube.coord(6).terms().get(&triple), m.class(6, [(triple, coeff)]).unwrap().terms().get(&triple));
    }

    #[test]
    fn group_exponent_odd_sphere() {
        let m = formal(1, 8, RelationProfile::ODD_SPHERE, &(1..=8).map(|j| (j, Some(9))).collect::<Vec<_>>());
        let g = group_p_exponent(m.as_ref(), 3).unwrap();
        assert_eq!(g.lower, PrimePower::new(3, 2));
        assert_eq!(g.upper, Some(PrimePower::new(3, 2)));
        assert_eq!(g.value().unwrap().to_string(), "exact 3^2");
    }

    #[test]
    fn group_exponent_even_sphere_two_primary() {
        let m = formal(1, 8, RelationProfile::EVEN_SPHERE, &(1..=8).map(|j| (j, Some(4))).collect::<Vec<_>>());
        let g = group_p_exponent(m.as_ref(), 2).unwrap();
        assert_eq!(g.lower, PrimePower::new(2, 2));
        assert_eq!(g.upper, Some(PrimePower::new(2, 3)));
        assert_eq!(g.attempts, vec![(2, false), (3, true)]);
    }

    #[test]
    fn group_exponent_without_torsion() {
        let m = formal(1, 4, RelationProfile::EVEN_SPHERE, &[(1, None), (2, Some(3))]);
        let g = group_p_exponent(m.as_ref(), 2).unwrap();
        assert!(g.lower.is_one());
        assert_eq!(g.upper, Some(PrimePower::one(2)));
        assert_eq!(g.witness_slot, None);
        assert!(group_p_exponent(m.as_ref(), 9).is_err());
    }

    #[test]
    fn torsion_probe() {
        let m = formal(1, 4, RelationProfile::EVEN_SPHERE, &[(1, Some(4)), (2, Some(8))]);
        let a = gen_el(&m, &[(1, 1), (2, 3)]);
        assert!(a.torsion_coordinates_check(2).unwrap());
        assert!(CohenElement::identity(Arc::clone(&m)).torsion_coordinates_check(2).unwrap());
        let mixed = formal(1, 4, RelationProfile::EVEN_SPHERE, &[(1, Some(6))]);
        let b = gen_el(&mixed, &[(1, 1)]);
        assert!(matches!(b.torsion_coordinates_check(2), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn odd_position_probe() {
        let m = formal(2, 8, RelationProfile::EVEN_SPHERE, &(1..=8).map(|j| (j, Some(4))).collect::<Vec<_>>());
        let a = gen_el(&m, &[(1, 1), (3, 3), (5, 2), (7, 1)]);
        assert!(odd_position_power_check(&a, 2).unwrap());
        assert!(odd_position_power_check(&CohenElement::identity(Arc::clone(&m)), 2).unwrap());
        let bad = gen_el(&m, &[(1, 1), (2, 1)]);
        assert!(odd_position_power_check(&bad, 2).is_err());
        assert!(odd_position_power_check(&a, 1).is_err());
    }
}
