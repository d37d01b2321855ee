//! Formal Whitehead bracket algebra over a target model.
//!
//! Coordinates of a formal Cohen element are integer combinations of bracket
//! symbols of weight at most 3: generators `g`, pairs `[g_a, g_b]` and
//! left-normed triples `[[g_a, g_b], g_c]`. Brackets of total weight 4 or more
//! vanish. Each symbol has the largest order compatible with the relations of
//! the target's [`RelationProfile`], so an identity that holds here holds in
//! every genuine target satisfying the same relations.
//!
//! The Jacobi identity is not imposed. Only inner-pair antisymmetry is used to
//! canonicalize symbols, so the weight-3 part is a free over-approximation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::{self, gcd_of_finite, Order};
use crate::error::{Error, Result};

/// `(-1)^{dim_x · dim_y}`, the sign in `[y, x] = ±[x, y]`.
pub fn swap_sign(dim_x: u64, dim_y: u64) -> i32 {
    if dim_x % 2 == 1 && dim_y % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Universal annihilators for brackets in a target.
///
/// `u2 > 0` means `u2·[x, y] = 0` for all `x, y` (`u2 = 1`: all brackets
/// vanish). `u3 > 0` means `u3·[[x, y], z] = 0` (`u3 = 1`: all triples vanish).
/// Zero means no universal relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RelationProfile {
    pub u2: u64,
    pub u3: u64,
    pub w4_vanish: bool,
}

impl RelationProfile {
    pub fn new(u2: u64, u3: u64) -> Result<Self> {
        if !matches!(u3, 0 | 1 | 3) {
            return Err(Error::Validation(format!(
                "weight-3 annihilator must be 0, 1 or 3, got {u3}"
            )));
        }
        Ok(RelationProfile {
            u2,
            u3,
            w4_vanish: true,
        })
    }

    /// Odd sphere `S^N`, `N > 3`: `2[α,β] = 0` and all triples vanish.
    pub const ODD_SPHERE: RelationProfile = RelationProfile {
        u2: 2,
        u3: 1,
        w4_vanish: true,
    };
    /// `S³` is a group, so every Whitehead product vanishes.
    pub const S3: RelationProfile = RelationProfile {
        u2: 1,
        u3: 1,
        w4_vanish: true,
    };
    /// Even sphere `S^N`, `N > 2`: `3[[α,β],γ] = 0`.
    pub const EVEN_SPHERE: RelationProfile = RelationProfile {
        u2: 0,
        u3: 3,
        w4_vanish: true,
    };
    /// `S²`: all triple products vanish.
    pub const S2: RelationProfile = RelationProfile {
        u2: 0,
        u3: 1,
        w4_vanish: true,
    };
    /// `HP^∞`: `12[α,β] = 0` and `3[[α,β],γ] = 0`.
    pub const HP_INFINITY: RelationProfile = RelationProfile {
        u2: 12,
        u3: 3,
        w4_vanish: true,
    };
}

/// A formal generator `α ∈ π_{slot·r+1}(Y)` of the given additive order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub slot: usize,
    pub order: Order,
}

/// Bracket symbol in normal form. Generator ids are 1-based.
///
/// Pairs are stored with `a <= b`; triples are left-normed `[[a, b], c]` with
/// `a <= b` in the inner pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketSymbol {
    Gen(usize),
    Pair(usize, usize),
    Triple(usize, usize, usize),
}

impl BracketSymbol {
    pub fn weight(&self) -> usize {
        match self {
            BracketSymbol::Gen(_) => 1,
            BracketSymbol::Pair(..) => 2,
            BracketSymbol::Triple(..) => 3,
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        match *self {
            BracketSymbol::Gen(a) => vec![a],
            BracketSymbol::Pair(a, b) => vec![a, b],
            BracketSymbol::Triple(a, b, c) => vec![a, b, c],
        }
    }
}

impl fmt::Display for BracketSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketSymbol::Gen(a) => write!(f, "g{a}"),
            BracketSymbol::Pair(a, b) => write!(f, "[g{a},g{b}]"),
            BracketSymbol::Triple(a, b, c) => write!(f, "[[g{a},g{b}],g{c}]"),
        }
    }
}

/// Integer combination of bracket symbols, all living in the same slot.
///
/// Coefficients are reduced modulo the symbol orders; zero terms and
/// symbols of order 1 are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalClass {
    slot: usize,
    terms: BTreeMap<BracketSymbol, BigInt>,
}

impl FormalClass {
    pub fn zero(slot: usize) -> Self {
        FormalClass {
            slot,
            terms: BTreeMap::new(),
        }
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    pub fn terms(&self) -> &BTreeMap<BracketSymbol, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same class with only the terms of the given weight.
    pub fn weight_part(&self, weight: usize) -> FormalClass {
        FormalClass {
            slot: self.slot,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.weight() == weight)
                .map(|(s, c)| (*s, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("{c}*{s}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Model of `Ω(Y)` for the formal backend: the suspension parameter `r`,
/// the truncation bound, the relation profile and the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TargetModel {
    r: usize,
    truncation: usize,
    profile: RelationProfile,
    generators: Vec<Generator>,
}

impl TargetModel {
    pub fn new(
        r: usize,
        truncation: usize,
        profile: RelationProfile,
        generators: Vec<Generator>,
    ) -> Result<Self> {
        if r < 1 {
            return Err(Error::Validation("r must be at least 1".into()));
        }
        if truncation < 1 {
            return Err(Error::Validation("truncation must be at least 1".into()));
        }
        if !profile.w4_vanish {
            return Err(Error::Validation(
                "only targets whose weight-4 brackets vanish are supported".into(),
            ));
        }
        RelationProfile::new(profile.u2, profile.u3)?;
        for (i, g) in generators.iter().enumerate() {
            if g.slot < 1 {
                return Err(Error::Validation(format!("generator g{} sits in slot 0", i + 1)));
            }
            if g.order.is_one() {
                return Err(Error::Validation(format!("generator g{} has order 1", i + 1)));
            }
        }
        Ok(TargetModel {
            r,
            truncation,
            profile,
            generators,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn profile(&self) -> RelationProfile {
        self.profile
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generator by 1-based id.
    pub fn generator(&self, id: usize) -> Option<&Generator> {
        id.checked_sub(1).and_then(|i| self.generators.get(i))
    }

    /// `(id, generator)` pairs sitting in `slot`.
    pub fn generators_at(&self, slot: usize) -> impl Iterator<Item = (usize, &Generator)> {
        self.generators
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.slot == slot)
            .map(|(i, g)| (i + 1, g))
    }

    /// A copy of this model with a different generator set.
    pub fn with_generators(&self, generators: Vec<Generator>) -> Result<Self> {
        TargetModel::new(self.r, self.truncation, self.profile, generators)
    }

    /// A copy with fewer slots. Generators above the bound are kept so that
    /// ids stay stable; they never occur in a coordinate.
    pub fn truncated(&self, truncation: usize) -> Result<Self> {
        if truncation < 1 || truncation > self.truncation {
            return Err(Error::arg(format!(
                "truncation {truncation} outside 1..={}",
                self.truncation
            )));
        }
        TargetModel::new(self.r, truncation, self.profile, self.generators.clone())
    }

    pub fn slot_dimension(&self, slot: usize) -> u64 {
        (slot * self.r + 1) as u64
    }

    fn gen(&self, id: usize) -> Result<&Generator> {
        self.generator(id)
            .ok_or_else(|| Error::Validation(format!("unknown generator g{id}")))
    }

    fn gen_slot(&self, id: usize) -> usize {
        self.generators[id - 1].slot
    }

    fn gen_dim(&self, id: usize) -> u64 {
        self.slot_dimension(self.gen_slot(id))
    }

    pub fn symbol_slot(&self, sym: &BracketSymbol) -> usize {
        sym.leaves().iter().map(|&a| self.gen_slot(a)).sum()
    }

    /// Degree law `dim [x, y] = dim x + dim y - 1`.
    pub fn symbol_dimension(&self, sym: &BracketSymbol) -> u64 {
        self.slot_dimension(self.symbol_slot(sym))
    }

    fn pair_annihilators(&self, a: usize, b: usize) -> Vec<num_bigint::BigUint> {
        let mut ann = Vec::with_capacity(4);
        for id in [a, b] {
            if let Order::Finite(d) = &self.generators[id - 1].order {
                ann.push(d.clone());
            }
        }
        if self.profile.u2 > 0 {
            ann.push(self.profile.u2.into());
        }
        if a == b && self.gen_dim(a) % 2 == 1 {
            // [x, x] = -[x, x] in odd dimension
            ann.push(2u32.into());
        }
        ann
    }

    /// Order of a symbol: the gcd of every annihilator the relations impose.
    ///
    /// A triple `[[a, b], c]` inherits the annihilators of its inner pair, so
    /// that bracketing is well defined on coefficients reduced modulo the
    /// pair's order.
    pub fn symbol_order(&self, sym: &BracketSymbol) -> Order {
        match *sym {
            BracketSymbol::Gen(a) => self.generators[a - 1].order.clone(),
            BracketSymbol::Pair(a, b) => gcd_of_finite(&self.pair_annihilators(a, b)),
            BracketSymbol::Triple(a, b, c) => {
                if self.profile.u3 == 1 {
                    return Order::one();
                }
                let mut ann = self.pair_annihilators(a, b);
                if let Order::Finite(d) = &self.generators[c - 1].order {
                    ann.push(d.clone());
                }
                if self.profile.u3 > 0 {
                    ann.push(self.profile.u3.into());
                }
                gcd_of_finite(&ann)
            }
        }
    }

    /// Order of `[g, g]` for a generator.
    pub fn self_bracket_order(&self, id: usize) -> Result<Order> {
        self.gen(id)?;
        Ok(self.symbol_order(&BracketSymbol::Pair(id, id)))
    }

    /// Normal form of a possibly non-canonical symbol, with the sign picked up.
    pub fn canonicalize(&self, sym: BracketSymbol) -> Result<(BracketSymbol, i32)> {
        for a in sym.leaves() {
            self.gen(a)?;
        }
        Ok(match sym {
            BracketSymbol::Pair(a, b) if a > b => (
                BracketSymbol::Pair(b, a),
                swap_sign(self.gen_dim(a), self.gen_dim(b)),
            ),
            BracketSymbol::Triple(a, b, c) if a > b => (
                BracketSymbol::Triple(b, a, c),
                swap_sign(self.gen_dim(a), self.gen_dim(b)),
            ),
            s => (s, 1),
        })
    }

    fn accumulate(&self, terms: &mut BTreeMap<BracketSymbol, BigInt>, sym: BracketSymbol, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let order = self.symbol_order(&sym);
        if order.is_one() {
            return;
        }
        let entry = terms.entry(sym).or_insert_with(BigInt::zero);
        *entry += c;
        let reduced = abelian::reduce(entry, &order);
        if reduced.is_zero() {
            terms.remove(&sym);
        } else {
            *entry = reduced;
        }
    }

    /// Build a class in `slot` from arbitrary (possibly non-canonical) terms.
    pub fn class(
        &self,
        slot: usize,
        terms: impl IntoIterator<Item = (BracketSymbol, BigInt)>,
    ) -> Result<FormalClass> {
        let mut out = BTreeMap::new();
        for (sym, c) in terms {
            let (sym, sign) = self.canonicalize(sym)?;
            let s = self.symbol_slot(&sym);
            if s != slot {
                return Err(Error::Validation(format!(
                    "{sym} lives in slot {s}, not slot {slot}"
                )));
            }
            self.accumulate(&mut out, sym, c * sign);
        }
        Ok(FormalClass { slot, terms: out })
    }

    /// `c · g_id` as a class in the generator's slot.
    pub fn generator_class(&self, id: usize, c: impl Into<BigInt>) -> Result<FormalClass> {
        let slot = self.gen(id)?.slot;
        self.class(slot, [(BracketSymbol::Gen(id), c.into())])
    }

    /// Checks that a class is in normal form for this model.
    pub fn validate(&self, x: &FormalClass) -> Result<()> {
        let rebuilt = self.class(x.slot, x.terms.iter().map(|(s, c)| (*s, c.clone())))?;
        if rebuilt != *x {
            return Err(Error::Validation(format!("class {x} is not in normal form")));
        }
        Ok(())
    }

    pub fn add(&self, x: &FormalClass, y: &FormalClass) -> Result<FormalClass> {
        if x.slot != y.slot {
            return Err(Error::arg(format!(
                "cannot add classes from slots {} and {}",
                x.slot, y.slot
            )));
        }
        Ok(self.add_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: &FormalClass, y: &FormalClass) -> FormalClass {
        let mut terms = x.terms.clone();
        for (s, c) in &y.terms {
            self.accumulate(&mut terms, *s, c.clone());
        }
        FormalClass {
            slot: x.slot,
            terms,
        }
    }

    pub fn scale(&self, x: &FormalClass, k: &BigInt) -> FormalClass {
        let mut terms = BTreeMap::new();
        for (s, c) in &x.terms {
            self.accumulate(&mut terms, *s, c * k);
        }
        FormalClass {
            slot: x.slot,
            terms,
        }
    }

    pub fn neg(&self, x: &FormalClass) -> FormalClass {
        self.scale(x, &BigInt::from(-1))
    }

    /// Bracket of two symbols, or `None` when the weight exceeds 3.
    fn bracket_symbols(&self, s: &BracketSymbol, t: &BracketSymbol) -> Option<(BracketSymbol, i32)> {
        use BracketSymbol::*;
        match (*s, *t) {
            (Gen(a), Gen(b)) => {
                if a <= b {
                    Some((Pair(a, b), 1))
                } else {
                    Some((Pair(b, a), swap_sign(self.gen_dim(a), self.gen_dim(b))))
                }
            }
            (Pair(a, b), Gen(c)) => Some((Triple(a, b, c), 1)),
            (Gen(a), Pair(b, c)) => {
                let inner = self.symbol_dimension(t);
                Some((Triple(b, c, a), swap_sign(self.gen_dim(a), inner)))
            }
            _ => None,
        }
    }

    /// Bilinear Whitehead bracket of two classes.
    pub fn bracket(&self, x: &FormalClass, y: &FormalClass) -> Result<FormalClass> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &FormalClass, y: &FormalClass) -> FormalClass {
        let mut terms = BTreeMap::new();
        for (s, c) in &x.terms {
            for (t, d) in &y.terms {
                if let Some((sym, sign)) = self.bracket_symbols(s, t) {
                    self.accumulate(&mut terms, sym, c * d * sign);
                }
            }
        }
        FormalClass {
            slot: x.slot + y.slot,
            terms,
        }
    }

    /// Additive order of a class: lcm of the orders of its terms.
    pub fn class_order(&self, x: &FormalClass) -> Order {
        x.terms
            .iter()
            .map(|(s, c)| abelian::coefficient_order(c, &self.symbol_order(s)))
            .fold(Order::one(), |acc, o| acc.lcm(&o))
    }

    /// Additive order of the weight-1 part of a class.
    pub fn linear_order(&self, x: &FormalClass) -> Order {
        self.class_order(&x.weight_part(1))
    }
}
