//! Seeded random elements for property checks.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::abelian::Order;
use crate::cohen::CohenElement;
use crate::targets::{ConcreteClass, ConcreteModel};
use crate::whitehead::{BracketSymbol, FormalClass, TargetModel};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Canonical symbols of nontrivial order living in `slot`.
pub fn symbols_in_slot(model: &TargetModel, slot: usize) -> Vec<BracketSymbol> {
    let ids: Vec<(usize, usize)> = model
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (i + 1, g.slot))
        .filter(|&(_, s)| s <= slot)
        .collect();
    let mut out = Vec::new();
    for &(a, sa) in &ids {
        if sa == slot {
            out.push(BracketSymbol::Gen(a));
        }
        for &(b, sb) in &ids {
            if b < a {
                continue;
            }
            if sa + sb == slot {
                out.push(BracketSymbol::Pair(a, b));
            }
            for &(c, sc) in &ids {
                if sa + sb + sc == slot {
                    out.push(BracketSymbol::Triple(a, b, c));
                }
            }
        }
    }
    out.retain(|s| !model.symbol_order(s).is_one());
    out.sort();
    out
}

fn coefficient(rng: &mut StdRng, order: &Order, span: i64) -> BigInt {
    match order {
        Order::Finite(d) => {
            let bound = u64::try_from(d).unwrap_or(u64::MAX).min(1 << 20);
            BigInt::from(rng.gen_range(0..bound))
        }
        Order::Infinite => BigInt::from(rng.gen_range(-span..=span)),
    }
}

/// Random element: every generator term is present with probability 0.8 and
/// every bracket term with probability `bracket_density`.
pub fn random_element(
    model: &Arc<TargetModel>,
    rng: &mut StdRng,
    bracket_density: f64,
) -> CohenElement<TargetModel> {
    let coords: Vec<FormalClass> = (1..=model.truncation())
        .map(|slot| {
            let mut terms: Vec<(BracketSymbol, BigInt)> = Vec::new();
            for s in symbols_in_slot(model, slot) {
                let p = if s.weight() == 1 { 0.8 } else { bracket_density };
                if rng.gen_bool(p) {
                    terms.push((s, coefficient(rng, &model.symbol_order(&s), 4)));
                }
            }
            model.class(slot, terms).expect("symbols live in their slot")
        })
        .collect();
    CohenElement::new(Arc::clone(model), coords).expect("valid by construction")
}

/// Random element supported on the generators only.
pub fn random_linear_element(model: &Arc<TargetModel>, rng: &mut StdRng) -> CohenElement<TargetModel> {
    random_element(model, rng, 0.0)
}

/// Random element of a concrete model.
pub fn random_concrete(model: &Arc<ConcreteModel>, rng: &mut StdRng) -> CohenElement<ConcreteModel> {
    let coords = model
        .groups()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let coeffs: Vec<i64> = g
                .factors()
                .iter()
                .map(|d| {
                    let o = if d == &0u32.into() {
                        Order::Infinite
                    } else {
                        Order::Finite(d.clone())
                    };
                    i64::try_from(coefficient(rng, &o, 6)).unwrap_or(0)
                })
                .collect();
            model.class(i + 1, &coeffs).expect("sized to the group")
        })
        .collect::<Vec<ConcreteClass>>();
    CohenElement::new(Arc::clone(model), coords).expect("valid by construction")
}
