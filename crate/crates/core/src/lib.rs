//! Exact computation in truncated total Cohen groups `[Ω(S^{r+1}), Ω(Y)]`.
//!
//! An element is a tuple `(α_1, …, α_N)` with `α_j ∈ π_{jr+1}(Y)`, multiplied by
//! the Whitehead-product-corrected law
//!
//! ```text
//! (α ⊛ β)_j = α_j + β_j + Σ_{i+s=j} Φ_{i,i+s-1} [α_i, β_s]
//! ```
//!
//! Coordinates live either in a *formal* bracket algebra over a [`TargetModel`]
//! (free up to the torsion relations known for the target) or in *concrete*
//! finitely generated abelian groups for bracket-free targets such as `S³`.
//!
//! The crate also ships a catalog of exponent transport rules
//! ([`exponents`]) and a bundled table of homotopy groups of spheres
//! ([`targets::bundled_table`]).

pub mod abelian;
pub mod cohen;
pub mod error;
pub mod exponents;
pub mod notation;
pub mod phi;
pub mod primes;
pub mod sample;
pub mod targets;
pub mod verify;
pub mod whitehead;

pub use abelian::{FgAbGroup, GroupElement, Order};
pub use cohen::{CohenElement, CoordinateAlgebra, ElementOrder, GroupExponent};
pub use error::{Error, Result};
pub use exponents::{ExponentValue, SpaceDescriptor};
pub use primes::PrimePower;
pub use targets::{ConcreteModel, HomotopyTable};
pub use whitehead::{BracketSymbol, FormalClass, Generator, RelationProfile, TargetModel};
