//! Exact bounds for multi-asset option prices on the lattice `Λ = {0,1}^m`.
//!
//! One-step martingale densities form the polytope `P(b)`; its supervertex
//! and subvertex give closed-form extremal expectations for ℓ-positive
//! payoffs, and the per-node LP tree algorithm serves as an exact oracle.

pub mod error;
pub mod fast_bounds;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod lpos;
pub mod polytope;
pub mod pricing;
pub mod rational;
pub mod sample;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{LatticeElement, LatticeVector, Permutation};
pub use lp::{Direction, LpOutcome, LpProblem, LpSolution};
pub use polytope::{PolytopeSpec, VertexDensity, VertexKind};
pub use pricing::{MarketModel, PriceInterval};
pub use rational::Rational;
pub use tree::{EuropeanPayoff, Payoff, TreeConfig, TreePolicy, Word};
