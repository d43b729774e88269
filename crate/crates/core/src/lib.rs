//! Exact construction and verification of sieving polynomials for finite
//! abelian and dihedral group actions on finite sets.
//!
//! Given a group action, the crate computes orbits and stabilizer structure,
//! builds per-orbit polynomials whose evaluations at tuples of roots of unity
//! count fixed points, assembles them into a single polynomial for the whole
//! action, and verifies every evaluation against brute-force fixed-point
//! counts in exact rational arithmetic. Nothing in the primary pipeline uses
//! floating point.

pub mod abelian_action;
pub mod cyclotomic;
pub mod dihedral;
pub mod multipoly;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod sieving;

pub use abelian_action::{AbelianActionSpec, Action, ActionError, OrbitData, StabilizerData};
pub use cyclotomic::{CyclotomicError, CyclotomicNumber};
pub use dihedral::{DihedralAction, DihedralActionSpec, DihedralError, DihedralOrbitData};
pub use multipoly::{EvaluationPoint, MultiPoly, PolyError, VariableProfile};
pub use oracle::{GeneratedAction, OracleError, RandomActionParams, VerificationVerdict};
pub use rational::Rational;
pub use report::{GroupDescriptor, SieveReport};
pub use sieving::{ConstructionTag, OrbitPolynomial, SievingError};
